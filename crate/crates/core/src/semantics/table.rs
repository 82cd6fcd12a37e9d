//! Whole-table evaluation.
//!
//! A table holds the value of a formula at every assignment of a fixed
//! variable pool, indexed like [`tuple_index`](super::tuple_index). Each
//! connective acts on the tables of its children, so tables of shared
//! subformulas can be computed once and reused. This is an independent
//! evaluation route from [`eval`](super::eval).

use crate::error::EvalError;
use crate::rational::Rational;
use crate::semantics::structure::{tuple_at, tuple_count, tuple_index, FiniteMetricStructure};
use crate::syntax::{Formula, PLFunc, Term};

/// Shape of the tables for a structure with `n` points and a pool of `k`
/// variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub n: usize,
    pub k: usize,
}

impl Shape {
    pub fn len(&self) -> usize {
        tuple_count(self.n, self.k)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn stride(&self, pos: usize) -> usize {
        tuple_count(self.n, self.k - 1 - pos)
    }
}

fn pool_pos(pool: &[String], v: &str) -> Result<usize, EvalError> {
    pool.iter()
        .position(|p| p == v)
        .ok_or_else(|| EvalError::Unassigned(v.to_string()))
}

fn term_table(m: &FiniteMetricStructure, t: &Term, pool: &[String]) -> Result<Vec<usize>, EvalError> {
    let shape = Shape { n: m.size(), k: pool.len() };
    match t {
        Term::Var(v) => {
            let pos = pool_pos(pool, v)?;
            let stride = shape.stride(pos);
            Ok((0..shape.len()).map(|i| (i / stride) % shape.n).collect())
        }
        Term::Const(c) => {
            let i = m.const_index(c).ok_or_else(|| EvalError::Uninterpreted {
                kind: "constant",
                name: c.clone(),
            })?;
            Ok(vec![m.consts[i]; shape.len()])
        }
        Term::App(f, args) => {
            let fi = m.func_index(f).ok_or_else(|| EvalError::Uninterpreted {
                kind: "function",
                name: f.clone(),
            })?;
            let cols = args
                .iter()
                .map(|a| term_table(m, a, pool))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((0..shape.len())
                .map(|i| {
                    let pts: Vec<usize> = cols.iter().map(|c| c[i]).collect();
                    m.funcs[fi][tuple_index(shape.n, &pts)]
                })
                .collect())
        }
    }
}

/// Table of an atomic formula or distance atom.
pub fn atom_table(m: &FiniteMetricStructure, atom: &Formula, pool: &[String]) -> Result<Vec<Rational>, EvalError> {
    match atom {
        Formula::Atomic(p, args) => {
            let pi = m.pred_index(p).ok_or_else(|| EvalError::Uninterpreted {
                kind: "predicate",
                name: p.clone(),
            })?;
            let cols = args
                .iter()
                .map(|a| term_table(m, a, pool))
                .collect::<Result<Vec<_>, _>>()?;
            let len = Shape { n: m.size(), k: pool.len() }.len();
            Ok((0..len)
                .map(|i| {
                    let pts: Vec<usize> = cols.iter().map(|c| c[i]).collect();
                    m.preds[pi][tuple_index(m.size(), &pts)]
                })
                .collect())
        }
        Formula::Dist(a, b) => {
            let (a, b) = (term_table(m, a, pool)?, term_table(m, b, pool)?);
            Ok(a.iter().zip(&b).map(|(&x, &y)| m.dist[x][y]).collect())
        }
        other => panic!("atom_table called on a compound formula: {other}"),
    }
}

pub fn max_tables(tables: &[&[Rational]]) -> Vec<Rational> {
    let mut out = tables[0].to_vec();
    for t in &tables[1..] {
        for (o, v) in out.iter_mut().zip(t.iter()) {
            if *v > *o {
                *o = *v;
            }
        }
    }
    out
}

pub fn min_tables(tables: &[&[Rational]]) -> Vec<Rational> {
    let mut out = tables[0].to_vec();
    for t in &tables[1..] {
        for (o, v) in out.iter_mut().zip(t.iter()) {
            if *v < *o {
                *o = *v;
            }
        }
    }
    out
}

pub fn affine_table(coeffs: &[Rational], constant: Rational, tables: &[&[Rational]], len: usize) -> Vec<Rational> {
    let mut out = vec![constant; len];
    for (c, t) in coeffs.iter().zip(tables) {
        for (o, v) in out.iter_mut().zip(t.iter()) {
            *o += *c * *v;
        }
    }
    out
}

pub fn unary_table(c: &PLFunc, table: &[Rational]) -> Vec<Rational> {
    table.iter().map(|&v| c.eval(v)).collect()
}

/// Sup (or inf) over the pool variable at `pos`. The result no longer
/// depends on that variable.
pub fn quantify_table(table: &[Rational], shape: Shape, pos: usize, sup: bool) -> Vec<Rational> {
    let stride = shape.stride(pos);
    let block = stride * shape.n;
    let mut out = vec![Rational::ZERO; table.len()];
    for start in (0..table.len()).step_by(block) {
        for off in 0..stride {
            let base = start + off;
            let mut acc = table[base];
            for p in 1..shape.n {
                let v = table[base + p * stride];
                if (sup && v > acc) || (!sup && v < acc) {
                    acc = v;
                }
            }
            for p in 0..shape.n {
                out[base + p * stride] = acc;
            }
        }
    }
    out
}

/// `max(inf_x phi, sup_x min(D phi, delta, psi))` with `x` at `pos`.
pub fn h_table(
    phi: &[Rational],
    psi: &[Rational],
    d: &PLFunc,
    delta: Rational,
    shape: Shape,
    pos: usize,
) -> Vec<Rational> {
    let inner: Vec<Rational> = phi
        .iter()
        .zip(psi)
        .map(|(&a, &b)| d.eval(a).min(delta).min(b))
        .collect();
    let lower = quantify_table(phi, shape, pos, false);
    let upper = quantify_table(&inner, shape, pos, true);
    lower.iter().zip(&upper).map(|(&a, &b)| a.max(b)).collect()
}

/// Table of `formula` over all assignments of `pool`, which must contain
/// every variable of the formula, free or bound.
pub fn eval_table(m: &FiniteMetricStructure, formula: &Formula, pool: &[String]) -> Result<Vec<Rational>, EvalError> {
    let shape = Shape { n: m.size(), k: pool.len() };
    Ok(match formula {
        Formula::Atomic(..) | Formula::Dist(..) => atom_table(m, formula, pool)?,
        Formula::Max(xs) | Formula::Min(xs) => {
            let ts = xs
                .iter()
                .map(|x| eval_table(m, x, pool))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&[Rational]> = ts.iter().map(Vec::as_slice).collect();
            if matches!(formula, Formula::Max(_)) {
                max_tables(&refs)
            } else {
                min_tables(&refs)
            }
        }
        Formula::Affine {
            coeffs,
            constant,
            args,
        } => {
            let ts = args
                .iter()
                .map(|x| eval_table(m, x, pool))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&[Rational]> = ts.iter().map(Vec::as_slice).collect();
            affine_table(coeffs, *constant, &refs, shape.len())
        }
        Formula::Unary(c, x) => unary_table(c, &eval_table(m, x, pool)?),
        Formula::Sup(v, x) | Formula::Inf(v, x) => {
            let pos = pool_pos(pool, v)?;
            let t = eval_table(m, x, pool)?;
            quantify_table(&t, shape, pos, matches!(formula, Formula::Sup(..)))
        }
        Formula::H(h) => {
            let pos = pool_pos(pool, &h.var)?;
            let phi = eval_table(m, &h.phi, pool)?;
            let psi = eval_table(m, &h.psi, pool)?;
            h_table(&phi, &psi, &h.d, h.delta, shape, pos)
        }
    })
}

/// The assignment (as pool-ordered points) at table index `i`.
pub fn assignment_at(shape: Shape, i: usize) -> Vec<usize> {
    tuple_at(shape.n, shape.k, i)
}
