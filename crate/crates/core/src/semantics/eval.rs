//! Tarski-style evaluation by exhaustion over the finite domain.

use std::collections::BTreeMap;

use crate::error::EvalError;
use crate::rational::Rational;
use crate::semantics::structure::{tuple_index, ClassicalStructure, FiniteMetricStructure};
use crate::syntax::{ClassicalFormula, Formula, Term, Theory};

/// Variable name to point index.
pub type Assignment = BTreeMap<String, usize>;

struct Env<'a> {
    base: &'a Assignment,
    stack: Vec<(&'a str, usize)>,
}

impl<'a> Env<'a> {
    fn new(base: &'a Assignment) -> Self {
        Env {
            base,
            stack: Vec::new(),
        }
    }

    fn lookup(&self, v: &str) -> Result<usize, EvalError> {
        self.stack
            .iter()
            .rev()
            .find(|(name, _)| *name == v)
            .map(|(_, p)| *p)
            .or_else(|| self.base.get(v).copied())
            .ok_or_else(|| EvalError::Unassigned(v.to_string()))
    }
}

trait Domain {
    fn size(&self) -> usize;
    fn func(&self, name: &str, args: &[usize]) -> Result<usize, EvalError>;
    fn constant(&self, name: &str) -> Result<usize, EvalError>;
}

fn uninterpreted(kind: &'static str, name: &str) -> EvalError {
    EvalError::Uninterpreted {
        kind,
        name: name.to_string(),
    }
}

impl Domain for FiniteMetricStructure {
    fn size(&self) -> usize {
        self.labels.len()
    }

    fn func(&self, name: &str, args: &[usize]) -> Result<usize, EvalError> {
        let i = self.func_index(name).ok_or_else(|| uninterpreted("function", name))?;
        Ok(self.funcs[i][tuple_index(self.size(), args)])
    }

    fn constant(&self, name: &str) -> Result<usize, EvalError> {
        let i = self.const_index(name).ok_or_else(|| uninterpreted("constant", name))?;
        Ok(self.consts[i])
    }
}

impl Domain for ClassicalStructure {
    fn size(&self) -> usize {
        self.labels.len()
    }

    fn func(&self, name: &str, args: &[usize]) -> Result<usize, EvalError> {
        let i = self.func_index(name).ok_or_else(|| uninterpreted("function", name))?;
        Ok(self.funcs[i][tuple_index(self.size(), args)])
    }

    fn constant(&self, name: &str) -> Result<usize, EvalError> {
        let i = self.const_index(name).ok_or_else(|| uninterpreted("constant", name))?;
        Ok(self.consts[i])
    }
}

fn eval_term<D: Domain>(m: &D, t: &Term, env: &Env<'_>) -> Result<usize, EvalError> {
    match t {
        Term::Var(v) => {
            let p = env.lookup(v)?;
            if p >= m.size() {
                return Err(EvalError::NoSuchPoint(p));
            }
            Ok(p)
        }
        Term::Const(c) => m.constant(c),
        Term::App(f, args) => {
            let args = args
                .iter()
                .map(|a| eval_term(m, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            m.func(f, &args)
        }
    }
}

/// Value of `formula` in `m` under `assignment`.
pub fn eval(m: &FiniteMetricStructure, formula: &Formula, assignment: &Assignment) -> Result<Rational, EvalError> {
    let mut env = Env::new(assignment);
    eval_in(m, formula, &mut env)
}

/// Value of a sentence.
pub fn eval_sentence(m: &FiniteMetricStructure, formula: &Formula) -> Result<Rational, EvalError> {
    eval(m, formula, &Assignment::new())
}

fn quantify<'a>(
    m: &FiniteMetricStructure,
    var: &'a str,
    body: &'a Formula,
    env: &mut Env<'a>,
    sup: bool,
) -> Result<Rational, EvalError> {
    let mut acc: Option<Rational> = None;
    for p in 0..m.size() {
        env.stack.push((var, p));
        let v = eval_in(m, body, env);
        env.stack.pop();
        let v = v?;
        acc = Some(match acc {
            None => v,
            Some(a) if sup => a.max(v),
            Some(a) => a.min(v),
        });
    }
    Ok(acc.expect("structures are nonempty"))
}

fn eval_in<'a>(m: &FiniteMetricStructure, formula: &'a Formula, env: &mut Env<'a>) -> Result<Rational, EvalError> {
    match formula {
        Formula::Atomic(p, args) => {
            let i = m.pred_index(p).ok_or_else(|| uninterpreted("predicate", p))?;
            let pts = args
                .iter()
                .map(|t| eval_term(m, t, env))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(m.preds[i][tuple_index(m.size(), &pts)])
        }
        Formula::Dist(a, b) => {
            let (a, b) = (eval_term(m, a, env)?, eval_term(m, b, env)?);
            Ok(m.dist[a][b])
        }
        Formula::Max(xs) | Formula::Min(xs) => {
            let is_max = matches!(formula, Formula::Max(_));
            let mut acc: Option<Rational> = None;
            for x in xs {
                let v = eval_in(m, x, env)?;
                acc = Some(match acc {
                    None => v,
                    Some(a) if is_max => a.max(v),
                    Some(a) => a.min(v),
                });
            }
            acc.ok_or_else(|| EvalError::Unassigned("empty max/min".into()))
        }
        Formula::Affine {
            coeffs,
            constant,
            args,
        } => {
            let mut acc = *constant;
            for (c, x) in coeffs.iter().zip(args) {
                acc += *c * eval_in(m, x, env)?;
            }
            Ok(acc)
        }
        Formula::Unary(c, x) => Ok(c.eval(eval_in(m, x, env)?)),
        Formula::Sup(v, x) => quantify(m, v, x, env, true),
        Formula::Inf(v, x) => quantify(m, v, x, env, false),
        Formula::H(h) => {
            let mut lower: Option<Rational> = None;
            let mut upper: Option<Rational> = None;
            for p in 0..m.size() {
                env.stack.push((h.var.as_str(), p));
                let phi = eval_in(m, &h.phi, env);
                let psi = phi.as_ref().ok().map(|_| eval_in(m, &h.psi, env));
                env.stack.pop();
                let phi = phi?;
                let psi = psi.expect("evaluated when phi succeeds")?;
                lower = Some(lower.map_or(phi, |a| a.min(phi)));
                let inner = h.d.eval(phi).min(h.delta).min(psi);
                upper = Some(upper.map_or(inner, |a| a.max(inner)));
            }
            Ok(lower.unwrap().max(upper.unwrap()))
        }
    }
}

/// Truth of `formula` in `m` under `assignment`.
pub fn eval_classical(m: &ClassicalStructure, formula: &ClassicalFormula, assignment: &Assignment) -> Result<bool, EvalError> {
    let mut env = Env::new(assignment);
    eval_classical_in(m, formula, &mut env)
}

fn eval_classical_in<'a>(
    m: &ClassicalStructure,
    formula: &'a ClassicalFormula,
    env: &mut Env<'a>,
) -> Result<bool, EvalError> {
    use ClassicalFormula as CF;
    Ok(match formula {
        CF::True => true,
        CF::False => false,
        CF::Atomic(r, args) => {
            let i = m.relation_index(r).ok_or_else(|| uninterpreted("relation", r))?;
            let pts = args
                .iter()
                .map(|t| eval_term(m, t, env))
                .collect::<Result<Vec<_>, _>>()?;
            m.relations[i][tuple_index(m.size(), &pts)]
        }
        CF::Equal(a, b) => eval_term(m, a, env)? == eval_term(m, b, env)?,
        CF::Not(a) => !eval_classical_in(m, a, env)?,
        CF::And(a, b) => eval_classical_in(m, a, env)? && eval_classical_in(m, b, env)?,
        CF::Or(a, b) => eval_classical_in(m, a, env)? || eval_classical_in(m, b, env)?,
        CF::Implies(a, b) => !eval_classical_in(m, a, env)? || eval_classical_in(m, b, env)?,
        CF::Exists(v, a) | CF::Forall(v, a) => {
            let exists = matches!(formula, CF::Exists(..));
            for p in 0..m.size() {
                env.stack.push((v.as_str(), p));
                let t = eval_classical_in(m, a, env);
                env.stack.pop();
                if t? == exists {
                    return Ok(exists);
                }
            }
            !exists
        }
    })
}

/// Outcome of checking a theory: the index of the first condition whose
/// sentence exceeds its threshold, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoryCheck {
    pub violated: Option<usize>,
}

impl TheoryCheck {
    pub fn satisfied(&self) -> bool {
        self.violated.is_none()
    }
}

pub fn satisfies_theory(m: &FiniteMetricStructure, theory: &Theory) -> Result<TheoryCheck, EvalError> {
    for (i, c) in theory.iter().enumerate() {
        let free = c.sentence.free_vars();
        if !free.is_empty() {
            return Err(EvalError::OpenSentence(free.into_iter().collect()));
        }
        if eval_sentence(m, &c.sentence)? > c.threshold {
            return Ok(TheoryCheck { violated: Some(i) });
        }
    }
    Ok(TheoryCheck { violated: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::semantics::structure::discrete_metrization;
    use crate::syntax::{parse_classical_inferred, ClassicalSignature, Condition, PLFunc, Signature};

    fn structure() -> FiniteMetricStructure {
        let one = Rational::ONE;
        let sig = Signature::new(one)
            .with_predicate("P", 1, Rational::ZERO, one, one)
            .with_predicate("Q", 1, Rational::ZERO, one, one)
            .with_constant("c");
        let mut m = FiniteMetricStructure::discrete(sig, FiniteMetricStructure::numbered_labels(2));
        m.set_dist(0, 1, rat(2, 3));
        m.set_pred("P", &[0], rat(1, 3));
        m.set_pred("Q", &[0], rat(2, 3));
        m.set_const("c", 1);
        m
    }

    #[test]
    fn basic_examples() {
        let m = structure();
        let f = Formula::inf("x", Formula::dist(Term::var("x"), Term::constant("c")));
        assert_eq!(eval_sentence(&m, &f).unwrap(), Rational::ZERO);
        let a = Assignment::from([("a".to_string(), 0)]);
        let g = Formula::Max(vec![Formula::atom_vars("P", &["a"]), Formula::atom_vars("Q", &["a"])]);
        assert_eq!(eval(&m, &g, &a).unwrap(), rat(2, 3));
        assert_eq!(
            eval(&m, &g, &Assignment::new()),
            Err(EvalError::Unassigned("a".into()))
        );
    }

    #[test]
    fn h_node_matches_desugaring() {
        let m = structure();
        let h = Formula::h(
            "x",
            PLFunc::one_minus(),
            Formula::atom_vars("P", &["x"]),
            Formula::atom_vars("Q", &["x"]),
        )
        .unwrap();
        let Formula::H(node) = &h else { unreachable!() };
        assert_eq!(
            eval_sentence(&m, &h).unwrap(),
            eval_sentence(&m, &Formula::desugar_h(node)).unwrap()
        );
    }

    #[test]
    fn counterexample_truth_values() {
        let (phi, sig) = parse_classical_inferred("forall x1. forall x2. exists y. (y != x1 & y != x2)").unwrap();
        let m = ClassicalStructure::empty(sig, vec!["1".into(), "2".into()]);
        assert!(!eval_classical(&m, &phi, &Assignment::new()).unwrap());
        assert!(eval_classical(&m.product(&m), &phi, &Assignment::new()).unwrap());
        // with a disjunction the sentence only says there are two elements
        let (weak, _) = parse_classical_inferred("forall x1. forall x2. exists y. (y != x1 | y != x2)").unwrap();
        assert!(eval_classical(&m, &weak, &Assignment::new()).unwrap());
        let (refl, _) = parse_classical_inferred("exists x. x = x").unwrap();
        assert!(eval_classical(&m, &refl, &Assignment::new()).unwrap());
    }

    #[test]
    fn theories() {
        let m = discrete_metrization(&ClassicalStructure::empty(
            ClassicalSignature::default(),
            vec!["a".into()],
        ));
        assert!(satisfies_theory(&m, &vec![]).unwrap().satisfied());
        let bad = vec![Condition::new(Formula::constant(Rational::ONE), Rational::ZERO).unwrap()];
        assert_eq!(satisfies_theory(&m, &bad).unwrap().violated, Some(0));
    }
}
