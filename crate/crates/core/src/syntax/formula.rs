//! Terms and continuous formulas.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::SyntaxError;
use crate::rational::Rational;
use crate::syntax::pl::PLFunc;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.vars_into(&mut out);
        out
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.mentions(var)),
        }
    }

    pub fn substitute(&self, var: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => by.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(var, by)).collect())
            }
        }
    }
}

/// The h-operation `max(inf_x phi, sup_x min(D phi, delta, psi))`.
///
/// `d` is nonincreasing and `delta` caches its unique fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HNode {
    pub var: String,
    pub d: PLFunc,
    pub delta: Rational,
    pub phi: Formula,
    pub psi: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atomic(String, Vec<Term>),
    Dist(Term, Term),
    Max(Vec<Formula>),
    Min(Vec<Formula>),
    /// `constant + sum_i coeffs[i] * args[i]`; with no arguments this is a
    /// constant formula.
    Affine {
        coeffs: Vec<Rational>,
        constant: Rational,
        args: Vec<Formula>,
    },
    Unary(PLFunc, Box<Formula>),
    Sup(String, Box<Formula>),
    Inf(String, Box<Formula>),
    H(Box<HNode>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atomic(pred.to_string(), args)
    }

    /// `pred(v1, ..., vn)` over variables.
    pub fn atom_vars(pred: &str, vars: &[&str]) -> Formula {
        Formula::Atomic(pred.to_string(), vars.iter().map(|v| Term::var(v)).collect())
    }

    pub fn dist(a: Term, b: Term) -> Formula {
        Formula::Dist(a, b)
    }

    pub fn constant(value: Rational) -> Formula {
        Formula::Affine {
            coeffs: Vec::new(),
            constant: value,
            args: Vec::new(),
        }
    }

    pub fn affine(coeffs: Vec<Rational>, constant: Rational, args: Vec<Formula>) -> Formula {
        assert_eq!(coeffs.len(), args.len(), "one coefficient per argument");
        Formula::Affine {
            coeffs,
            constant,
            args,
        }
    }

    /// `a - b`.
    pub fn difference(a: Formula, b: Formula) -> Formula {
        Formula::affine(vec![Rational::ONE, -Rational::ONE], Rational::ZERO, vec![a, b])
    }

    /// `phi + shift`.
    pub fn shifted(phi: Formula, shift: Rational) -> Formula {
        Formula::affine(vec![Rational::ONE], shift, vec![phi])
    }

    pub fn unary(c: PLFunc, phi: Formula) -> Formula {
        Formula::Unary(c, Box::new(phi))
    }

    pub fn sup(var: &str, phi: Formula) -> Formula {
        Formula::Sup(var.to_string(), Box::new(phi))
    }

    pub fn inf(var: &str, phi: Formula) -> Formula {
        Formula::Inf(var.to_string(), Box::new(phi))
    }

    /// `max` of the given formulas; a single formula is returned unchanged.
    pub fn max_of(mut items: Vec<Formula>) -> Formula {
        assert!(!items.is_empty(), "max of nothing");
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Max(items)
        }
    }

    /// `min` of the given formulas; a single formula is returned unchanged.
    pub fn min_of(mut items: Vec<Formula>) -> Formula {
        assert!(!items.is_empty(), "min of nothing");
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Min(items)
        }
    }

    /// Builds an h-node, computing `delta` as the fixed point of `d`.
    pub fn h(var: &str, d: PLFunc, phi: Formula, psi: Formula) -> Result<Formula, SyntaxError> {
        let delta = d.fixed_point()?;
        Ok(Formula::H(Box::new(HNode {
            var: var.to_string(),
            d,
            delta,
            phi,
            psi,
        })))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self {
            Formula::Affine {
                constant, args, ..
            } if args.is_empty() => Some(*constant),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atomic(..) | Formula::Dist(..))
    }

    /// AST depth; atomic formulas and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atomic(..) | Formula::Dist(..) => 0,
            Formula::Affine { args, .. } if args.is_empty() => 0,
            Formula::Max(xs) | Formula::Min(xs) | Formula::Affine { args: xs, .. } => {
                1 + xs.iter().map(Formula::depth).max().unwrap_or(0)
            }
            Formula::Unary(_, f) | Formula::Sup(_, f) | Formula::Inf(_, f) => 1 + f.depth(),
            Formula::H(h) => 1 + h.phi.depth().max(h.psi.depth()),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atomic(..) | Formula::Dist(..) => 1,
            Formula::Max(xs) | Formula::Min(xs) | Formula::Affine { args: xs, .. } => {
                1 + xs.iter().map(Formula::size).sum::<usize>()
            }
            Formula::Unary(_, f) | Formula::Sup(_, f) | Formula::Inf(_, f) => 1 + f.size(),
            Formula::H(h) => 1 + h.phi.size() + h.psi.size(),
        }
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let term_vars = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atomic(_, args) => args.iter().for_each(|t| term_vars(t, bound, out)),
            Formula::Dist(a, b) => {
                term_vars(a, bound, out);
                term_vars(b, bound, out);
            }
            Formula::Max(xs) | Formula::Min(xs) | Formula::Affine { args: xs, .. } => {
                xs.iter().for_each(|f| f.free_vars_into(bound, out))
            }
            Formula::Unary(_, f) => f.free_vars_into(bound, out),
            Formula::Sup(v, f) | Formula::Inf(v, f) => {
                bound.push(v.clone());
                f.free_vars_into(bound, out);
                bound.pop();
            }
            Formula::H(h) => {
                bound.push(h.var.clone());
                h.phi.free_vars_into(bound, out);
                h.psi.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    /// Free variables; `Sup`, `Inf` and h-nodes bind their variable.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.all_vars_into(&mut out);
        out
    }

    fn all_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atomic(_, args) => args.iter().for_each(|t| t.vars_into(out)),
            Formula::Dist(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Formula::Max(xs) | Formula::Min(xs) | Formula::Affine { args: xs, .. } => {
                xs.iter().for_each(|f| f.all_vars_into(out))
            }
            Formula::Unary(_, f) => f.all_vars_into(out),
            Formula::Sup(v, f) | Formula::Inf(v, f) => {
                out.insert(v.clone());
                f.all_vars_into(out);
            }
            Formula::H(h) => {
                out.insert(h.var.clone());
                h.phi.all_vars_into(out);
                h.psi.all_vars_into(out);
            }
        }
    }

    /// Capture-avoiding substitution of `by` for the free occurrences of `var`.
    ///
    /// A binder whose variable occurs in `by` is renamed (by priming) when
    /// `var` occurs free beneath it.
    pub fn substitute(&self, var: &str, by: &Term) -> Formula {
        let by_vars = by.vars();
        self.subst_inner(var, by, &by_vars)
    }

    fn subst_inner(&self, var: &str, by: &Term, by_vars: &BTreeSet<String>) -> Formula {
        match self {
            Formula::Atomic(p, args) => {
                Formula::Atomic(p.clone(), args.iter().map(|t| t.substitute(var, by)).collect())
            }
            Formula::Dist(a, b) => Formula::Dist(a.substitute(var, by), b.substitute(var, by)),
            Formula::Max(xs) => Formula::Max(xs.iter().map(|f| f.subst_inner(var, by, by_vars)).collect()),
            Formula::Min(xs) => Formula::Min(xs.iter().map(|f| f.subst_inner(var, by, by_vars)).collect()),
            Formula::Affine {
                coeffs,
                constant,
                args,
            } => Formula::Affine {
                coeffs: coeffs.clone(),
                constant: *constant,
                args: args.iter().map(|f| f.subst_inner(var, by, by_vars)).collect(),
            },
            Formula::Unary(c, f) => Formula::Unary(c.clone(), Box::new(f.subst_inner(var, by, by_vars))),
            Formula::Sup(v, f) | Formula::Inf(v, f) => {
                let is_sup = matches!(self, Formula::Sup(..));
                let rebuild = |v: String, body: Formula| {
                    if is_sup {
                        Formula::Sup(v, Box::new(body))
                    } else {
                        Formula::Inf(v, Box::new(body))
                    }
                };
                if v == var || !f.free_vars().contains(var) {
                    return self.clone();
                }
                if by_vars.contains(v) {
                    let mut avoid = f.all_vars();
                    avoid.extend(by_vars.iter().cloned());
                    avoid.insert(var.to_string());
                    let fresh = fresh_name(v, &avoid);
                    let renamed = f.substitute(v, &Term::Var(fresh.clone()));
                    rebuild(fresh, renamed.subst_inner(var, by, by_vars))
                } else {
                    rebuild(v.clone(), f.subst_inner(var, by, by_vars))
                }
            }
            Formula::H(h) => {
                let free_below =
                    h.phi.free_vars().contains(var) || h.psi.free_vars().contains(var);
                if h.var == var || !free_below {
                    return self.clone();
                }
                let (bvar, phi, psi) = if by_vars.contains(&h.var) {
                    let mut avoid = h.phi.all_vars();
                    avoid.extend(h.psi.all_vars());
                    avoid.extend(by_vars.iter().cloned());
                    avoid.insert(var.to_string());
                    let fresh = fresh_name(&h.var, &avoid);
                    let t = Term::Var(fresh.clone());
                    (fresh, h.phi.substitute(&h.var, &t), h.psi.substitute(&h.var, &t))
                } else {
                    (h.var.clone(), h.phi.clone(), h.psi.clone())
                };
                Formula::H(Box::new(HNode {
                    var: bvar,
                    d: h.d.clone(),
                    delta: h.delta,
                    phi: phi.subst_inner(var, by, by_vars),
                    psi: psi.subst_inner(var, by, by_vars),
                }))
            }
        }
    }

    /// Renames the free variable `from` to `to`.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        self.substitute(from, &Term::Var(to.to_string()))
    }

    /// The h-node's defining shape `max(inf_x phi, sup_x min(D phi, delta, psi))`.
    pub fn desugar_h(h: &HNode) -> Formula {
        Formula::Max(vec![
            Formula::Inf(h.var.clone(), Box::new(h.phi.clone())),
            Formula::Sup(
                h.var.clone(),
                Box::new(Formula::Min(vec![
                    Formula::Unary(h.d.clone(), Box::new(h.phi.clone())),
                    Formula::constant(h.delta),
                    h.psi.clone(),
                ])),
            ),
        ])
    }
}

/// `base` primed until it avoids every name in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// The condition `sentence <= threshold`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Condition {
    pub sentence: Formula,
    pub threshold: Rational,
}

impl Condition {
    pub fn new(sentence: Formula, threshold: Rational) -> Result<Self, crate::error::EvalError> {
        let free = sentence.free_vars();
        if !free.is_empty() {
            return Err(crate::error::EvalError::OpenSentence(free.into_iter().collect()));
        }
        Ok(Condition {
            sentence,
            threshold,
        })
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} <= {}", self.sentence, self.threshold)
    }
}

/// A finite set of conditions.
pub type Theory = Vec<Condition>;
