//! Classical first-order formulas.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::syntax::formula::{fresh_name, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassicalFormula {
    True,
    False,
    Atomic(String, Vec<Term>),
    Equal(Term, Term),
    Not(Box<ClassicalFormula>),
    And(Box<ClassicalFormula>, Box<ClassicalFormula>),
    Or(Box<ClassicalFormula>, Box<ClassicalFormula>),
    Implies(Box<ClassicalFormula>, Box<ClassicalFormula>),
    Exists(String, Box<ClassicalFormula>),
    Forall(String, Box<ClassicalFormula>),
}

use ClassicalFormula as CF;

impl ClassicalFormula {
    pub fn atom(rel: &str, args: Vec<Term>) -> CF {
        CF::Atomic(rel.to_string(), args)
    }

    pub fn atom_vars(rel: &str, vars: &[&str]) -> CF {
        CF::Atomic(rel.to_string(), vars.iter().map(|v| Term::var(v)).collect())
    }

    pub fn eq(a: Term, b: Term) -> CF {
        CF::Equal(a, b)
    }

    pub fn not(a: CF) -> CF {
        CF::Not(Box::new(a))
    }

    pub fn and(a: CF, b: CF) -> CF {
        CF::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: CF, b: CF) -> CF {
        CF::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: CF, b: CF) -> CF {
        CF::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, a: CF) -> CF {
        CF::Exists(v.to_string(), Box::new(a))
    }

    pub fn forall(v: &str, a: CF) -> CF {
        CF::Forall(v.to_string(), Box::new(a))
    }

    /// The h-operation `(exists x. phi) & forall x. (phi -> psi)`.
    pub fn h_op(v: &str, phi: CF, psi: CF) -> CF {
        CF::and(CF::exists(v, phi.clone()), CF::forall(v, CF::implies(phi, psi)))
    }

    /// Right-nested conjunction; `True` when empty.
    pub fn conj(items: Vec<CF>) -> CF {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => CF::True,
            Some(last) => it.fold(last, |acc, x| CF::and(x, acc)),
        }
    }

    /// Right-nested disjunction; `False` when empty.
    pub fn disj(items: Vec<CF>) -> CF {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => CF::False,
            Some(last) => it.fold(last, |acc, x| CF::or(x, acc)),
        }
    }

    /// Atomic in the classical sense: relations, equalities, `true`, `false`.
    pub fn is_atomic(&self) -> bool {
        matches!(self, CF::True | CF::False | CF::Atomic(..) | CF::Equal(..))
    }

    /// Flattens nested conjunctions into their conjuncts.
    pub fn conjuncts(&self) -> Vec<&CF> {
        match self {
            CF::And(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            other => vec![other],
        }
    }

    pub fn disjuncts(&self) -> Vec<&CF> {
        match self {
            CF::Or(a, b) => {
                let mut v = a.disjuncts();
                v.extend(b.disjuncts());
                v
            }
            other => vec![other],
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CF::True | CF::False | CF::Atomic(..) | CF::Equal(..) => 0,
            CF::Not(a) | CF::Exists(_, a) | CF::Forall(_, a) => 1 + a.depth(),
            CF::And(a, b) | CF::Or(a, b) | CF::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            CF::True | CF::False | CF::Atomic(..) | CF::Equal(..) => 1,
            CF::Not(a) | CF::Exists(_, a) | CF::Forall(_, a) => 1 + a.size(),
            CF::And(a, b) | CF::Or(a, b) | CF::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term, bound: &Vec<String>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            CF::True | CF::False => {}
            CF::Atomic(_, args) => args.iter().for_each(|t| term(t, bound)),
            CF::Equal(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            CF::Not(a) => a.free_into(bound, out),
            CF::And(a, b) | CF::Or(a, b) | CF::Implies(a, b) => {
                a.free_into(bound, out);
                b.free_into(bound, out);
            }
            CF::Exists(v, a) | CF::Forall(v, a) => {
                bound.push(v.clone());
                a.free_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.all_into(&mut out);
        out
    }

    fn all_into(&self, out: &mut BTreeSet<String>) {
        match self {
            CF::True | CF::False => {}
            CF::Atomic(_, args) => args.iter().for_each(|t| t.vars_into(out)),
            CF::Equal(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            CF::Not(a) => a.all_into(out),
            CF::And(a, b) | CF::Or(a, b) | CF::Implies(a, b) => {
                a.all_into(out);
                b.all_into(out);
            }
            CF::Exists(v, a) | CF::Forall(v, a) => {
                out.insert(v.clone());
                a.all_into(out);
            }
        }
    }

    /// Capture-avoiding substitution.
    pub fn substitute(&self, var: &str, by: &Term) -> CF {
        match self {
            CF::True | CF::False => self.clone(),
            CF::Atomic(r, args) => {
                CF::Atomic(r.clone(), args.iter().map(|t| t.substitute(var, by)).collect())
            }
            CF::Equal(a, b) => CF::Equal(a.substitute(var, by), b.substitute(var, by)),
            CF::Not(a) => CF::not(a.substitute(var, by)),
            CF::And(a, b) => CF::and(a.substitute(var, by), b.substitute(var, by)),
            CF::Or(a, b) => CF::or(a.substitute(var, by), b.substitute(var, by)),
            CF::Implies(a, b) => CF::implies(a.substitute(var, by), b.substitute(var, by)),
            CF::Exists(v, a) | CF::Forall(v, a) => {
                if v == var || !a.free_vars().contains(var) {
                    return self.clone();
                }
                let (v2, body) = if by.mentions(v) {
                    let mut avoid = a.all_vars();
                    avoid.extend(by.vars());
                    avoid.insert(var.to_string());
                    let fresh = fresh_name(v, &avoid);
                    let body = a.substitute(v, &Term::Var(fresh.clone()));
                    (fresh, body)
                } else {
                    (v.clone(), (**a).clone())
                };
                let body = body.substitute(var, by);
                match self {
                    CF::Exists(..) => CF::Exists(v2, Box::new(body)),
                    _ => CF::Forall(v2, Box::new(body)),
                }
            }
        }
    }

    pub fn rename_free(&self, from: &str, to: &str) -> CF {
        self.substitute(from, &Term::Var(to.to_string()))
    }

    /// Matches `(exists x. phi) & forall x. (phi -> psi)` with both copies of
    /// `phi` structurally equal.
    pub fn as_h_op(&self) -> Option<(&str, &CF, &CF)> {
        if let CF::And(a, b) = self {
            if let (CF::Exists(x, phi), CF::Forall(y, imp)) = (&**a, &**b) {
                if let CF::Implies(phi2, psi) = &**imp {
                    if x == y && phi == phi2 {
                        return Some((x.as_str(), &**phi, &**psi));
                    }
                }
            }
        }
        None
    }
}
