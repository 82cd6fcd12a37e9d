//! Classical Palyutin formulas to equivalent Horn formulas.
//!
//! Domains are assumed nonempty, so quantifiers may be pulled across
//! conjunctions and implications whose other side does not mention them.

use std::collections::BTreeSet;

use crate::error::FragmentError;
use crate::fragments::classify::{clause_parts, is_classical_horn, is_classical_palyutin};
use crate::syntax::{fresh_name, ClassicalFormula};

use ClassicalFormula as CF;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quant {
    Exists,
    Forall,
}

/// Horn clause `body -> head`; the head is `False` when the clause is negative.
#[derive(Debug, Clone)]
struct Clause {
    body: Vec<CF>,
    head: CF,
}

impl Clause {
    fn formula(&self) -> CF {
        if self.body.is_empty() {
            self.head.clone()
        } else {
            CF::implies(CF::conj(self.body.clone()), self.head.clone())
        }
    }

    fn free_vars(&self) -> BTreeSet<String> {
        self.formula().free_vars()
    }
}

fn quantify(prefix: &[(Quant, String)], body: CF) -> CF {
    prefix.iter().rev().fold(body, |acc, (q, v)| match q {
        Quant::Exists => CF::exists(v, acc),
        Quant::Forall => CF::forall(v, acc),
    })
}

/// Prenex form of a Horn formula: a quantifier prefix over a conjunction of
/// clauses. Bound variables are renamed apart from each other and from
/// `avoid`, which grows as names are used.
fn prenex(f: &CF, avoid: &mut BTreeSet<String>) -> (Vec<(Quant, String)>, Vec<Clause>) {
    if let Some((body, head)) = clause_parts(f) {
        return (Vec::new(), vec![Clause { body, head }]);
    }
    match f {
        CF::And(a, b) => {
            let (mut pa, mut ca) = prenex(a, avoid);
            let (pb, cb) = prenex(b, avoid);
            pa.extend(pb);
            ca.extend(cb);
            (pa, ca)
        }
        CF::Exists(v, a) | CF::Forall(v, a) => {
            let q = if matches!(f, CF::Exists(..)) { Quant::Exists } else { Quant::Forall };
            let (name, body) = if avoid.contains(v) {
                let mut all = avoid.clone();
                all.extend(a.all_vars());
                let fresh = fresh_name(v, &all);
                let body = a.rename_free(v, &fresh);
                (fresh, body)
            } else {
                (v.clone(), (**a).clone())
            };
            avoid.insert(name.clone());
            let (mut p, c) = prenex(&body, avoid);
            p.insert(0, (q, name));
            (p, c)
        }
        other => unreachable!("not a Horn formula: {other}"),
    }
}

/// Horn formula for `phi -> psi`, with `phi` Palyutin and `psi` Horn.
fn impl_inner(phi: &CF, psi: &CF) -> CF {
    let mut avoid = phi.all_vars();
    avoid.extend(psi.free_vars());
    let (prefix, clauses) = prenex(psi, &mut avoid);
    let body = CF::conj(clauses.iter().map(|c| clause_impl(phi, c)).collect());
    quantify(&prefix, body)
}

/// `x` renamed apart from everything in `clash`, applied to the given formulas.
fn rename_apart(x: &str, clash: &BTreeSet<String>, parts: &[&CF]) -> (String, Vec<CF>) {
    if !clash.contains(x) {
        return (x.to_string(), parts.iter().map(|p| (*p).clone()).collect());
    }
    let mut avoid = clash.clone();
    for p in parts {
        avoid.extend(p.all_vars());
    }
    let fresh = fresh_name(x, &avoid);
    (fresh.clone(), parts.iter().map(|p| p.rename_free(x, &fresh)).collect())
}

/// Horn formula for `phi -> gamma`, with `gamma` a clause.
fn clause_impl(phi: &CF, gamma: &Clause) -> CF {
    if let Some((x, phi1, psi1)) = phi.as_h_op() {
        // (exists x phi1 & forall x (phi1 -> psi1)) -> gamma
        // is forall x [phi1 -> exists x (phi1 & (psi1 -> gamma))]
        let (x, parts) = rename_apart(x, &gamma.free_vars(), &[phi1, psi1]);
        let (phi1, psi1) = (&parts[0], &parts[1]);
        let inner = CF::exists(&x, CF::and(to_horn(phi1), clause_impl(psi1, gamma)));
        return CF::forall(&x, impl_inner(phi1, &inner));
    }
    match phi {
        CF::True => gamma.formula(),
        a if a.is_atomic() => {
            let mut body = vec![a.clone()];
            body.extend(gamma.body.iter().cloned());
            Clause {
                body,
                head: gamma.head.clone(),
            }
            .formula()
        }
        CF::And(a, b) => impl_inner(a, &clause_impl(b, gamma)),
        CF::Exists(x, a) => {
            let (x, parts) = rename_apart(x, &gamma.free_vars(), &[a]);
            CF::forall(&x, clause_impl(&parts[0], gamma))
        }
        CF::Forall(x, a) => {
            let (x, parts) = rename_apart(x, &gamma.free_vars(), &[a]);
            CF::exists(&x, clause_impl(&parts[0], gamma))
        }
        other => unreachable!("not a Palyutin formula: {other}"),
    }
}

fn to_horn(f: &CF) -> CF {
    if let Some((x, phi, psi)) = f.as_h_op() {
        return CF::and(CF::exists(x, to_horn(phi)), CF::forall(x, impl_inner(phi, &to_horn(psi))));
    }
    match f {
        CF::And(a, b) => CF::and(to_horn(a), to_horn(b)),
        CF::Exists(v, a) => CF::exists(v, to_horn(a)),
        CF::Forall(v, a) => CF::forall(v, to_horn(a)),
        atomic => atomic.clone(),
    }
}

fn require(ok: bool, what: &'static str, fragment: &'static str, f: &CF) -> Result<(), FragmentError> {
    if ok {
        Ok(())
    } else {
        Err(FragmentError::NotInFragment {
            what,
            fragment,
            formula: f.to_string(),
        })
    }
}

/// A classical Horn formula equivalent to the Palyutin formula `f`.
pub fn palyutin_to_horn(f: &CF) -> Result<CF, FragmentError> {
    require(is_classical_palyutin(f), "input", "classical-palyutin", f)?;
    Ok(to_horn(f))
}

/// A classical Horn formula equivalent to `phi -> psi`.
pub fn impl_to_horn(phi: &CF, psi: &CF) -> Result<CF, FragmentError> {
    require(is_classical_palyutin(phi), "antecedent", "classical-palyutin", phi)?;
    require(is_classical_horn(psi), "consequent", "classical-horn", psi)?;
    Ok(impl_inner(phi, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_classical, Assignment, ClassicalStructure, FiniteMetricStructure};
    use crate::syntax::{parse_classical, ClassicalSignature};

    /// Every structure on `n` points interpreting the signature's relations.
    fn all_structures(sig: &ClassicalSignature, n: usize) -> Vec<ClassicalStructure> {
        let sizes: Vec<usize> = sig.relations.iter().map(|(_, a)| n.pow(*a as u32)).collect();
        let total: usize = sizes.iter().sum();
        (0..1u64 << total)
            .map(|bits| {
                let mut m = ClassicalStructure::empty(sig.clone(), FiniteMetricStructure::numbered_labels(n));
                let mut k = 0;
                for (r, &s) in sizes.iter().enumerate() {
                    for t in 0..s {
                        m.relations[r][t] = bits >> k & 1 == 1;
                        k += 1;
                    }
                }
                m
            })
            .collect()
    }

    fn assignments(vars: &[String], n: usize) -> Vec<Assignment> {
        let mut out = vec![Assignment::new()];
        for v in vars {
            out = out
                .into_iter()
                .flat_map(|a| {
                    (0..n).map(move |p| {
                        let mut b = a.clone();
                        b.insert(v.clone(), p);
                        b
                    })
                })
                .collect();
        }
        out
    }

    fn equivalent(sig: &ClassicalSignature, a: &CF, b: &CF, max_n: usize) {
        let mut free: BTreeSet<String> = a.free_vars();
        free.extend(b.free_vars());
        let free: Vec<String> = free.into_iter().collect();
        for n in 1..=max_n {
            for m in all_structures(sig, n) {
                for asg in assignments(&free, n) {
                    assert_eq!(
                        eval_classical(&m, a, &asg).unwrap(),
                        eval_classical(&m, b, &asg).unwrap(),
                        "{a}  vs  {b}  at {asg:?}"
                    );
                }
            }
        }
    }

    fn pq() -> ClassicalSignature {
        ClassicalSignature::default().with_relation("P", 1).with_relation("Q", 1)
    }

    #[test]
    fn atoms_and_conjunctions_are_unchanged() {
        let sig = pq();
        let a = parse_classical("P(x)", &sig).unwrap();
        assert_eq!(palyutin_to_horn(&a).unwrap(), a);
        let ab = parse_classical("P(x) & Q(y)", &sig).unwrap();
        assert_eq!(palyutin_to_horn(&ab).unwrap(), ab);
    }

    #[test]
    fn h_operation_becomes_horn() {
        let sig = pq();
        let f = parse_classical("(exists x. P(x)) & forall x. (P(x) -> Q(x))", &sig).unwrap();
        let h = palyutin_to_horn(&f).unwrap();
        assert!(is_classical_horn(&h), "{h}");
        equivalent(&sig, &f, &h, 3);
    }

    #[test]
    fn atomic_antecedent_gives_a_clause() {
        let sig = pq().with_relation("R", 2);
        let phi = parse_classical("P(x)", &sig).unwrap();
        let gamma = parse_classical("Q(x) -> R(x, x)", &sig).unwrap();
        let out = impl_to_horn(&phi, &gamma).unwrap();
        assert!(clause_parts(&out).is_some(), "{out}");
        let psi = parse_classical("forall y. R(x, y)", &sig).unwrap();
        let out = impl_to_horn(&phi, &psi).unwrap();
        assert_eq!(out, parse_classical("forall y. (P(x) -> R(x, y))", &sig).unwrap());
    }

    #[test]
    fn bound_variables_are_renamed_apart() {
        let sig = pq().with_relation("R", 2);
        let phi = parse_classical("exists y. R(x, y)", &sig).unwrap();
        let psi = parse_classical("(forall y. R(y, x)) & exists y. P(y)", &sig).unwrap();
        let out = impl_to_horn(&phi, &psi).unwrap();
        assert!(is_classical_horn(&out));
        equivalent(&sig, &CF::implies(phi, psi), &out, 3);
    }

    #[test]
    fn h_antecedent_with_clashing_variable() {
        let sig = pq().with_relation("R", 2);
        let phi = parse_classical("(exists x. P(x)) & forall x. (P(x) -> R(x, y))", &sig).unwrap();
        let psi = parse_classical("Q(x)", &sig).unwrap();
        let out = impl_to_horn(&phi, &psi).unwrap();
        assert!(is_classical_horn(&out), "{out}");
        equivalent(&sig, &CF::implies(phi, psi), &out, 3);
    }

    #[test]
    fn nested_h_operations() {
        let sig = pq();
        let inner = "(exists x. P(x)) & forall x. (P(x) -> Q(x))";
        let text = format!("(exists y. P(y) & ({inner})) & forall y. ((P(y) & ({inner})) -> Q(y))");
        let f = parse_classical(&text, &sig).unwrap();
        assert!(is_classical_palyutin(&f));
        let h = palyutin_to_horn(&f).unwrap();
        assert!(is_classical_horn(&h));
        equivalent(&sig, &f, &h, 3);
    }

    #[test]
    fn rejects_non_palyutin_input() {
        let sig = pq();
        let f = parse_classical("P(x) | Q(x)", &sig).unwrap();
        assert!(palyutin_to_horn(&f).is_err());
        let g = parse_classical("P(x)", &sig).unwrap();
        assert!(impl_to_horn(&g, &f).is_err());
    }
}
