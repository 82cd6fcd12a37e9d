//! Classical formulas as continuous ones over discrete metrizations.
//!
//! Truth is 0 and falsity is 1.

use crate::rational::{rat, Rational};
use crate::syntax::{ClassicalFormula, Formula, PLFunc};

use ClassicalFormula as CF;

fn not(f: Formula) -> Formula {
    Formula::unary(PLFunc::one_minus(), f)
}

/// Direct connective encoding: `and -> max`, `or -> min`, `not -> 1 - t`,
/// `a -> b` to `min(1 - a, b)`, `exists -> inf`, `forall -> sup`.
pub fn encode_classical(f: &ClassicalFormula) -> Formula {
    match f {
        CF::True => Formula::constant(Rational::ZERO),
        CF::False => Formula::constant(Rational::ONE),
        CF::Atomic(r, args) => Formula::Atomic(r.clone(), args.clone()),
        CF::Equal(a, b) => Formula::Dist(a.clone(), b.clone()),
        CF::Not(a) => not(encode_classical(a)),
        CF::And(a, b) => Formula::Max(vec![encode_classical(a), encode_classical(b)]),
        CF::Or(a, b) => Formula::Min(vec![encode_classical(a), encode_classical(b)]),
        CF::Implies(a, b) => Formula::Min(vec![not(encode_classical(a)), encode_classical(b)]),
        CF::Exists(v, a) => Formula::inf(v, encode_classical(a)),
        CF::Forall(v, a) => Formula::sup(v, encode_classical(a)),
    }
}

/// Sends 0 to 0 and everything from 1/2 up to 1.
fn sharpen() -> PLFunc {
    PLFunc::ramp(Rational::ZERO, Rational::ONE, rat(1, 2)).expect("valid breakpoints")
}

fn contains_h(f: &Formula) -> bool {
    match f {
        Formula::H(_) => true,
        Formula::Atomic(..) | Formula::Dist(..) => false,
        Formula::Max(xs) | Formula::Min(xs) | Formula::Affine { args: xs, .. } => xs.iter().any(contains_h),
        Formula::Unary(_, x) | Formula::Sup(_, x) | Formula::Inf(_, x) => contains_h(x),
    }
}

/// Encoding whose values lie in {0, 1/2, 1} once h-nodes occur, so it must
/// be mapped back to {0, 1} before a negation or an h-node reads it.
fn sharp(f: Formula) -> Formula {
    if contains_h(&f) {
        Formula::unary(sharpen(), f)
    } else {
        f
    }
}

/// Like [`encode_classical`], but every h-operation
/// `(exists x. phi) & forall x. (phi -> psi)` becomes the h-node
/// `h[x; 1 - t](enc phi, enc psi)`. The value is 0 exactly when the formula
/// holds and at least 1/2 otherwise.
pub fn encode_classical_h(f: &ClassicalFormula) -> Formula {
    if let Some((x, phi, psi)) = f.as_h_op() {
        let phi = sharp(encode_classical_h(phi));
        let psi = sharp(encode_classical_h(psi));
        return Formula::h(x, PLFunc::one_minus(), phi, psi).expect("1 - t is nonincreasing");
    }
    match f {
        CF::Not(a) => not(sharp(encode_classical_h(a))),
        CF::And(a, b) => Formula::Max(vec![encode_classical_h(a), encode_classical_h(b)]),
        CF::Or(a, b) => Formula::Min(vec![encode_classical_h(a), encode_classical_h(b)]),
        CF::Implies(a, b) => Formula::Min(vec![not(sharp(encode_classical_h(a))), encode_classical_h(b)]),
        CF::Exists(v, a) => Formula::inf(v, encode_classical_h(a)),
        CF::Forall(v, a) => Formula::sup(v, encode_classical_h(a)),
        atomic => encode_classical(atomic),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{discrete_metrization, eval, eval_classical, Assignment, ClassicalStructure, FiniteMetricStructure};
    use crate::syntax::{parse_classical, ClassicalSignature};

    fn structures(n: usize, sig: &ClassicalSignature) -> Vec<ClassicalStructure> {
        let unary = sig.relations.len();
        (0..1usize << (n * unary))
            .map(|bits| {
                let mut m = ClassicalStructure::empty(sig.clone(), FiniteMetricStructure::numbered_labels(n));
                for r in 0..unary {
                    for i in 0..n {
                        m.relations[r][i] = bits >> (r * n + i) & 1 == 1;
                    }
                }
                m
            })
            .collect()
    }

    #[test]
    fn negated_false_atom_encodes_to_zero() {
        let sig = ClassicalSignature::default().with_relation("P", 1).with_constant("a");
        let m = ClassicalStructure::empty(sig.clone(), vec!["0".into()]);
        let f = parse_classical("~P(a)", &sig).unwrap();
        let v = eval(&discrete_metrization(&m), &encode_classical(&f), &Assignment::new()).unwrap();
        assert_eq!(v, Rational::ZERO);
    }

    #[test]
    fn other_point_exists_in_two_point_space() {
        let sig = ClassicalSignature::default().with_relation("P", 1);
        let m = ClassicalStructure::empty(sig.clone(), vec!["0".into(), "1".into()]);
        let f = parse_classical("exists y. y != x", &sig).unwrap();
        let a: Assignment = [("x".to_string(), 0)].into();
        assert_eq!(eval(&discrete_metrization(&m), &encode_classical(&f), &a).unwrap(), Rational::ZERO);
    }

    #[test]
    fn h_encoding_zero_set_is_the_truth_set() {
        let sig = ClassicalSignature::default().with_relation("P", 1).with_relation("Q", 1);
        let texts = [
            "(exists x. P(x)) & forall x. (P(x) -> Q(x))",
            "~((exists x. P(x)) & forall x. (P(x) -> Q(x)))",
            "(exists y. (exists x. P(x)) & forall x. (P(x) -> Q(y))) & forall y. (((exists x. P(x)) & forall x. (P(x) -> Q(y))) -> P(y))",
        ];
        for text in texts {
            let f = parse_classical(text, &sig).unwrap();
            let direct = encode_classical(&f);
            let h = encode_classical_h(&f);
            for n in 1..=3 {
                for m in structures(n, &sig) {
                    let d = discrete_metrization(&m);
                    let truth = eval_classical(&m, &f, &Assignment::new()).unwrap();
                    let vh = eval(&d, &h, &Assignment::new()).unwrap();
                    let vd = eval(&d, &direct, &Assignment::new()).unwrap();
                    assert!([Rational::ZERO, rat(1, 2), Rational::ONE].contains(&vh), "{text}: {vh}");
                    assert_eq!(vh.is_zero(), truth, "{text}");
                    assert_eq!(vd, if truth { Rational::ZERO } else { Rational::ONE }, "{text}");
                }
            }
        }
    }
}
