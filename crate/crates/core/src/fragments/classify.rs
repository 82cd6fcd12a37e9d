//! Syntactic fragment recognizers.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::syntax::{ClassicalFormula, Formula, HNode, PLFunc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FragmentLabel {
    Atomic,
    PrimitiveHorn,
    Horn,
    Palyutin,
    BCombination,
    HpSentence,
    PpSentence,
    BpSentence,
    ClassicalHornClause,
    ClassicalHorn,
    ClassicalPalyutin,
}

impl FragmentLabel {
    pub const ALL: [FragmentLabel; 11] = [
        FragmentLabel::Atomic,
        FragmentLabel::PrimitiveHorn,
        FragmentLabel::Horn,
        FragmentLabel::Palyutin,
        FragmentLabel::BCombination,
        FragmentLabel::HpSentence,
        FragmentLabel::PpSentence,
        FragmentLabel::BpSentence,
        FragmentLabel::ClassicalHornClause,
        FragmentLabel::ClassicalHorn,
        FragmentLabel::ClassicalPalyutin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FragmentLabel::Atomic => "atomic",
            FragmentLabel::PrimitiveHorn => "primitive-horn",
            FragmentLabel::Horn => "horn",
            FragmentLabel::Palyutin => "palyutin",
            FragmentLabel::BCombination => "b-combination",
            FragmentLabel::HpSentence => "hp-sentence",
            FragmentLabel::PpSentence => "pp-sentence",
            FragmentLabel::BpSentence => "bp-sentence",
            FragmentLabel::ClassicalHornClause => "classical-horn-clause",
            FragmentLabel::ClassicalHorn => "classical-horn",
            FragmentLabel::ClassicalPalyutin => "classical-palyutin",
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(
            self,
            FragmentLabel::ClassicalHornClause | FragmentLabel::ClassicalHorn | FragmentLabel::ClassicalPalyutin
        )
    }
}

impl fmt::Display for FragmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FragmentLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FragmentLabel::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown fragment `{s}`"))
    }
}

fn nondecreasing(c: &PLFunc) -> bool {
    c.monotonicity().is_nondecreasing()
}

fn nonincreasing(c: &PLFunc) -> bool {
    c.monotonicity().is_nonincreasing()
}

pub fn is_atomic(f: &Formula) -> bool {
    f.is_atomic()
}

/// `C alpha` with `C` nondecreasing; a bare atom counts with `C` the identity.
fn is_head(f: &Formula) -> bool {
    match f {
        Formula::Unary(c, a) => nondecreasing(c) && a.is_atomic(),
        other => other.is_atomic(),
    }
}

/// `D beta` with `D` nonincreasing.
fn is_body(f: &Formula) -> bool {
    matches!(f, Formula::Unary(d, b) if nonincreasing(d) && b.is_atomic())
}

/// `min(C alpha, D_1 beta_1, ..., D_n beta_n)`, including `n = 0`.
pub fn is_primitive_horn(f: &Formula) -> bool {
    match f {
        Formula::Min(items) => (0..items.len()).any(|i| {
            is_head(&items[i]) && items.iter().enumerate().all(|(j, x)| j == i || is_body(x))
        }),
        other => is_head(other),
    }
}

pub fn is_horn(f: &Formula) -> bool {
    match f {
        Formula::Max(xs) if xs.iter().all(is_horn) => true,
        Formula::Sup(_, x) | Formula::Inf(_, x) => is_horn(x),
        other => is_primitive_horn(other),
    }
}

fn h_node_ok(h: &HNode) -> bool {
    nonincreasing(&h.d)
        && h.d.fixed_point().map(|fp| fp == h.delta).unwrap_or(false)
        && is_palyutin(&h.phi)
        && is_palyutin(&h.psi)
}

/// Matches `max(inf_x phi, sup_x min(D phi, delta, psi))` in any argument
/// order of the inner `min`, returning the equivalent h-node.
pub fn as_desugared_h(f: &Formula) -> Option<HNode> {
    let Formula::Max(outer) = f else { return None };
    if outer.len() != 2 {
        return None;
    }
    let (Formula::Inf(x, phi), Formula::Sup(y, body)) = (&outer[0], &outer[1]) else {
        return None;
    };
    if x != y {
        return None;
    }
    let Formula::Min(inner) = &**body else { return None };
    if inner.len() != 3 {
        return None;
    }
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let (a, b, c) = (&inner[perm[0]], &inner[perm[1]], &inner[perm[2]]);
        if let (Formula::Unary(d, phi2), Some(delta)) = (a, b.as_constant()) {
            if **phi2 == **phi {
                return Some(HNode {
                    var: x.clone(),
                    d: d.clone(),
                    delta,
                    phi: (**phi).clone(),
                    psi: c.clone(),
                });
            }
        }
    }
    None
}

pub fn is_palyutin(f: &Formula) -> bool {
    match f {
        Formula::Atomic(..) | Formula::Dist(..) => true,
        Formula::Unary(c, x) => nondecreasing(c) && is_palyutin(x),
        Formula::Sup(_, x) | Formula::Inf(_, x) => is_palyutin(x),
        Formula::H(h) => h_node_ok(h),
        Formula::Max(xs) => {
            xs.iter().all(is_palyutin) || as_desugared_h(f).is_some_and(|h| h_node_ok(&h))
        }
        Formula::Min(_) | Formula::Affine { .. } => false,
    }
}

/// Palyutin formulas combined with affine maps (of any arity, including
/// constants), `max`, `min` and piecewise-linear unary maps.
pub fn is_b_combination(f: &Formula) -> bool {
    if is_palyutin(f) {
        return true;
    }
    match f {
        Formula::Max(xs) | Formula::Min(xs) => xs.iter().all(is_b_combination),
        Formula::Affine { args, .. } => args.iter().all(is_b_combination),
        Formula::Unary(_, x) => is_b_combination(x),
        _ => false,
    }
}

fn palyutin_sentence(f: &Formula) -> bool {
    f.is_sentence() && is_palyutin(f)
}

fn disjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Max(xs) => xs.iter().collect(),
        other => vec![other],
    }
}

fn conjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Min(xs) => xs.iter().collect(),
        other => vec![other],
    }
}

fn negated_palyutin(f: &Formula) -> bool {
    matches!(f, Formula::Unary(d, x) if nonincreasing(d) && palyutin_sentence(x))
}

/// `max` of terms `min(D phi, psi)`; a lone Palyutin sentence also counts.
pub fn is_hp_sentence(f: &Formula) -> bool {
    if !f.is_sentence() {
        return false;
    }
    if palyutin_sentence(f) {
        return true;
    }
    disjuncts(f).into_iter().all(|t| {
        if palyutin_sentence(t) {
            return true;
        }
        let items = conjuncts(t);
        items.len() == 2
            && ((negated_palyutin(items[0]) && palyutin_sentence(items[1]))
                || (negated_palyutin(items[1]) && palyutin_sentence(items[0])))
    })
}

/// `max` of `min`s of Palyutin sentences.
pub fn is_pp_sentence(f: &Formula) -> bool {
    f.is_sentence()
        && disjuncts(f)
            .into_iter()
            .all(|t| palyutin_sentence(t) || conjuncts(t).into_iter().all(palyutin_sentence))
}

/// `max` of `min`s of Palyutin sentences and nonincreasing images of them.
pub fn is_bp_sentence(f: &Formula) -> bool {
    f.is_sentence()
        && disjuncts(f).into_iter().all(|t| {
            palyutin_sentence(t)
                || conjuncts(t)
                    .into_iter()
                    .all(|x| palyutin_sentence(x) || negated_palyutin(x))
        })
}

pub fn classify_fragment(f: &Formula) -> BTreeSet<FragmentLabel> {
    let mut out = BTreeSet::new();
    let checks: [(FragmentLabel, fn(&Formula) -> bool); 8] = [
        (FragmentLabel::Atomic, is_atomic),
        (FragmentLabel::PrimitiveHorn, is_primitive_horn),
        (FragmentLabel::Horn, is_horn),
        (FragmentLabel::Palyutin, is_palyutin),
        (FragmentLabel::BCombination, is_b_combination),
        (FragmentLabel::HpSentence, is_hp_sentence),
        (FragmentLabel::PpSentence, is_pp_sentence),
        (FragmentLabel::BpSentence, is_bp_sentence),
    ];
    for (label, check) in checks {
        if check(f) {
            out.insert(label);
        }
    }
    out
}

// classical side

/// Body atoms and head of a classical Horn clause; the head is `False` for a
/// clause without a positive literal.
pub fn clause_parts(f: &ClassicalFormula) -> Option<(Vec<ClassicalFormula>, ClassicalFormula)> {
    use ClassicalFormula as CF;
    if f.is_atomic() {
        return Some((Vec::new(), f.clone()));
    }
    match f {
        CF::Implies(body, head) if head.is_atomic() => {
            let atoms = body.conjuncts();
            atoms
                .iter()
                .all(|a| a.is_atomic())
                .then(|| (atoms.into_iter().cloned().collect(), (**head).clone()))
        }
        CF::Not(a) if a.is_atomic() => Some((vec![(**a).clone()], CF::False)),
        CF::Or(..) => {
            let mut body = Vec::new();
            let mut head = None;
            for lit in f.disjuncts() {
                match lit {
                    CF::Not(a) if a.is_atomic() => body.push((**a).clone()),
                    a if a.is_atomic() && head.is_none() => head = Some(a.clone()),
                    _ => return None,
                }
            }
            Some((body, head.unwrap_or(CF::False)))
        }
        _ => None,
    }
}

pub fn is_classical_horn_clause(f: &ClassicalFormula) -> bool {
    clause_parts(f).is_some()
}

pub fn is_classical_horn(f: &ClassicalFormula) -> bool {
    use ClassicalFormula as CF;
    if is_classical_horn_clause(f) {
        return true;
    }
    match f {
        CF::And(a, b) => is_classical_horn(a) && is_classical_horn(b),
        CF::Exists(_, a) | CF::Forall(_, a) => is_classical_horn(a),
        _ => false,
    }
}

pub fn is_classical_palyutin(f: &ClassicalFormula) -> bool {
    use ClassicalFormula as CF;
    if f.is_atomic() {
        return true;
    }
    if let Some((_, phi, psi)) = f.as_h_op() {
        if is_classical_palyutin(phi) && is_classical_palyutin(psi) {
            return true;
        }
    }
    match f {
        CF::And(a, b) => is_classical_palyutin(a) && is_classical_palyutin(b),
        CF::Exists(_, a) | CF::Forall(_, a) => is_classical_palyutin(a),
        _ => false,
    }
}

pub fn classify_classical(f: &ClassicalFormula) -> BTreeSet<FragmentLabel> {
    let mut out = BTreeSet::new();
    if f.is_atomic() {
        out.insert(FragmentLabel::Atomic);
    }
    if is_classical_horn_clause(f) {
        out.insert(FragmentLabel::ClassicalHornClause);
    }
    if is_classical_horn(f) {
        out.insert(FragmentLabel::ClassicalHorn);
    }
    if is_classical_palyutin(f) {
        out.insert(FragmentLabel::ClassicalPalyutin);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, Rational};
    use crate::syntax::{parse_classical_inferred, parse_formula_inferred};
    use FragmentLabel as L;

    fn labels(text: &str) -> BTreeSet<FragmentLabel> {
        classify_fragment(&parse_formula_inferred(text).unwrap().0)
    }

    fn set(ls: &[FragmentLabel]) -> BTreeSet<FragmentLabel> {
        ls.iter().copied().collect()
    }

    #[test]
    fn atomic_is_in_every_formula_grammar() {
        assert_eq!(
            labels("P(x)"),
            set(&[L::Atomic, L::PrimitiveHorn, L::Horn, L::Palyutin, L::BCombination])
        );
    }

    #[test]
    fn min_is_not_palyutin() {
        let l = labels("min(P(x), Q(x))");
        assert!(l.contains(&L::BCombination));
        assert!(!l.contains(&L::Palyutin));
    }

    #[test]
    fn desugared_h_needs_the_fixed_point() {
        let bad = "max(inf x. P(x), sup x. min(pl{(0,1),(1,0)}(P(x)), 1/3, Q(x)))";
        assert!(!labels(bad).contains(&L::Palyutin));
        let good = "max(inf x. P(x), sup x. min(pl{(0,1),(1,0)}(P(x)), 1/2, Q(x)))";
        assert!(labels(good).contains(&L::Palyutin));
        let h = parse_formula_inferred("h[x; pl{(0,1),(1,0)}](P(x), Q(x))").unwrap().0;
        let Formula::H(node) = &h else { unreachable!() };
        assert_eq!(as_desugared_h(&Formula::desugar_h(node)).as_ref(), Some(&**node));
    }

    #[test]
    fn primitive_horn_shapes() {
        assert!(labels("min(pl{(0,0)}slopes[0,1](P(x)), pl{(0,1),(1,0)}(Q(y)))").contains(&L::PrimitiveHorn));
        assert!(!labels("min(P(x), Q(y))").contains(&L::PrimitiveHorn));
        assert!(labels("sup x. max(min(P(x), pl{(0,1),(1,0)}(Q(x))), Q(x))").contains(&L::Horn));
        assert!(!labels("sup x. pl{(0,1),(1,0)}(P(x))").contains(&L::Palyutin));
    }

    #[test]
    fn sentence_fragments() {
        let hp = "max(min(pl{(0,1),(1,0)}(sup x. P(x)), inf x. Q(x)), sup x. P(x))";
        let l = labels(hp);
        assert!(l.contains(&L::HpSentence) && l.contains(&L::BpSentence));
        assert!(!l.contains(&L::PpSentence));
        let pp = labels("max(min(sup x. P(x), inf y. Q(y), sup z. P(z)), inf x. P(x))");
        assert!(pp.contains(&L::PpSentence) && pp.contains(&L::BpSentence) && !pp.contains(&L::HpSentence));
        assert!(labels("P(x)").iter().all(|l| !matches!(l, L::HpSentence | L::PpSentence | L::BpSentence)));
        let _ = Rational::ZERO;
        let _ = rat(1, 2);
    }

    #[test]
    fn classical_counterexample_is_horn_not_palyutin() {
        let (f, _) = parse_classical_inferred("forall x1. forall x2. exists y. (y != x1 & y != x2)").unwrap();
        let l = classify_classical(&f);
        assert!(l.contains(&L::ClassicalHorn));
        assert!(!l.contains(&L::ClassicalPalyutin));
        let (g, _) = parse_classical_inferred("forall x1. forall x2. exists y. (y != x1 | y != x2)").unwrap();
        let l = classify_classical(&g);
        assert!(l.contains(&L::ClassicalHorn) && !l.contains(&L::ClassicalPalyutin));
        let (h, _) = parse_classical_inferred("(exists x. P(x)) & forall x. (P(x) -> Q(x))").unwrap();
        assert!(classify_classical(&h).contains(&L::ClassicalPalyutin));
        let (c, _) = parse_classical_inferred("~P(x) | Q(x) | ~R(x)").unwrap();
        assert_eq!(clause_parts(&c).unwrap().1, ClassicalFormula::atom_vars("Q", &["x"]));
        let (nc, _) = parse_classical_inferred("P(x) | Q(x)").unwrap();
        assert!(!is_classical_horn(&nc));
    }
}
