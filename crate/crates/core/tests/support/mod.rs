//! Structures and index sets shared by the acceptance suites.

pub mod engine;

use redprod_core::{FiniteMetricStructure, Rational, Signature};

pub fn unary_sig() -> Signature {
    Signature::new(Rational::ONE).with_predicate("P", 1, Rational::ZERO, Rational::ONE, Rational::ONE)
}

/// A discrete space over `sig` whose i-th point has the i-th row of
/// `values` as its unary predicate values, in signature order.
pub fn space(sig: &Signature, values: &[Vec<Rational>]) -> FiniteMetricStructure {
    let mut m = FiniteMetricStructure::discrete(sig.clone(), FiniteMetricStructure::numbered_labels(values.len()));
    for (i, row) in values.iter().enumerate() {
        for (p, v) in sig.predicates.iter().zip(row) {
            m.set_pred(&p.name, &[i], *v);
        }
    }
    m
}

/// Nondecreasing index sequences of length `1..=max_len` over `0..n`.
pub fn multisets(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for _ in 0..max_len {
        out.extend(level.iter().cloned());
        level = level
            .iter()
            .flat_map(|s| (*s.last().unwrap()..n).map(move |i| [s.as_slice(), &[i]].concat()))
            .collect();
    }
    out
}

/// Every sequence of length `1..=max_len` over `0..n`.
pub fn sequences(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|s| (0..n).map(move |i| [s.as_slice(), &[i]].concat()))
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// Nonempty subsets of `0..k`, as increasing index lists.
pub fn kernels(k: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << k))
        .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Discrete spaces over `sig` with `1..=max_points` points, one per
/// multiset of rows drawn from `rows`.
pub fn space_pool(sig: &Signature, rows: &[Vec<Rational>], max_points: usize) -> Vec<FiniteMetricStructure> {
    multisets(rows.len(), max_points)
        .into_iter()
        .map(|idx| space(sig, &idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>()))
        .collect()
}

/// Sorted predicate rows of a discrete space; two discrete spaces over the
/// same unary signature are isomorphic iff these agree. `None` when the
/// metric is not discrete.
pub fn iso_key(m: &FiniteMetricStructure) -> Option<Vec<Vec<Rational>>> {
    let n = m.size();
    let discrete = (0..n).all(|a| (0..n).all(|b| m.dist[a][b] == if a == b { Rational::ZERO } else { m.signature.dmax }));
    let unary = m.signature.predicates.iter().all(|p| p.arity == 1);
    if !discrete || !unary || !m.signature.functions.is_empty() || !m.signature.constants.is_empty() {
        return None;
    }
    let mut rows: Vec<Vec<Rational>> = (0..n).map(|i| m.preds.iter().map(|t| t[i]).collect()).collect();
    rows.sort();
    Some(rows)
}
