//! Fixtures shared by the benchmarks.

use redprod_core::{rat, FiniteMetricStructure, Rational, Signature};

pub fn signature() -> Signature {
    Signature::new(Rational::ONE)
        .with_predicate("P", 1, Rational::ZERO, Rational::ONE, Rational::ONE)
        .with_predicate("R", 2, Rational::ZERO, Rational::ONE, Rational::ONE)
}

/// An `n`-point space with distances in `[1/2, 1]` and predicate values on a
/// grid of step `1/n`, varied by `shift`.
pub fn space(n: usize, shift: usize) -> FiniteMetricStructure {
    let mut m = FiniteMetricStructure::discrete(signature(), FiniteMetricStructure::numbered_labels(n));
    let step = |k: usize| rat((k % (n + 1)) as i128, n as i128);
    for a in 0..n {
        m.set_pred("P", &[a], step(a * 3 + shift));
        for b in 0..n {
            if a < b {
                m.set_dist(a, b, rat(1, 2) + rat(((a + b + shift) % 2) as i128, 2));
            }
            m.set_pred("R", &[a, b], step(a + 2 * b + shift));
        }
    }
    m
}

pub const SENTENCES: &[&str] = &[
    "sup x. inf y. max(P(x), R(x, y))",
    "h[x; pl{(0,1),(1,0)}slopes[-1,-1]](P(x), sup y. R(x, y))",
    "inf x. sup y. min(d(x, y), P(y))",
];
