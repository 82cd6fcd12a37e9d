//! Filters on finite index sets and limits along them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::ProductError;
use crate::rational::Rational;

/// A proper filter on `{0, ..., n-1}`, stored as its kernel: the filter is
/// every superset of the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteFilter {
    n: usize,
    kernel: Vec<usize>,
}

impl FiniteFilter {
    /// The principal filter generated by `kernel`.
    pub fn principal(n: usize, kernel: &[usize]) -> Result<Self, ProductError> {
        filter_from_generators(&[kernel.to_vec()], n)
    }

    /// The filter `{I}`.
    pub fn trivial(n: usize) -> Self {
        FiniteFilter {
            n,
            kernel: (0..n).collect(),
        }
    }

    /// The principal ultrafilter at `i`.
    pub fn ultra(n: usize, i: usize) -> Result<Self, ProductError> {
        Self::principal(n, &[i])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Kernel indices in increasing order.
    pub fn kernel(&self) -> &[usize] {
        &self.kernel
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        self.kernel.iter().all(|k| set.contains(k))
    }

    pub fn is_ultra(&self) -> bool {
        self.kernel.len() == 1
    }
}

/// The filter generated by `sets` on `{0, ..., n-1}`; its kernel is their
/// intersection, or the whole index set when there are no generators.
pub fn filter_from_generators(sets: &[Vec<usize>], n: usize) -> Result<FiniteFilter, ProductError> {
    let mut kernel: BTreeSet<usize> = (0..n).collect();
    for set in sets {
        if let Some(&index) = set.iter().find(|&&i| i >= n) {
            return Err(ProductError::IndexOutOfRange { index, n });
        }
        let s: BTreeSet<usize> = set.iter().copied().collect();
        kernel = kernel.intersection(&s).copied().collect();
    }
    if kernel.is_empty() {
        return Err(ProductError::ImproperFilter);
    }
    Ok(FiniteFilter {
        n,
        kernel: kernel.into_iter().collect(),
    })
}

/// `(limsup, liminf)` of `values` along `filter`: the max and min over the
/// kernel.
pub fn limits_along(filter: &FiniteFilter, values: &[Rational]) -> Result<(Rational, Rational), ProductError> {
    if values.len() != filter.n {
        return Err(ProductError::LengthMismatch {
            expected: filter.n,
            found: values.len(),
        });
    }
    let mut it = filter.kernel.iter().map(|&i| values[i]);
    let first = it.next().expect("kernel is nonempty");
    Ok(it.fold((first, first), |(hi, lo), v| (hi.max(v), lo.min(v))))
}

/// An ultimately periodic sequence `preperiod ++ period ++ period ++ ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UPSeq {
    pub preperiod: Vec<Rational>,
    pub period: Vec<Rational>,
}

impl UPSeq {
    pub fn new(preperiod: Vec<Rational>, period: Vec<Rational>) -> Result<Self, ProductError> {
        if period.is_empty() {
            return Err(ProductError::LengthMismatch { expected: 1, found: 0 });
        }
        Ok(UPSeq { preperiod, period })
    }

    pub fn get(&self, i: usize) -> Rational {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Termwise combination; the result's period is the lcm of both periods.
    pub fn zip_with(&self, other: &UPSeq, f: impl Fn(Rational, Rational) -> Rational) -> UPSeq {
        let pre = self.preperiod.len().max(other.preperiod.len());
        let per = lcm(self.period.len(), other.period.len());
        UPSeq {
            preperiod: (0..pre).map(|i| f(self.get(i), other.get(i))).collect(),
            period: (pre..pre + per).map(|i| f(self.get(i), other.get(i))).collect(),
        }
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// `(limsup, liminf)` along the Frechet filter: the max and min over one
/// period.
pub fn limits_frechet(seq: &UPSeq) -> (Rational, Rational) {
    let hi = *seq.period.iter().max().expect("period is nonempty");
    let lo = *seq.period.iter().min().expect("period is nonempty");
    (hi, lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn r(v: i128) -> Rational {
        Rational::from_int(v)
    }

    /// inf over every member J of the filter of sup over J, and the dual.
    fn by_supersets(filter: &FiniteFilter, values: &[Rational]) -> (Rational, Rational) {
        let n = values.len();
        let mut hi: Option<Rational> = None;
        let mut lo: Option<Rational> = None;
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if !filter.contains(&set) {
                continue;
            }
            let s = set.iter().map(|&i| values[i]).max().unwrap();
            let t = set.iter().map(|&i| values[i]).min().unwrap();
            hi = Some(hi.map_or(s, |h| h.min(s)));
            lo = Some(lo.map_or(t, |l| l.max(t)));
        }
        (hi.unwrap(), lo.unwrap())
    }

    /// inf over N of sup of the tail from N, truncated at a horizon.
    fn by_tails(seq: &UPSeq, periods: usize) -> (Rational, Rational) {
        let end = seq.preperiod.len() + periods * seq.period.len();
        let horizon = end + seq.period.len() * periods;
        let tails: Vec<(Rational, Rational)> = (0..=end)
            .map(|start| {
                let window: Vec<Rational> = (start..horizon).map(|i| seq.get(i)).collect();
                (*window.iter().max().unwrap(), *window.iter().min().unwrap())
            })
            .collect();
        (
            tails.iter().map(|t| t.0).min().unwrap(),
            tails.iter().map(|t| t.1).max().unwrap(),
        )
    }

    #[test]
    fn generator_examples() {
        let f = filter_from_generators(&[vec![0, 1], vec![1, 2]], 3).unwrap();
        assert_eq!(f.kernel(), &[1]);
        assert_eq!(filter_from_generators(&[], 2).unwrap().kernel(), &[0, 1]);
        assert_eq!(filter_from_generators(&[vec![0], vec![1]], 2), Err(ProductError::ImproperFilter));
        assert_eq!(
            filter_from_generators(&[vec![3]], 2),
            Err(ProductError::IndexOutOfRange { index: 3, n: 2 })
        );
    }

    #[test]
    fn limit_examples() {
        let f = FiniteFilter::principal(3, &[1, 2]).unwrap();
        let v = [r(5), r(1), r(3)];
        assert_eq!(limits_along(&f, &v).unwrap(), (r(3), r(1)));
        assert_eq!(limits_along(&f, &v).unwrap(), by_supersets(&f, &v));
        let u = FiniteFilter::ultra(2, 0).unwrap();
        assert_eq!(limits_along(&u, &[r(2), r(7)]).unwrap(), (r(2), r(2)));
        assert_eq!(limits_along(&FiniteFilter::trivial(3), &[r(2), r(7), r(4)]).unwrap(), (r(7), r(2)));
        assert!(matches!(limits_along(&u, &[r(1)]), Err(ProductError::LengthMismatch { .. })));
    }

    #[test]
    fn frechet_examples() {
        let s = UPSeq::new(vec![r(9)], vec![r(1), r(2)]).unwrap();
        assert_eq!(limits_frechet(&s), (r(2), r(1)));
        assert_eq!(limits_frechet(&s), by_tails(&s, 3));
        let c = UPSeq::new(vec![], vec![rat(1, 3)]).unwrap();
        assert_eq!(limits_frechet(&c), (rat(1, 3), rat(1, 3)));
        let z = UPSeq::new(vec![], vec![r(0), r(1), r(0)]).unwrap();
        assert_eq!(limits_frechet(&z), (r(1), r(0)));
        assert_eq!(limits_frechet(&z), by_tails(&z, 3));
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-20i128..20, 1i128..5).prop_map(|(n, d)| rat(n, d))
    }

    fn filter_and_values(n: usize) -> impl Strategy<Value = (FiniteFilter, Vec<Rational>, Vec<Rational>)> {
        (1u32..(1 << n), prop::collection::vec(small(), n), prop::collection::vec(small(), n)).prop_map(
            move |(mask, u, v)| {
                let kernel: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                (FiniteFilter::principal(n, &kernel).unwrap(), u, v)
            },
        )
    }

    fn upseq() -> impl Strategy<Value = UPSeq> {
        (prop::collection::vec(small(), 0..3), prop::collection::vec(small(), 1..4))
            .prop_map(|(pre, per)| UPSeq::new(pre, per).unwrap())
    }

    fn tables(n: usize) -> impl Strategy<Value = (FiniteFilter, Vec<Vec<Rational>>)> {
        (1u32..(1 << n), prop::collection::vec(prop::collection::vec(small(), 1..4), n)).prop_map(move |(mask, t)| {
            let kernel: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            (FiniteFilter::principal(n, &kernel).unwrap(), t)
        })
    }

    /// Every choice of one entry per row, as index vectors.
    fn choices(rows: &[Vec<Rational>]) -> Vec<Vec<usize>> {
        rows.iter().fold(vec![Vec::new()], |acc, row| {
            acc.iter()
                .flat_map(|c| (0..row.len()).map(move |j| [c.as_slice(), &[j]].concat()))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn quantifiers_commute_with_limsup((f, rows) in tables(3)) {
            let pick = |c: &Vec<usize>| limits_along(&f, &c.iter().zip(&rows).map(|(&j, r)| r[j]).collect::<Vec<_>>()).unwrap().0;
            let all = choices(&rows);
            let infs: Vec<Rational> = rows.iter().map(|r| *r.iter().min().unwrap()).collect();
            let sups: Vec<Rational> = rows.iter().map(|r| *r.iter().max().unwrap()).collect();
            prop_assert_eq!(limits_along(&f, &infs).unwrap().0, all.iter().map(pick).min().unwrap());
            prop_assert_eq!(limits_along(&f, &sups).unwrap().0, all.iter().map(pick).max().unwrap());
        }

        #[test]
        fn kernel_limits_match_the_definition((f, u, _) in filter_and_values(4)) {
            prop_assert_eq!(limits_along(&f, &u).unwrap(), by_supersets(&f, &u));
        }

        #[test]
        fn limsup_of_max_is_max_of_limsups((f, u, v) in filter_and_values(5)) {
            let m: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| (*a).max(*b)).collect();
            let (lu, _) = limits_along(&f, &u).unwrap();
            let (lv, _) = limits_along(&f, &v).unwrap();
            prop_assert_eq!(limits_along(&f, &m).unwrap().0, lu.max(lv));
        }

        #[test]
        fn sum_sandwich((f, u, v) in filter_and_values(5)) {
            let s: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| *a + *b).collect();
            let (su, _) = limits_along(&f, &u).unwrap();
            let (_, iv) = limits_along(&f, &v).unwrap();
            let (ss, is) = limits_along(&f, &s).unwrap();
            prop_assert!(is <= su + iv && su + iv <= ss);
        }

        #[test]
        fn frechet_matches_tails(s in upseq()) {
            prop_assert_eq!(limits_frechet(&s), by_tails(&s, 3));
        }

        #[test]
        fn frechet_max_and_sum(u in upseq(), v in upseq()) {
            let m = u.zip_with(&v, |a, b| a.max(b));
            prop_assert_eq!(limits_frechet(&m).0, limits_frechet(&u).0.max(limits_frechet(&v).0));
            let s = u.zip_with(&v, |a, b| a + b);
            let (ss, is) = limits_frechet(&s);
            let mid = limits_frechet(&u).0 + limits_frechet(&v).1;
            prop_assert!(is <= mid && mid <= ss);
        }
    }
}
