//! Approximation of a formula by nondecreasing images of helper formulas on
//! an evenly spaced grid of thresholds.

use serde::{Deserialize, Serialize};

use crate::error::{FragmentError, SyntaxError};
use crate::fragments::classify::is_palyutin;
use crate::rational::{rat, Rational};
use crate::syntax::{Formula, Monotonicity, PLFunc};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxGrid {
    pub eps: Rational,
    /// `r_0 < ... < r_k`, spaced by `eps`.
    pub thresholds: Vec<Rational>,
    /// `psi_0, ..., psi_(k-1)`.
    pub helpers: Vec<Formula>,
    /// `lambda_0, ..., lambda_(k-1)`, all positive.
    pub margins: Vec<Rational>,
}

fn malformed(msg: impl Into<String>) -> FragmentError {
    FragmentError::MalformedGrid(msg.into())
}

/// Thresholds `r_0, r_0 + eps, ..., r_k` covering `[lo, hi]`, with `k >= 1`.
/// Fails unless `hi - lo` is a positive multiple of `eps`.
pub fn grid_thresholds(eps: Rational, lo: Rational, hi: Rational) -> Result<Vec<Rational>, FragmentError> {
    if !eps.is_positive() {
        return Err(malformed(format!("spacing {eps} is not positive")));
    }
    let steps = (hi - lo) / eps;
    if !steps.is_integer() || !steps.is_positive() {
        return Err(malformed(format!("[{lo}, {hi}] is not a positive multiple of {eps}")));
    }
    Ok((0..=steps.numer()).map(|i| lo + eps * Rational::from_int(i)).collect())
}

impl ApproxGrid {
    pub fn new(
        thresholds: Vec<Rational>,
        helpers: Vec<Formula>,
        margins: Vec<Rational>,
    ) -> Result<Self, FragmentError> {
        if thresholds.len() < 2 {
            return Err(malformed("need at least two thresholds"));
        }
        let eps = thresholds[1] - thresholds[0];
        if !eps.is_positive() {
            return Err(malformed("thresholds must increase"));
        }
        if let Some(w) = thresholds.windows(2).find(|w| w[1] - w[0] != eps) {
            return Err(malformed(format!(
                "unequal spacing: {} - {} differs from {eps}",
                w[1], w[0]
            )));
        }
        let k = thresholds.len() - 1;
        if helpers.len() != k || margins.len() != k {
            return Err(malformed(format!(
                "{k} intervals need {k} helpers and {k} margins, got {} and {}",
                helpers.len(),
                margins.len()
            )));
        }
        if let Some(l) = margins.iter().find(|l| !l.is_positive()) {
            return Err(malformed(format!("margin {l} is not positive")));
        }
        Ok(ApproxGrid {
            eps,
            thresholds,
            helpers,
            margins,
        })
    }

    pub fn k(&self) -> usize {
        self.thresholds.len() - 1
    }
}

/// `theta = max_i max(r_0, min(r_(i+1), (r_(i+1) - r_0) / lambda_i * psi_i + r_0))`.
///
/// Assumes, without checking, that `phi <= r_i` entails `psi_i <= 0` and that
/// `psi_i <= lambda_i` entails `phi < r_(i+1)`; then `theta` is within
/// `2 eps` of `phi`.
pub fn approximate_by_grid(phi: &Formula, grid: &ApproxGrid) -> Result<Formula, FragmentError> {
    let checked = ApproxGrid::new(grid.thresholds.clone(), grid.helpers.clone(), grid.margins.clone())?;
    let free = phi.free_vars();
    for psi in &checked.helpers {
        if let Some(v) = psi.free_vars().into_iter().find(|v| !free.contains(v)) {
            return Err(malformed(format!("helper {psi} has free variable `{v}` outside the formula")));
        }
    }
    let r0 = checked.thresholds[0];
    let parts = checked
        .helpers
        .iter()
        .zip(&checked.margins)
        .zip(&checked.thresholds[1..])
        .map(|((psi, &lambda), &next)| {
            let c = PLFunc::ramp(r0, next, lambda).map_err(FragmentError::from)?;
            Ok(Formula::unary(c, psi.clone()))
        })
        .collect::<Result<Vec<_>, FragmentError>>()?;
    Ok(Formula::max_of(parts))
}

/// A B-combination of Palyutin formulas within `eps` of
/// `inf_y max(theta, D gamma)` in models of SCP, given bounds `[r_0, r_k]`
/// for that formula.
pub fn eliminate_inf_step(
    theta: &Formula,
    gamma: &Formula,
    y: &str,
    d: &PLFunc,
    eps: Rational,
    bounds: (Rational, Rational),
) -> Result<Formula, FragmentError> {
    for (what, f) in [("theta", theta), ("gamma", gamma)] {
        if !is_palyutin(f) {
            return Err(FragmentError::NotInFragment {
                what,
                fragment: "palyutin",
                formula: f.to_string(),
            });
        }
    }
    let mono = d.monotonicity();
    if !mono.is_nondecreasing() {
        return Err(SyntaxError::NotMonotone {
            connective: d.to_string(),
            required: Monotonicity::Nondecreasing,
            found: mono,
        }
        .into());
    }
    let thresholds = grid_thresholds(eps, bounds.0, bounds.1)?;
    let half = eps * rat(1, 2);
    let lambda = eps * rat(1, 6);
    let guarded = Formula::Max(vec![theta.clone(), Formula::unary(d.clone(), gamma.clone())]);
    let target = Formula::inf(y, guarded.clone());
    let inf_theta = Formula::inf(y, theta.clone());
    let one = Rational::ONE;
    let helpers = thresholds[..thresholds.len() - 1]
        .iter()
        .map(|&r| {
            let rho = r + half;
            let floored = Formula::inf(y, Formula::unary(PLFunc::max_with(rho), guarded.clone()));
            Formula::Max(vec![
                Formula::affine(vec![one], -r, vec![inf_theta.clone()]),
                Formula::Min(vec![
                    Formula::affine(vec![-one], rho, vec![inf_theta.clone()]),
                    Formula::affine(vec![one], -rho, vec![floored]),
                ]),
            ])
        })
        .collect::<Vec<_>>();
    let margins = vec![lambda; helpers.len()];
    let grid = ApproxGrid::new(thresholds, helpers, margins)?;
    approximate_by_grid(&target, &grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragments::classify::{classify_fragment, FragmentLabel};
    use crate::semantics::{eval, eval_sentence, Assignment, FiniteMetricStructure};
    use crate::syntax::Signature;

    fn sig(hi: Rational) -> Signature {
        Signature::new(Rational::ONE).with_predicate("P", 1, Rational::ZERO, hi, hi)
    }

    fn p() -> Formula {
        Formula::atom_vars("P", &["x"])
    }

    #[test]
    fn shifted_helpers_approximate_within_two_eps() {
        let phi = p();
        let thresholds = grid_thresholds(Rational::ONE, Rational::ZERO, rat(2, 1)).unwrap();
        let helpers = thresholds[..2].iter().map(|&r| Formula::shifted(phi.clone(), -r)).collect();
        let grid = ApproxGrid::new(thresholds, helpers, vec![rat(1, 2); 2]).unwrap();
        let theta = approximate_by_grid(&phi, &grid).unwrap();
        let values = [0, 1, 2, 3, 4].map(|i| rat(i, 2));
        for &a in &values {
            for &b in &values {
                let mut m = FiniteMetricStructure::discrete(sig(rat(2, 1)), FiniteMetricStructure::numbered_labels(2));
                m.set_pred("P", &[0], a);
                m.set_pred("P", &[1], b);
                for pt in 0..2 {
                    let asg: Assignment = [("x".to_string(), pt)].into();
                    let gap = eval(&m, &phi, &asg).unwrap() - eval(&m, &theta, &asg).unwrap();
                    assert!(gap.abs() <= rat(2, 1));
                }
            }
        }
    }

    #[test]
    fn constant_helper_gives_bottom_threshold() {
        let grid = ApproxGrid::new(vec![rat(1, 1), rat(2, 1)], vec![Formula::constant(Rational::ZERO)], vec![Rational::ONE])
            .unwrap();
        let theta = approximate_by_grid(&Formula::constant(rat(5, 1)), &grid).unwrap();
        let m = FiniteMetricStructure::discrete(sig(Rational::ONE), vec!["a".into()]);
        assert_eq!(eval_sentence(&m, &theta).unwrap(), rat(1, 1));
    }

    #[test]
    fn malformed_grids() {
        let h = || Formula::constant(Rational::ZERO);
        assert!(matches!(
            ApproxGrid::new(vec![rat(0, 1), rat(1, 1), rat(3, 1)], vec![h(), h()], vec![Rational::ONE; 2]),
            Err(FragmentError::MalformedGrid(_))
        ));
        assert!(ApproxGrid::new(vec![rat(0, 1), rat(1, 1)], vec![h()], vec![Rational::ZERO]).is_err());
        assert!(ApproxGrid::new(vec![rat(0, 1)], vec![], vec![]).is_err());
        assert!(grid_thresholds(rat(2, 3), Rational::ZERO, Rational::ONE).is_err());
    }

    #[test]
    fn one_step_elimination() {
        let out = eliminate_inf_step(&p(), &p(), "x", &PLFunc::identity(), Rational::ONE, (Rational::ZERO, Rational::ONE))
            .unwrap();
        assert!(classify_fragment(&out).contains(&FragmentLabel::BCombination));
        let Formula::Unary(c, _) = &out else { panic!("single ramp expected: {out}") };
        assert_eq!(c, &PLFunc::ramp(Rational::ZERO, Rational::ONE, rat(1, 6)).unwrap());
        let text = out.to_string();
        assert!(text.contains("1/2"), "{text}");
        for v in [0, 1, 2, 3, 4, 5, 6].map(|i| rat(i, 6)) {
            let mut m = FiniteMetricStructure::discrete(sig(Rational::ONE), vec!["a".into()]);
            m.set_pred("P", &[0], v);
            let got = eval_sentence(&m, &out).unwrap();
            assert!((got - v).abs() <= Rational::ONE);
        }
        assert!(eliminate_inf_step(&p(), &p(), "x", &PLFunc::one_minus(), Rational::ONE, (Rational::ZERO, Rational::ONE))
            .is_err());
    }
}
