//! Exact piecewise-linear unary connectives.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SyntaxError;
use crate::rational::Rational;

/// A total continuous piecewise-linear map `Q -> Q`.
///
/// The map interpolates linearly between consecutive breakpoints and extends
/// to the left of the first breakpoint with `left_slope` and to the right of
/// the last one with `right_slope`. Structural equality (`==`) compares the
/// stored breakpoints; use [`PLFunc::same_function`] for extensional equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PLFunc {
    points: Vec<(Rational, Rational)>,
    left_slope: Rational,
    right_slope: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
    Constant,
    Neither,
}

impl Monotonicity {
    pub fn is_nondecreasing(self) -> bool {
        matches!(self, Monotonicity::Nondecreasing | Monotonicity::Constant)
    }

    pub fn is_nonincreasing(self) -> bool {
        matches!(self, Monotonicity::Nonincreasing | Monotonicity::Constant)
    }
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monotonicity::Nondecreasing => "nondecreasing",
            Monotonicity::Nonincreasing => "nonincreasing",
            Monotonicity::Constant => "constant",
            Monotonicity::Neither => "neither",
        })
    }
}

impl PLFunc {
    /// Breakpoints must be nonempty with strictly increasing x-coordinates.
    pub fn new(
        points: Vec<(Rational, Rational)>,
        left_slope: Rational,
        right_slope: Rational,
    ) -> Result<Self, SyntaxError> {
        if points.is_empty() {
            return Err(SyntaxError::MalformedConnective(
                "a piecewise-linear connective needs at least one breakpoint".into(),
            ));
        }
        if let Some(w) = points.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(SyntaxError::MalformedConnective(format!(
                "breakpoint x-coordinates must increase strictly ({} then {})",
                w[0].0, w[1].0
            )));
        }
        Ok(PLFunc {
            points,
            left_slope,
            right_slope,
        })
    }

    /// Breakpoints with both end slopes zero.
    pub fn from_points(points: Vec<(Rational, Rational)>) -> Result<Self, SyntaxError> {
        Self::new(points, Rational::ZERO, Rational::ZERO)
    }

    /// `t -> slope * t + intercept`.
    pub fn affine(slope: Rational, intercept: Rational) -> Self {
        PLFunc {
            points: vec![(Rational::ZERO, intercept)],
            left_slope: slope,
            right_slope: slope,
        }
    }

    pub fn identity() -> Self {
        Self::affine(Rational::ONE, Rational::ZERO)
    }

    pub fn constant(value: Rational) -> Self {
        Self::affine(Rational::ZERO, value)
    }

    /// `t -> 1 - t`, written with breakpoints at 0 and 1.
    pub fn one_minus() -> Self {
        PLFunc {
            points: vec![(Rational::ZERO, Rational::ONE), (Rational::ONE, Rational::ZERO)],
            left_slope: -Rational::ONE,
            right_slope: -Rational::ONE,
        }
    }

    /// `t -> max(0, t)`.
    pub fn positive_part() -> Self {
        PLFunc {
            points: vec![(Rational::ZERO, Rational::ZERO)],
            left_slope: Rational::ZERO,
            right_slope: Rational::ONE,
        }
    }

    /// `t -> max(t, floor)`.
    pub fn max_with(floor: Rational) -> Self {
        PLFunc {
            points: vec![(floor, floor)],
            left_slope: Rational::ZERO,
            right_slope: Rational::ONE,
        }
    }

    /// The clamp `t -> max(lo, min(hi, lo + t * (hi - lo) / run))`, rising
    /// from `lo` at `t = 0` to `hi` at `t = run`.
    pub fn ramp(lo: Rational, hi: Rational, run: Rational) -> Result<Self, SyntaxError> {
        Self::from_points(vec![(Rational::ZERO, lo), (run, hi)])
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn left_slope(&self) -> Rational {
        self.left_slope
    }

    pub fn right_slope(&self) -> Rational {
        self.right_slope
    }

    /// Exact value at `t`.
    pub fn eval(&self, t: Rational) -> Rational {
        let pts = &self.points;
        let (x0, y0) = pts[0];
        if t <= x0 {
            return y0 + self.left_slope * (t - x0);
        }
        let (xn, yn) = pts[pts.len() - 1];
        if t >= xn {
            return yn + self.right_slope * (t - xn);
        }
        // first breakpoint strictly right of t; exists and is > 0 here
        let k = pts.partition_point(|&(x, _)| x <= t);
        let (xa, ya) = pts[k - 1];
        let (xb, yb) = pts[k];
        if t == xa {
            return ya;
        }
        ya + (yb - ya) * (t - xa) / (xb - xa)
    }

    /// Slopes of every linear piece, left ray first, right ray last.
    pub fn slopes(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.points.len() + 1);
        out.push(self.left_slope);
        for w in self.points.windows(2) {
            out.push((w[1].1 - w[0].1) / (w[1].0 - w[0].0));
        }
        out.push(self.right_slope);
        out
    }

    pub fn monotonicity(&self) -> Monotonicity {
        let slopes = self.slopes();
        let any_pos = slopes.iter().any(|s| s.is_positive());
        let any_neg = slopes.iter().any(|s| s.is_negative());
        match (any_pos, any_neg) {
            (false, false) => Monotonicity::Constant,
            (true, false) => Monotonicity::Nondecreasing,
            (false, true) => Monotonicity::Nonincreasing,
            (true, true) => Monotonicity::Neither,
        }
    }

    /// Best Lipschitz constant: the largest absolute slope.
    pub fn lipschitz(&self) -> Rational {
        self.slopes()
            .into_iter()
            .map(|s| s.abs())
            .max()
            .unwrap_or(Rational::ZERO)
    }

    /// The unique `t` with `self.eval(t) == t`, for nonincreasing maps.
    ///
    /// `t - D(t)` has every slope `>= 1` when `D` is nonincreasing, so it is
    /// strictly increasing and surjective; its root is found by locating the
    /// piece where it changes sign and solving that linear equation.
    pub fn fixed_point(&self) -> Result<Rational, SyntaxError> {
        let mono = self.monotonicity();
        if !mono.is_nonincreasing() {
            return Err(SyntaxError::NotMonotone {
                connective: self.to_string(),
                required: Monotonicity::Nonincreasing,
                found: mono,
            });
        }
        let g = |x: Rational, y: Rational| x - y;
        let pts = &self.points;
        let (x0, y0) = pts[0];
        let g0 = g(x0, y0);
        if g0 >= Rational::ZERO {
            // g(t) = g0 + (1 - left_slope)(t - x0) on the left ray
            return Ok(x0 - g0 / (Rational::ONE - self.left_slope));
        }
        for w in pts.windows(2) {
            let (xa, ya) = w[0];
            let (xb, yb) = w[1];
            let ga = g(xa, ya);
            let gb = g(xb, yb);
            if gb >= Rational::ZERO {
                // ga < 0 <= gb
                return Ok(xa + (xb - xa) * (-ga) / (gb - ga));
            }
        }
        let (xn, yn) = pts[pts.len() - 1];
        let gn = g(xn, yn);
        Ok(xn - gn / (Rational::ONE - self.right_slope))
    }

    /// Exact image `[min, max]` of the closed interval `[lo, hi]`.
    pub fn image(&self, lo: Rational, hi: Rational) -> (Rational, Rational) {
        debug_assert!(lo <= hi);
        let mut min = self.eval(lo);
        let mut max = min;
        let mut visit = |v: Rational| {
            min = min.min(v);
            max = max.max(v);
        };
        visit(self.eval(hi));
        for &(x, y) in &self.points {
            if lo < x && x < hi {
                visit(y);
            }
        }
        (min, max)
    }

    /// Equivalent representation with collinear breakpoints removed.
    ///
    /// Two maps are equal as functions iff their canonical forms are equal;
    /// an affine map canonicalizes to a single breakpoint at `x = 0`.
    pub fn canonical(&self) -> PLFunc {
        let slopes = self.slopes();
        let kept: Vec<(Rational, Rational)> = self
            .points
            .iter()
            .enumerate()
            .filter(|&(i, _)| slopes[i] != slopes[i + 1])
            .map(|(_, p)| *p)
            .collect();
        if kept.is_empty() {
            PLFunc::affine(self.left_slope, self.eval(Rational::ZERO))
        } else {
            PLFunc {
                points: kept,
                left_slope: self.left_slope,
                right_slope: self.right_slope,
            }
        }
    }

    pub fn same_function(&self, other: &PLFunc) -> bool {
        self.canonical() == other.canonical()
    }
}

/// `pl{(x,y),...}` with a `slopes[l,r]` suffix when either end slope is nonzero.
impl fmt::Display for PLFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("pl{")?;
        for (i, (x, y)) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({x},{y})")?;
        }
        f.write_str("}")?;
        if !self.left_slope.is_zero() || !self.right_slope.is_zero() {
            write!(f, "slopes[{},{}]", self.left_slope, self.right_slope)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PLFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
