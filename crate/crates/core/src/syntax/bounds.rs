//! Static value bounds and Lipschitz moduli of formulas.

use crate::error::SyntaxError;
use crate::rational::Rational;
use crate::syntax::formula::{Formula, Term};
use crate::syntax::signature::Signature;

fn unknown(kind: &'static str, name: &str) -> SyntaxError {
    SyntaxError::UnknownSymbol {
        kind,
        name: name.to_string(),
    }
}

/// An interval containing every value of `formula` in every structure that
/// satisfies the bounds declared in `sig`.
pub fn formula_bounds(formula: &Formula, sig: &Signature) -> Result<(Rational, Rational), SyntaxError> {
    Ok(match formula {
        Formula::Atomic(p, _) => {
            let sym = sig.predicate(p).ok_or_else(|| unknown("predicate", p))?;
            (sym.lo, sym.hi)
        }
        Formula::Dist(..) => (Rational::ZERO, sig.dmax),
        Formula::Max(xs) | Formula::Min(xs) => {
            let bs = xs
                .iter()
                .map(|x| formula_bounds(x, sig))
                .collect::<Result<Vec<_>, _>>()?;
            let los = bs.iter().map(|b| b.0);
            let his = bs.iter().map(|b| b.1);
            if matches!(formula, Formula::Max(_)) {
                (los.max().unwrap(), his.max().unwrap())
            } else {
                (los.min().unwrap(), his.min().unwrap())
            }
        }
        Formula::Affine {
            coeffs,
            constant,
            args,
        } => {
            let (mut lo, mut hi) = (*constant, *constant);
            for (c, x) in coeffs.iter().zip(args) {
                let (a, b) = formula_bounds(x, sig)?;
                let (u, v) = (*c * a, *c * b);
                lo += u.min(v);
                hi += u.max(v);
            }
            (lo, hi)
        }
        Formula::Unary(c, x) => {
            let (a, b) = formula_bounds(x, sig)?;
            c.image(a, b)
        }
        Formula::Sup(_, x) | Formula::Inf(_, x) => formula_bounds(x, sig)?,
        Formula::H(h) => formula_bounds(&Formula::desugar_h(h), sig)?,
    })
}

fn term_modulus(t: &Term, sig: &Signature) -> Result<Rational, SyntaxError> {
    Ok(match t {
        Term::Var(_) => Rational::ONE,
        Term::Const(_) => Rational::ZERO,
        Term::App(g, args) => {
            let sym = sig.function(g).ok_or_else(|| unknown("function", g))?;
            let mut m = Rational::ZERO;
            for a in args {
                m = m.max(term_modulus(a, sig)?);
            }
            sym.lipschitz * m
        }
    })
}

/// A Lipschitz constant `C` with `|f(a) - f(b)| <= C * max_v d(a_v, b_v)` for
/// any two assignments `a`, `b` to the free variables.
pub fn formula_modulus(formula: &Formula, sig: &Signature) -> Result<Rational, SyntaxError> {
    Ok(match formula {
        Formula::Atomic(p, args) => {
            let sym = sig.predicate(p).ok_or_else(|| unknown("predicate", p))?;
            let mut m = Rational::ZERO;
            for a in args {
                m = m.max(term_modulus(a, sig)?);
            }
            sym.lipschitz * m
        }
        Formula::Dist(a, b) => term_modulus(a, sig)? + term_modulus(b, sig)?,
        Formula::Max(xs) | Formula::Min(xs) => {
            let mut m = Rational::ZERO;
            for x in xs {
                m = m.max(formula_modulus(x, sig)?);
            }
            m
        }
        Formula::Affine { coeffs, args, .. } => {
            let mut m = Rational::ZERO;
            for (c, x) in coeffs.iter().zip(args) {
                m += c.abs() * formula_modulus(x, sig)?;
            }
            m
        }
        Formula::Unary(c, x) => c.lipschitz() * formula_modulus(x, sig)?,
        Formula::Sup(_, x) | Formula::Inf(_, x) => formula_modulus(x, sig)?,
        Formula::H(h) => formula_modulus(&Formula::desugar_h(h), sig)?,
    })
}
