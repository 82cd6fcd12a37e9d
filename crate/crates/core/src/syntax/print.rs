//! Printers. Output re-parses to the same AST.

use std::fmt::{self, Display, Formatter, Write};

use crate::syntax::classical::ClassicalFormula;
use crate::syntax::formula::{Formula, Term};

fn comma_sep<T: Display>(f: &mut Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                comma_sep(f, args)?;
                f.write_char(')')
            }
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atomic(p, args) if args.is_empty() => f.write_str(p),
            Formula::Atomic(p, args) => {
                write!(f, "{p}(")?;
                comma_sep(f, args)?;
                f.write_char(')')
            }
            Formula::Dist(a, b) => write!(f, "d({a}, {b})"),
            Formula::Max(xs) => {
                f.write_str("max(")?;
                comma_sep(f, xs)?;
                f.write_char(')')
            }
            Formula::Min(xs) => {
                f.write_str("min(")?;
                comma_sep(f, xs)?;
                f.write_char(')')
            }
            Formula::Affine { constant, args, .. } if args.is_empty() => write!(f, "{constant}"),
            Formula::Affine {
                coeffs,
                constant,
                args,
            } => {
                f.write_str("affine[")?;
                comma_sep(f, coeffs)?;
                write!(f, "; {constant}](")?;
                comma_sep(f, args)?;
                f.write_char(')')
            }
            Formula::Unary(c, x) => write!(f, "{c}({x})"),
            Formula::Sup(v, x) => write!(f, "sup {v}. {x}"),
            Formula::Inf(v, x) => write!(f, "inf {v}. {x}"),
            Formula::H(h) => write!(f, "h[{}; {}]({}, {})", h.var, h.d, h.phi, h.psi),
        }
    }
}

const PREC_QUANT: u8 = 0;
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 4;

fn prec(cf: &ClassicalFormula) -> u8 {
    use ClassicalFormula as CF;
    match cf {
        CF::Exists(..) | CF::Forall(..) => PREC_QUANT,
        CF::Implies(..) => PREC_IMPLIES,
        CF::Or(..) => PREC_OR,
        CF::And(..) => PREC_AND,
        CF::Not(_) => PREC_NOT,
        _ => 5,
    }
}

/// Prints `cf` in a context binding at least as tightly as `ctx`. A
/// quantifier extends as far right as possible, so it needs parentheses
/// unless nothing follows it (`rightmost`).
fn write_classical(
    out: &mut Formatter<'_>,
    cf: &ClassicalFormula,
    ctx: u8,
    rightmost: bool,
) -> fmt::Result {
    use ClassicalFormula as CF;
    let p = prec(cf);
    let paren = if p == PREC_QUANT { !rightmost } else { p < ctx };
    if paren {
        out.write_char('(')?;
    }
    let rightmost = rightmost || paren;
    match cf {
        CF::True => out.write_str("true")?,
        CF::False => out.write_str("false")?,
        CF::Atomic(r, args) if args.is_empty() => out.write_str(r)?,
        CF::Atomic(r, args) => {
            write!(out, "{r}(")?;
            comma_sep(out, args)?;
            out.write_char(')')?;
        }
        CF::Equal(a, b) => write!(out, "{a} = {b}")?,
        CF::Not(a) => {
            if let CF::Equal(s, t) = &**a {
                write!(out, "{s} != {t}")?;
            } else {
                out.write_char('~')?;
                write_classical(out, a, PREC_NOT, rightmost)?;
            }
        }
        CF::And(a, b) | CF::Or(a, b) => {
            let op = if matches!(cf, CF::And(..)) { " & " } else { " | " };
            write_classical(out, a, p, false)?;
            out.write_str(op)?;
            write_classical(out, b, p + 1, rightmost)?;
        }
        CF::Implies(a, b) => {
            write_classical(out, a, p + 1, false)?;
            out.write_str(" -> ")?;
            write_classical(out, b, p, rightmost)?;
        }
        CF::Exists(v, a) | CF::Forall(v, a) => {
            let q = if matches!(cf, CF::Exists(..)) { "exists" } else { "forall" };
            write!(out, "{q} {v}. ")?;
            write_classical(out, a, PREC_QUANT, rightmost)?;
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

impl Display for ClassicalFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_classical(f, self, PREC_QUANT, true)
    }
}
