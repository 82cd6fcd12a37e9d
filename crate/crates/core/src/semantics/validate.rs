use std::fmt;

use serde::Serialize;

use crate::rational::Rational;
use crate::semantics::structure::{tuple_at, tuple_count, FiniteMetricStructure};

/// One violated structure invariant together with its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Empty,
    Shape { what: String },
    NonzeroSelfDistance { point: usize, value: Rational },
    NegativeDistance { a: usize, b: usize, value: Rational },
    ZeroDistance { a: usize, b: usize },
    Asymmetric { a: usize, b: usize },
    Triangle { a: usize, b: usize, c: usize },
    Diameter { a: usize, b: usize, value: Rational },
    OutOfBounds { predicate: String, tuple: Vec<usize>, value: Rational },
    PointOutOfRange { symbol: String, value: usize },
    PredicateLipschitz { predicate: String, a: Vec<usize>, b: Vec<usize> },
    FunctionLipschitz { function: String, a: Vec<usize>, b: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "structure has no points"),
            Violation::Shape { what } => write!(f, "malformed table: {what}"),
            Violation::NonzeroSelfDistance { point, value } => {
                write!(f, "d({point}, {point}) = {value}, expected 0")
            }
            Violation::NegativeDistance { a, b, value } => write!(f, "d({a}, {b}) = {value} is negative"),
            Violation::ZeroDistance { a, b } => write!(f, "distinct points {a} and {b} are at distance 0"),
            Violation::Asymmetric { a, b } => write!(f, "d({a}, {b}) != d({b}, {a})"),
            Violation::Triangle { a, b, c } => {
                write!(f, "triangle inequality fails: d({a}, {c}) > d({a}, {b}) + d({b}, {c})")
            }
            Violation::Diameter { a, b, value } => {
                write!(f, "d({a}, {b}) = {value} exceeds the diameter bound")
            }
            Violation::OutOfBounds {
                predicate,
                tuple,
                value,
            } => write!(f, "{predicate}{tuple:?} = {value} is outside its declared bounds"),
            Violation::PointOutOfRange { symbol, value } => {
                write!(f, "`{symbol}` refers to point {value}, which does not exist")
            }
            Violation::PredicateLipschitz { predicate, a, b } => {
                write!(f, "{predicate} breaks its Lipschitz bound between {a:?} and {b:?}")
            }
            Violation::FunctionLipschitz { function, a, b } => {
                write!(f, "{function} breaks its Lipschitz bound between {a:?} and {b:?}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Violation>,
    /// Lipschitz violations when validation is not strict.
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks every structure invariant. With `strict_lipschitz` off, modulus
/// violations are reported as warnings instead of errors.
pub fn validate_structure(m: &FiniteMetricStructure, strict_lipschitz: bool) -> ValidationReport {
    let mut report = ValidationReport::default();
    let errors = &mut report.errors;
    let n = m.size();
    if n == 0 {
        errors.push(Violation::Empty);
        return report;
    }
    let sig = &m.signature;
    let shape = |what: String| Violation::Shape { what };
    if m.dist.len() != n || m.dist.iter().any(|row| row.len() != n) {
        errors.push(shape(format!("distance matrix is not {n}x{n}")));
    }
    if m.preds.len() != sig.predicates.len() {
        errors.push(shape("predicate tables do not match the signature".into()));
    }
    if m.funcs.len() != sig.functions.len() {
        errors.push(shape("function tables do not match the signature".into()));
    }
    if m.consts.len() != sig.constants.len() {
        errors.push(shape("constants do not match the signature".into()));
    }
    if !errors.is_empty() {
        return report;
    }
    for (p, table) in sig.predicates.iter().zip(&m.preds) {
        if table.len() != tuple_count(n, p.arity) {
            errors.push(shape(format!("table of `{}` has {} entries", p.name, table.len())));
        }
    }
    for (f, table) in sig.functions.iter().zip(&m.funcs) {
        if table.len() != tuple_count(n, f.arity) {
            errors.push(shape(format!("table of `{}` has {} entries", f.name, table.len())));
        }
    }
    if !errors.is_empty() {
        return report;
    }

    let d = &m.dist;
    for a in 0..n {
        if !d[a][a].is_zero() {
            errors.push(Violation::NonzeroSelfDistance { point: a, value: d[a][a] });
        }
        for b in 0..n {
            if d[a][b].is_negative() {
                errors.push(Violation::NegativeDistance { a, b, value: d[a][b] });
            }
            if a < b && d[a][b] != d[b][a] {
                errors.push(Violation::Asymmetric { a, b });
            }
            if a < b && d[a][b].is_zero() {
                errors.push(Violation::ZeroDistance { a, b });
            }
            if a < b && d[a][b] > sig.dmax {
                errors.push(Violation::Diameter { a, b, value: d[a][b] });
            }
            for c in 0..n {
                if d[a][c] > d[a][b] + d[b][c] {
                    errors.push(Violation::Triangle { a, b, c });
                }
            }
        }
    }

    for (f, table) in sig.functions.iter().zip(&m.funcs) {
        for &v in table {
            if v >= n {
                errors.push(Violation::PointOutOfRange {
                    symbol: f.name.clone(),
                    value: v,
                });
            }
        }
    }
    for (c, &v) in sig.constants.iter().zip(&m.consts) {
        if v >= n {
            errors.push(Violation::PointOutOfRange {
                symbol: c.clone(),
                value: v,
            });
        }
    }
    if !errors.is_empty() {
        return report;
    }

    let mut lipschitz = Vec::new();
    for (p, table) in sig.predicates.iter().zip(&m.preds) {
        let count = table.len();
        for i in 0..count {
            if table[i] < p.lo || table[i] > p.hi {
                errors.push(Violation::OutOfBounds {
                    predicate: p.name.clone(),
                    tuple: tuple_at(n, p.arity, i),
                    value: table[i],
                });
            }
            let a = tuple_at(n, p.arity, i);
            for j in i + 1..count {
                let b = tuple_at(n, p.arity, j);
                if (table[i] - table[j]).abs() > p.lipschitz * m.tuple_dist(&a, &b) {
                    lipschitz.push(Violation::PredicateLipschitz {
                        predicate: p.name.clone(),
                        a: a.clone(),
                        b,
                    });
                }
            }
        }
    }
    for (f, table) in sig.functions.iter().zip(&m.funcs) {
        let count = table.len();
        for i in 0..count {
            let a = tuple_at(n, f.arity, i);
            for j in i + 1..count {
                let b = tuple_at(n, f.arity, j);
                if d[table[i]][table[j]] > f.lipschitz * m.tuple_dist(&a, &b) {
                    lipschitz.push(Violation::FunctionLipschitz {
                        function: f.name.clone(),
                        a: a.clone(),
                        b,
                    });
                }
            }
        }
    }
    if strict_lipschitz {
        report.errors.extend(lipschitz);
    } else {
        report.warnings = lipschitz;
    }
    report
}
