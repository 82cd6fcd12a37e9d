//! Terms, formulas, connectives and signatures.

mod bounds;
mod classical;
mod formula;
mod parse;
mod pl;
mod print;
mod signature;

pub use bounds::{formula_bounds, formula_modulus};
pub use classical::ClassicalFormula;
pub use formula::{fresh_name, Condition, Formula, HNode, Term, Theory};
pub use parse::{parse_classical, parse_classical_inferred, parse_formula, parse_formula_inferred, parse_pl};
pub use pl::{Monotonicity, PLFunc};
pub use signature::{is_identifier, ClassicalSignature, FunctionSymbol, PredicateSymbol, Signature, RESERVED};
