//! Finite structures and exact evaluation.

mod eval;
mod structure;
pub mod table;
mod validate;

pub use eval::{eval, eval_classical, eval_sentence, satisfies_theory, Assignment, TheoryCheck};
pub use structure::{
    discrete_metrization, tuple_at, tuple_count, tuple_index, ClassicalStructure, FiniteMetricStructure,
};
pub use validate::{validate_structure, ValidationReport, Violation};
