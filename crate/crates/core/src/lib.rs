//! Continuous first-order logic over finite metric structures: reduced
//! products, Horn and Palyutin fragments, and preservation checks.

pub mod error;
pub mod fragments;
pub mod products;
pub mod rational;
pub mod semantics;
pub mod syntax;

pub use error::{EvalError, FragmentError, ProductError, SyntaxError};
pub use fragments::FragmentLabel;
pub use products::{Basis, EnumFragment, FiniteFilter, ReducedProduct, UPSeq};
pub use rational::{rat, Rational};
pub use semantics::{Assignment, ClassicalStructure, FiniteMetricStructure};
pub use syntax::{ClassicalFormula, ClassicalSignature, Condition, Formula, PLFunc, Signature, Term, Theory};
