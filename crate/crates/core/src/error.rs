use thiserror::Error;

use crate::syntax::Monotonicity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unknown {kind} symbol `{name}`")]
    UnknownSymbol { kind: &'static str, name: String },
    #[error("`{name}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("connective {connective} must be {required}, but it is {found}")]
    NotMonotone {
        connective: String,
        required: Monotonicity,
        found: Monotonicity,
    },
    #[error("malformed connective: {0}")]
    MalformedConnective(String),
    #[error("malformed signature: {0}")]
    MalformedSignature(String),
    #[error("h-node stores delta {stored} but the fixed point of its connective is {fixed_point}")]
    WrongFixedPoint {
        stored: crate::Rational,
        fixed_point: crate::Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned")]
    Unassigned(String),
    #[error("structure has no interpretation for {kind} `{name}`")]
    Uninterpreted { kind: &'static str, name: String },
    #[error("point index {0} is out of range")]
    NoSuchPoint(usize),
    #[error("condition sentence has free variables: {0:?}")]
    OpenSentence(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error("{what} is not a {fragment} formula: {formula}")]
    NotInFragment {
        what: &'static str,
        fragment: &'static str,
        formula: String,
    },
    #[error("need at least {min} disjuncts, got {found}")]
    TooFewDisjuncts { min: usize, found: usize },
    #[error("{connectives} connectives given for {formulas} formulas")]
    ConnectiveCount { connectives: usize, formulas: usize },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("malformed approximation grid: {0}")]
    MalformedGrid(String),
    #[error("formula may take negative values (lower bound {0}); shift it first, e.g. max(phi - r, 0)")]
    PossiblyNegative(crate::Rational),
    #[error("variable `{0}` already occurs free in the formula")]
    VariableClash(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("generators have empty intersection: the filter is improper")]
    ImproperFilter,
    #[error("generator mentions index {index} but the index set has {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("a reduced product needs at least one factor")]
    NoFactors,
    #[error("factor {0} has a different signature from factor 0")]
    SignatureMismatch(usize),
    #[error("reduced product would have {size} points, above the cap of {cap}")]
    TooLarge { size: u128, cap: usize },
    #[error("filter kernel {0:?} is not a singleton")]
    NotUltrafilter(Vec<usize>),
    #[error("factor {0} does not model the theory although it lies in the filter kernel")]
    HypothesisNotMet(usize),
    #[error("cannot enumerate fragment `{0}` (supported: horn, palyutin, b-combination, formula)")]
    UnsupportedFragment(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
