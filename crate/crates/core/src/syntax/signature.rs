use serde::{Deserialize, Serialize};

use crate::error::SyntaxError;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionSymbol {
    pub name: String,
    pub arity: usize,
    pub lipschitz: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PredicateSymbol {
    pub name: String,
    pub arity: usize,
    /// Every interpretation takes values in `[lo, hi]`.
    pub lo: Rational,
    pub hi: Rational,
    pub lipschitz: Rational,
}

/// A single-sorted metric signature.
///
/// Moduli of uniform continuity are Lipschitz constants with respect to the
/// max-metric on tuples, and `dmax` bounds the diameter of every structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub constants: Vec<String>,
    pub functions: Vec<FunctionSymbol>,
    pub predicates: Vec<PredicateSymbol>,
    pub dmax: Rational,
}

/// Names that the surface grammar reserves for connectives and quantifiers.
pub const RESERVED: &[&str] = &[
    "max", "min", "affine", "pl", "slopes", "sup", "inf", "h", "d", "exists", "forall", "true",
    "false",
];

impl Signature {
    pub fn new(dmax: Rational) -> Self {
        Signature {
            constants: Vec::new(),
            functions: Vec::new(),
            predicates: Vec::new(),
            dmax,
        }
    }

    pub fn with_constant(mut self, name: &str) -> Self {
        self.constants.push(name.to_string());
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize, lipschitz: Rational) -> Self {
        self.functions.push(FunctionSymbol {
            name: name.to_string(),
            arity,
            lipschitz,
        });
        self
    }

    pub fn with_predicate(
        mut self,
        name: &str,
        arity: usize,
        lo: Rational,
        hi: Rational,
        lipschitz: Rational,
    ) -> Self {
        self.predicates.push(PredicateSymbol {
            name: name.to_string(),
            arity,
            lo,
            hi,
            lipschitz,
        });
        self
    }

    /// Checks `lo <= hi`, nonnegative bounds, and that names are unique and
    /// not reserved.
    pub fn validate(&self) -> Result<(), SyntaxError> {
        let bad = |m: String| Err(SyntaxError::MalformedSignature(m));
        if self.dmax.is_negative() {
            return bad(format!("negative diameter bound {}", self.dmax));
        }
        let mut names: Vec<&str> = self
            .constants
            .iter()
            .map(String::as_str)
            .chain(self.functions.iter().map(|f| f.name.as_str()))
            .chain(self.predicates.iter().map(|p| p.name.as_str()))
            .collect();
        for n in &names {
            if RESERVED.contains(n) {
                return bad(format!("`{n}` is a reserved word"));
            }
            if !is_identifier(n) {
                return bad(format!("`{n}` is not an identifier"));
            }
        }
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("symbol `{}` is declared twice", w[0]));
        }
        for f in &self.functions {
            if f.lipschitz.is_negative() {
                return bad(format!("function `{}` has a negative Lipschitz bound", f.name));
            }
        }
        for p in &self.predicates {
            if p.lo > p.hi {
                return bad(format!("predicate `{}` has lo {} > hi {}", p.name, p.lo, p.hi));
            }
            if p.lipschitz.is_negative() {
                return bad(format!("predicate `{}` has a negative Lipschitz bound", p.name));
            }
        }
        Ok(())
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateSymbol> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn function(&self, name: &str) -> Option<&FunctionSymbol> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
    }

    /// The relational skeleton, dropping bounds and moduli.
    pub fn classical(&self) -> ClassicalSignature {
        ClassicalSignature {
            constants: self.constants.clone(),
            functions: self.functions.iter().map(|f| (f.name.clone(), f.arity)).collect(),
            relations: self.predicates.iter().map(|p| (p.name.clone(), p.arity)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ClassicalSignature {
    pub constants: Vec<String>,
    pub functions: Vec<(String, usize)>,
    pub relations: Vec<(String, usize)>,
}

impl ClassicalSignature {
    pub fn with_constant(mut self, name: &str) -> Self {
        self.constants.push(name.to_string());
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.functions.push((name.to_string(), arity));
        self
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> Self {
        self.relations.push((name.to_string(), arity));
        self
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.iter().find(|r| r.0 == name).map(|r| r.1)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.iter().find(|r| r.0 == name).map(|r| r.1)
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
    }

    /// Discrete conventions: values in `[0, 1]`, every modulus 1, diameter 1.
    pub fn metrized(&self) -> Signature {
        let one = Rational::ONE;
        Signature {
            constants: self.constants.clone(),
            functions: self
                .functions
                .iter()
                .map(|(n, a)| FunctionSymbol {
                    name: n.clone(),
                    arity: *a,
                    lipschitz: one,
                })
                .collect(),
            predicates: self
                .relations
                .iter()
                .map(|(n, a)| PredicateSymbol {
                    name: n.clone(),
                    arity: *a,
                    lo: Rational::ZERO,
                    hi: one,
                    lipschitz: one,
                })
                .collect(),
            dmax: one,
        }
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_catches_bad_declarations() {
        let one = Rational::ONE;
        let ok = Signature::new(one).with_predicate("P", 1, Rational::ZERO, one, one);
        assert!(ok.validate().is_ok());
        let inverted = Signature::new(one).with_predicate("P", 1, one, Rational::ZERO, one);
        assert!(inverted.validate().is_err());
        let dup = ok.clone().with_constant("P");
        assert!(dup.validate().is_err());
        let reserved = Signature::new(one).with_constant("max");
        assert!(reserved.validate().is_err());
    }
}
