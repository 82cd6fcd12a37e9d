//! Finite metric and classical structures.

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::syntax::{ClassicalSignature, Signature};

/// Number of `arity`-tuples over `n` points.
pub fn tuple_count(n: usize, arity: usize) -> usize {
    n.checked_pow(arity as u32).expect("tuple table too large")
}

/// Lexicographic index of a tuple: `a_0 * n^(k-1) + ... + a_(k-1)`.
pub fn tuple_index(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * n + a)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(n: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

/// A finite metric structure. Predicate and function tables are parallel to
/// the signature's symbol lists and indexed by [`tuple_index`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMetricStructure {
    pub signature: Signature,
    pub labels: Vec<String>,
    pub dist: Vec<Vec<Rational>>,
    pub preds: Vec<Vec<Rational>>,
    pub funcs: Vec<Vec<usize>>,
    pub consts: Vec<usize>,
}

impl FiniteMetricStructure {
    /// Discrete metric on `labels`, every predicate constantly `lo`, every
    /// function constantly the first point and every constant the first point.
    pub fn discrete(signature: Signature, labels: Vec<String>) -> Self {
        let n = labels.len();
        let dist = (0..n)
            .map(|a| (0..n).map(|b| if a == b { Rational::ZERO } else { Rational::ONE }).collect())
            .collect();
        let preds = signature
            .predicates
            .iter()
            .map(|p| vec![p.lo; tuple_count(n, p.arity)])
            .collect();
        let funcs = signature
            .functions
            .iter()
            .map(|f| vec![0; tuple_count(n, f.arity)])
            .collect();
        let consts = vec![0; signature.constants.len()];
        FiniteMetricStructure {
            signature,
            labels,
            dist,
            preds,
            funcs,
            consts,
        }
    }

    /// Points labelled `0, 1, ..., n-1`.
    pub fn numbered_labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn pred_index(&self, name: &str) -> Option<usize> {
        self.signature.predicates.iter().position(|p| p.name == name)
    }

    pub fn func_index(&self, name: &str) -> Option<usize> {
        self.signature.functions.iter().position(|f| f.name == name)
    }

    pub fn const_index(&self, name: &str) -> Option<usize> {
        self.signature.constants.iter().position(|c| c == name)
    }

    pub fn point(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Value of predicate `name` at `tuple`.
    pub fn pred(&self, name: &str, tuple: &[usize]) -> Option<Rational> {
        let i = self.pred_index(name)?;
        self.preds[i].get(tuple_index(self.size(), tuple)).copied()
    }

    pub fn set_pred(&mut self, name: &str, tuple: &[usize], value: Rational) {
        let i = self.pred_index(name).expect("unknown predicate");
        let n = self.size();
        self.preds[i][tuple_index(n, tuple)] = value;
    }

    pub fn set_func(&mut self, name: &str, tuple: &[usize], value: usize) {
        let i = self.func_index(name).expect("unknown function");
        let n = self.size();
        self.funcs[i][tuple_index(n, tuple)] = value;
    }

    pub fn set_const(&mut self, name: &str, value: usize) {
        let i = self.const_index(name).expect("unknown constant");
        self.consts[i] = value;
    }

    pub fn set_dist(&mut self, a: usize, b: usize, value: Rational) {
        self.dist[a][b] = value;
        self.dist[b][a] = value;
    }

    /// Max-metric distance between two tuples.
    pub fn tuple_dist(&self, a: &[usize], b: &[usize]) -> Rational {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.dist[x][y])
            .max()
            .unwrap_or(Rational::ZERO)
    }
}

/// A finite classical structure. Tables are parallel to the signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalStructure {
    pub signature: ClassicalSignature,
    pub labels: Vec<String>,
    pub relations: Vec<Vec<bool>>,
    pub funcs: Vec<Vec<usize>>,
    pub consts: Vec<usize>,
}

impl ClassicalStructure {
    /// All relations empty; functions and constants point at the first element.
    pub fn empty(signature: ClassicalSignature, labels: Vec<String>) -> Self {
        let n = labels.len();
        let relations = signature
            .relations
            .iter()
            .map(|(_, a)| vec![false; tuple_count(n, *a)])
            .collect();
        let funcs = signature
            .functions
            .iter()
            .map(|(_, a)| vec![0; tuple_count(n, *a)])
            .collect();
        let consts = vec![0; signature.constants.len()];
        ClassicalStructure {
            signature,
            labels,
            relations,
            funcs,
            consts,
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.signature.relations.iter().position(|r| r.0 == name)
    }

    pub fn func_index(&self, name: &str) -> Option<usize> {
        self.signature.functions.iter().position(|f| f.0 == name)
    }

    pub fn const_index(&self, name: &str) -> Option<usize> {
        self.signature.constants.iter().position(|c| c == name)
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> Option<bool> {
        let i = self.relation_index(name)?;
        self.relations[i].get(tuple_index(self.size(), tuple)).copied()
    }

    pub fn set(&mut self, name: &str, tuple: &[usize], value: bool) {
        let i = self.relation_index(name).expect("unknown relation");
        let n = self.size();
        self.relations[i][tuple_index(n, tuple)] = value;
    }

    pub fn set_func(&mut self, name: &str, tuple: &[usize], value: usize) {
        let i = self.func_index(name).expect("unknown function");
        let n = self.size();
        self.funcs[i][tuple_index(n, tuple)] = value;
    }

    pub fn set_const(&mut self, name: &str, value: usize) {
        let i = self.const_index(name).expect("unknown constant");
        self.consts[i] = value;
    }

    /// Direct product: points are pairs in lexicographic order, relations hold
    /// coordinatewise.
    pub fn product(&self, other: &ClassicalStructure) -> ClassicalStructure {
        let (n, m) = (self.size(), other.size());
        let labels = (0..n * m)
            .map(|p| format!("({},{})", self.labels[p / m], other.labels[p % m]))
            .collect();
        let split = |tuple: &[usize]| -> (Vec<usize>, Vec<usize>) {
            (tuple.iter().map(|p| p / m).collect(), tuple.iter().map(|p| p % m).collect())
        };
        let relations = self
            .signature
            .relations
            .iter()
            .enumerate()
            .map(|(r, (_, arity))| {
                (0..tuple_count(n * m, *arity))
                    .map(|t| {
                        let (a, b) = split(&tuple_at(n * m, *arity, t));
                        self.relations[r][tuple_index(n, &a)] && other.relations[r][tuple_index(m, &b)]
                    })
                    .collect()
            })
            .collect();
        let funcs = self
            .signature
            .functions
            .iter()
            .enumerate()
            .map(|(f, (_, arity))| {
                (0..tuple_count(n * m, *arity))
                    .map(|t| {
                        let (a, b) = split(&tuple_at(n * m, *arity, t));
                        self.funcs[f][tuple_index(n, &a)] * m + other.funcs[f][tuple_index(m, &b)]
                    })
                    .collect()
            })
            .collect();
        let consts = self
            .consts
            .iter()
            .zip(&other.consts)
            .map(|(a, b)| a * m + b)
            .collect();
        ClassicalStructure {
            signature: self.signature.clone(),
            labels,
            relations,
            funcs,
            consts,
        }
    }
}

/// The discrete metrization: distance 1 between distinct points, true
/// relations become value 0 and false ones value 1.
pub fn discrete_metrization(m: &ClassicalStructure) -> FiniteMetricStructure {
    let mut out = FiniteMetricStructure::discrete(m.signature.metrized(), m.labels.clone());
    out.preds = m
        .relations
        .iter()
        .map(|table| {
            table
                .iter()
                .map(|&t| if t { Rational::ZERO } else { Rational::ONE })
                .collect()
        })
        .collect();
    out.funcs = m.funcs.clone();
    out.consts = m.consts.clone();
    out
}
