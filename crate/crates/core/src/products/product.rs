//! Reduced products of finite metric structures.

use serde::Serialize;

use crate::error::ProductError;
use crate::products::filter::{limits_along, FiniteFilter};
use crate::rational::Rational;
use crate::semantics::{tuple_at, tuple_count, tuple_index, FiniteMetricStructure};

pub const DEFAULT_CAP: usize = 10_000;

/// A reduced product together with its projection. Result points are the
/// kernel-indexed tuples of factor points in lexicographic order, the first
/// kernel index varying slowest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedProduct {
    pub result: FiniteMetricStructure,
    pub factors: Vec<FiniteMetricStructure>,
    pub filter: FiniteFilter,
}

impl ReducedProduct {
    fn kernel_sizes(&self) -> Vec<usize> {
        self.filter.kernel().iter().map(|&i| self.factors[i].size()).collect()
    }

    /// Kernel-indexed coordinates of a result point.
    pub fn coords(&self, point: usize) -> Vec<usize> {
        let sizes = self.kernel_sizes();
        let mut out = vec![0; sizes.len()];
        let mut rest = point;
        for (slot, &s) in out.iter_mut().zip(&sizes).rev() {
            *slot = rest % s;
            rest /= s;
        }
        out
    }

    /// The result point with the given kernel-indexed coordinates.
    pub fn point_of(&self, coords: &[usize]) -> usize {
        mixed_index(&self.kernel_sizes(), coords)
    }

    /// A representative in the full product: off-kernel coordinates are 0.
    pub fn representative(&self, point: usize) -> Vec<usize> {
        let mut full = vec![0; self.factors.len()];
        for (&i, c) in self.filter.kernel().iter().zip(self.coords(point)) {
            full[i] = c;
        }
        full
    }

    /// The class of a tuple of the full product.
    pub fn project(&self, full: &[usize]) -> usize {
        let coords: Vec<usize> = self.filter.kernel().iter().map(|&i| full[i]).collect();
        self.point_of(&coords)
    }
}

fn mixed_index(sizes: &[usize], coords: &[usize]) -> usize {
    sizes.iter().zip(coords).fold(0, |acc, (&s, &c)| acc * s + c)
}

/// [`reduced_product_capped`] with the default cap of 10,000 points.
pub fn reduced_product(factors: &[FiniteMetricStructure], filter: &FiniteFilter) -> Result<ReducedProduct, ProductError> {
    reduced_product_capped(factors, filter, DEFAULT_CAP)
}

/// The reduced product of `factors` by `filter`. Distances and predicate
/// values are limsups along the filter of the factor values at a
/// representative; functions and constants act coordinatewise.
pub fn reduced_product_capped(
    factors: &[FiniteMetricStructure],
    filter: &FiniteFilter,
    cap: usize,
) -> Result<ReducedProduct, ProductError> {
    if factors.is_empty() {
        return Err(ProductError::NoFactors);
    }
    if filter.n() != factors.len() {
        return Err(ProductError::LengthMismatch {
            expected: factors.len(),
            found: filter.n(),
        });
    }
    let sig = &factors[0].signature;
    if let Some(i) = factors.iter().position(|m| &m.signature != sig) {
        return Err(ProductError::SignatureMismatch(i));
    }
    let size: u128 = filter.kernel().iter().map(|&i| factors[i].size() as u128).product();
    if size > cap as u128 {
        return Err(ProductError::TooLarge { size, cap });
    }
    let size = size as usize;
    let mut out = ReducedProduct {
        result: FiniteMetricStructure::discrete(sig.clone(), Vec::new()),
        factors: factors.to_vec(),
        filter: filter.clone(),
    };
    let reps: Vec<Vec<usize>> = (0..size).map(|p| out.representative(p)).collect();
    let kernel = filter.kernel();

    let labels = reps
        .iter()
        .map(|full| {
            if kernel.len() == 1 {
                factors[kernel[0]].labels[full[kernel[0]]].clone()
            } else {
                let parts: Vec<&str> = kernel.iter().map(|&i| factors[i].labels[full[i]].as_str()).collect();
                format!("({})", parts.join(","))
            }
        })
        .collect();

    let limsup = |values: Vec<Rational>| limits_along(filter, &values).map(|(hi, _)| hi);
    let mut dist = vec![vec![Rational::ZERO; size]; size];
    for a in 0..size {
        for b in 0..size {
            let values = factors
                .iter()
                .enumerate()
                .map(|(i, m)| m.dist[reps[a][i]][reps[b][i]])
                .collect();
            dist[a][b] = limsup(values)?;
        }
    }

    let mut preds = Vec::with_capacity(sig.predicates.len());
    for (pi, p) in sig.predicates.iter().enumerate() {
        let mut table = Vec::with_capacity(tuple_count(size, p.arity));
        for t in 0..tuple_count(size, p.arity) {
            let tuple = tuple_at(size, p.arity, t);
            let values = factors
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let coords: Vec<usize> = tuple.iter().map(|&q| reps[q][i]).collect();
                    m.preds[pi][tuple_index(m.size(), &coords)]
                })
                .collect();
            table.push(limsup(values)?);
        }
        preds.push(table);
    }

    let mut funcs = Vec::with_capacity(sig.functions.len());
    for (fi, f) in sig.functions.iter().enumerate() {
        let table = (0..tuple_count(size, f.arity))
            .map(|t| {
                let tuple = tuple_at(size, f.arity, t);
                let full: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        let coords: Vec<usize> = tuple.iter().map(|&q| reps[q][i]).collect();
                        m.funcs[fi][tuple_index(m.size(), &coords)]
                    })
                    .collect();
                out.project(&full)
            })
            .collect();
        funcs.push(table);
    }

    let full_consts: Vec<Vec<usize>> = (0..sig.constants.len())
        .map(|c| factors.iter().map(|m| m.consts[c]).collect())
        .collect();
    let consts = full_consts.iter().map(|full| out.project(full)).collect();

    out.result = FiniteMetricStructure {
        signature: sig.clone(),
        labels,
        dist,
        preds,
        funcs,
        consts,
    };
    Ok(out)
}
