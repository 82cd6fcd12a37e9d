//! Comparisons between values in a reduced product and limits of factor values.

use serde::Serialize;

use crate::error::ProductError;
use crate::products::filter::{limits_along, FiniteFilter};
use crate::products::product::{reduced_product, ReducedProduct};
use crate::rational::Rational;
use crate::semantics::{eval, satisfies_theory, tuple_at, tuple_count, Assignment, FiniteMetricStructure};
use crate::syntax::{Formula, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationRow {
    /// Labels of the product points assigned to the free variables.
    pub tuple: Vec<String>,
    pub product_value: Rational,
    pub limsup: Rational,
    pub liminf: Rational,
    pub preserved: bool,
    pub copreserved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub formula: String,
    /// Free variables in the order used by each row's tuple.
    pub variables: Vec<String>,
    pub kernel: Vec<usize>,
    pub rows: Vec<PreservationRow>,
    pub preserved: bool,
    pub copreserved: bool,
}

impl PreservationReport {
    pub fn bipreserved(&self) -> bool {
        self.preserved && self.copreserved
    }
}

fn assignment(vars: &[String], points: &[usize]) -> Assignment {
    vars.iter().cloned().zip(points.iter().copied()).collect()
}

/// Compares the value of `formula` in the reduced product against the limsup
/// of its factor values, at every tuple of product points. Tuples run in
/// lexicographic order of the product's points.
pub fn check_bipreservation(
    formula: &Formula,
    factors: &[FiniteMetricStructure],
    filter: &FiniteFilter,
) -> Result<PreservationReport, ProductError> {
    let rp = reduced_product(factors, filter)?;
    bipreservation_in(formula, &rp)
}

/// [`check_bipreservation`] for an already built product.
pub fn bipreservation_in(formula: &Formula, rp: &ReducedProduct) -> Result<PreservationReport, ProductError> {
    let vars: Vec<String> = formula.free_vars().into_iter().collect();
    let size = rp.result.size();
    let reps: Vec<Vec<usize>> = (0..size).map(|p| rp.representative(p)).collect();
    let mut rows = Vec::new();
    for t in 0..tuple_count(size, vars.len()) {
        let points = tuple_at(size, vars.len(), t);
        let product_value = eval(&rp.result, formula, &assignment(&vars, &points))?;
        let factor_values = rp
            .factors
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let coords: Vec<usize> = points.iter().map(|&p| reps[p][i]).collect();
                eval(m, formula, &assignment(&vars, &coords))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let (limsup, liminf) = limits_along(&rp.filter, &factor_values)?;
        rows.push(PreservationRow {
            tuple: points.iter().map(|&p| rp.result.labels[p].clone()).collect(),
            product_value,
            limsup,
            liminf,
            preserved: product_value <= limsup,
            copreserved: limsup <= product_value,
        });
    }
    Ok(PreservationReport {
        formula: formula.to_string(),
        variables: vars,
        kernel: rp.filter.kernel().to_vec(),
        preserved: rows.iter().all(|r| r.preserved),
        copreserved: rows.iter().all(|r| r.copreserved),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoryPreservationReport {
    /// Whether each factor models the theory.
    pub factor_models: Vec<bool>,
    /// Whether every factor in the kernel models it, i.e. the set of models
    /// belongs to the filter.
    pub hypothesis: bool,
    pub product_models: bool,
    /// With the hypothesis met: does the product model the theory?
    pub preserved: Option<bool>,
    /// For the trivial filter with a product that models the theory: do all
    /// factors?
    pub cartesian_factors: Option<bool>,
    /// For a reduced power that models the theory: does the base structure?
    pub reduced_root: Option<bool>,
}

/// Checks whether the reduced product models `theory`. Unless `waive` is
/// set, fails when some kernel factor does not model it.
pub fn check_theory_preservation(
    theory: &Theory,
    factors: &[FiniteMetricStructure],
    filter: &FiniteFilter,
    waive: bool,
) -> Result<TheoryPreservationReport, ProductError> {
    let rp = reduced_product(factors, filter)?;
    let factor_models = factors
        .iter()
        .map(|m| satisfies_theory(m, theory).map(|c| c.satisfied()))
        .collect::<Result<Vec<_>, _>>()?;
    let outside = filter.kernel().iter().copied().find(|&i| !factor_models[i]);
    if let (Some(i), false) = (outside, waive) {
        return Err(ProductError::HypothesisNotMet(i));
    }
    let product_models = satisfies_theory(&rp.result, theory)?.satisfied();
    let trivial = filter.kernel().len() == filter.n();
    let power = factors.iter().all(|m| m == &factors[0]);
    Ok(TheoryPreservationReport {
        hypothesis: outside.is_none(),
        preserved: outside.is_none().then_some(product_models),
        cartesian_factors: (trivial && product_models).then(|| factor_models.iter().all(|&b| b)),
        reduced_root: (power && product_models).then_some(factor_models[0]),
        factor_models,
        product_models,
    })
}

/// Checks that the product by a principal ultrafilter at `i` agrees with
/// factor `i` on `formula` at every tuple.
pub fn check_los(formula: &Formula, factors: &[FiniteMetricStructure], filter: &FiniteFilter) -> Result<bool, ProductError> {
    if !filter.is_ultra() {
        return Err(ProductError::NotUltrafilter(filter.kernel().to_vec()));
    }
    let i = filter.kernel()[0];
    let rp = reduced_product(factors, filter)?;
    let vars: Vec<String> = formula.free_vars().into_iter().collect();
    let size = rp.result.size();
    for t in 0..tuple_count(size, vars.len()) {
        let points = tuple_at(size, vars.len(), t);
        let coords: Vec<usize> = points.iter().map(|&p| rp.coords(p)[0]).collect();
        let in_product = eval(&rp.result, formula, &assignment(&vars, &points))?;
        let in_factor = eval(&factors[i], formula, &assignment(&vars, &coords))?;
        if in_product != in_factor {
            return Ok(false);
        }
    }
    Ok(true)
}
