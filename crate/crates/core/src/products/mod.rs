//! Filters, reduced products, preservation checks and formula enumeration.

mod enumerate;
mod filter;
mod preserve;
mod product;

pub use enumerate::{
    enumerate_classical_palyutin, enumerate_fragment_formulas, enumerate_fragment_sentences, enumeration_atoms,
    palyutin_equiv_bounded, palyutin_equiv_in_pool, Basis, EnumFragment, EquivVerdict, FormulaStream, Separation,
};
pub use filter::{filter_from_generators, limits_along, limits_frechet, FiniteFilter, UPSeq};
pub use preserve::{
    bipreservation_in, check_bipreservation, check_los, check_theory_preservation, PreservationReport,
    PreservationRow, TheoryPreservationReport,
};
pub use product::{reduced_product, reduced_product_capped, ReducedProduct, DEFAULT_CAP};
