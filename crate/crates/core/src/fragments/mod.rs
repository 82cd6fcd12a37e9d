mod approx;
mod build;
mod classify;
mod encode;
mod translate;

pub use approx::{approximate_by_grid, eliminate_inf_step, grid_thresholds, ApproxGrid};
pub use build::{mk_h_node, mk_scp_instance, mk_scp_instance_classical, stability_criterion, ScpMonotonicity};
pub use classify::{
    as_desugared_h, classify_classical, classify_fragment, clause_parts, is_b_combination, is_bp_sentence,
    is_classical_horn, is_classical_horn_clause, is_classical_palyutin, is_horn, is_hp_sentence, is_palyutin,
    is_pp_sentence, is_primitive_horn, FragmentLabel,
};
pub use encode::{encode_classical, encode_classical_h};
pub use translate::{impl_to_horn, palyutin_to_horn};
