//! Arithmetic of Z_q-valued generalized Boolean functions and the
//! Reed-Muller code predicates built on them.

pub mod codes;
pub mod gbf;
pub mod modulus;
pub mod sdr;

pub use codes::{min_lee_distance, rm_code, rm_membership, zrm_code, zrm_membership};
pub use gbf::{anf_to_truth_table, truth_table_to_anf, Gbf, GbfJson, TruthTable};
pub use modulus::Modulus;
pub use sdr::{sparse_sdr, Sdr};
