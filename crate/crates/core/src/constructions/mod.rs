//! Kernel pairs, Golay-style pair synthesis, the path construction and the
//! coset families built from kernels.

pub mod coset;
pub mod golay;
pub mod kernel;
pub mod path;

pub use coset::{
    alpha_beta_family, construct_coset_rep, coset_indices, davis_jedwab_family, distinct_anfs, enumerate_coset,
    grid_values, kernel_family, AlphaBetaMember, CosetRep, CosetRepJson, CosetWords, Family, SweepMode,
};
pub use golay::{golay_concatenate, golay_interleave, rs_combine};
pub use kernel::{kernel_catalog, KernelJson, KernelPair, NamedKernel};
pub use path::{construct_path, construct_path_on, PathSpec};
