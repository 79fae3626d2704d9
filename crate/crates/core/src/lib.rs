//! Cosets of the generalized first-order Reed-Muller code `RM_q(1,m)` with
//! low peak-to-mean envelope power ratio (PMEPR).
//!
//! The crate builds coset representatives from short kernel pairs, bounds
//! their PMEPR from above with aperiodic correlations and from below with the
//! q-ary Walsh-Hadamard transform, and checks both bounds against an
//! oversampled OFDM envelope.

pub mod algebra;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod perm;
pub mod search;
pub mod sequence;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
