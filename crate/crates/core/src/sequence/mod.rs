//! Complex sequences with support masks, aperiodic correlation, the `star`
//! operator, sequence extension and the `Phi` embedding.

pub mod correlation;
pub mod cxseq;
pub mod extension;

pub use correlation::{aperiodic_cross, autocorrelation, is_complementary, star};
pub use cxseq::{psi, CxSeq};
pub use extension::{extend, extend_gbf, phi, phi_len, phi_star, psi_star, ExtensionSpec};
