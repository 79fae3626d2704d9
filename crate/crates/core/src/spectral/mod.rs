//! OFDM envelope power, PMEPR estimation and the q-ary Walsh-Hadamard
//! transform.

pub mod envelope;
pub mod wht;

pub use envelope::{envelope_power, grid_gain_bound, pmepr, pmepr_upper_bound_star, EnvelopeConfig, PmeprEstimate, PmeprEvaluator, PmeprReport};
pub use wht::{coset_lower_bound, covering_radius_check, papr_p, wht, wht_on_grid, wht_with_cap, WhtSpectrum, WhtSummary};
