//! Maximum PMEPR over the words of a coset `f + RM_q(1,m)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Gbf;
use crate::constructions::{coset_indices, CosetWords, SweepMode};
use crate::error::Result;
use crate::exec::Executor;
use crate::spectral::{EnvelopeConfig, PmeprEvaluator};

/// Cosets with at most this many words are swept exhaustively by default.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 18;
/// Default sample size above [`EXHAUSTIVE_LIMIT`].
pub const SAMPLE_SIZE: u64 = 1 << 16;
pub const SAMPLE_SEED: u64 = 0x5EED;

/// Words handled by one task.
const CHUNK: usize = 512;

/// Exhaustive up to [`EXHAUSTIVE_LIMIT`] words, seeded stratified sampling
/// beyond.
pub fn default_mode(size: u128) -> SweepMode {
    if size <= EXHAUSTIVE_LIMIT {
        SweepMode::Exhaustive
    } else {
        SweepMode::Sample { n: SAMPLE_SIZE, seed: SAMPLE_SEED }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub words: u64,
    pub sampled: bool,
    pub max_pmepr: f64,
    /// Coset index of the first word attaining the maximum.
    pub argmax: u128,
    pub theta: f64,
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    index: u128,
    theta: f64,
}

impl Best {
    fn merge(self, other: Best) -> Best {
        // Strictly larger wins; equal values keep the earlier index.
        if other.value > self.value || (other.value == self.value && other.index < self.index) {
            other
        } else {
            self
        }
    }
}

/// Sweeps `f + RM_q(1,m)` according to `mode`.
///
/// Chunks are reduced in index order, so the result is the same for every
/// worker count.
pub fn sweep_coset(f: &Gbf, mode: SweepMode, env: EnvelopeConfig, ex: &Executor) -> Result<SweepResult> {
    env.validate()?;
    let words = CosetWords::new(f);
    let indices = coset_indices(words.size(), mode)?;
    let n = words.word_len();
    let phases = f.modulus().phase_table();
    let chunks = indices.len().div_ceil(CHUNK);

    let per_chunk = ex.try_map_init(
        0..chunks,
        || Ok((PmeprEvaluator::new(n, env)?, vec![0u32; n], vec![Complex64::default(); n])),
        |(eval, ph, vals), c| {
            let mut best = Best { value: f64::NEG_INFINITY, index: 0, theta: 0.0 };
            for &idx in &indices[c * CHUNK..((c + 1) * CHUNK).min(indices.len())] {
                words.phases_into(idx, ph);
                for (v, &t) in vals.iter_mut().zip(ph.iter()) {
                    *v = phases[t as usize];
                }
                let est = eval.evaluate_values_above(vals, best.value);
                best = best.merge(Best { value: est.grid_max, index: idx, theta: est.argmax_theta });
            }
            Ok(best)
        },
    )?;
    let best = per_chunk
        .into_iter()
        .reduce(Best::merge)
        .unwrap_or(Best { value: 0.0, index: 0, theta: 0.0 });
    Ok(SweepResult {
        words: indices.len() as u64,
        sampled: (indices.len() as u128) < words.size(),
        max_pmepr: best.value,
        argmax: best.index,
        theta: best.theta,
    })
}
