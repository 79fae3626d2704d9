//! OFDM envelope power and oversampled PMEPR estimation.
//!
//! The carrier offset is taken as zero: it multiplies the envelope by a
//! unimodular factor and cannot change `|S(theta)|`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{star, CxSeq};

/// Golden-section refinement stops once the bracket is this narrow in theta.
pub const REFINE_TOL: f64 = 1e-10;

/// Number of grid peaks that get refined.
const REFINE_PEAKS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeConfig {
    /// The grid has `oversampling * n` points `theta_t = t / (L n)`.
    pub oversampling: usize,
    /// Polish the largest grid peaks with a golden-section search.
    pub refine: bool,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        Self { oversampling: 64, refine: true }
    }
}

impl EnvelopeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.oversampling < 2 {
            return Err(Error::Config(format!(
                "oversampling must be at least 2, got {}",
                self.oversampling
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PmeprEstimate {
    /// Largest `|S(theta)|^2 / n` found.
    pub grid_max: f64,
    pub argmax_theta: f64,
    pub oversampling: usize,
    pub refined: bool,
}

/// `|sum_i A_i e^{2 pi i theta i}|^2`.
pub fn envelope_power(a: &CxSeq, theta: f64) -> f64 {
    envelope_power_of(a.values(), theta)
}

fn envelope_power_of(values: &[Complex64], theta: f64) -> f64 {
    let z = Complex64::from_polar(1.0, TAU * theta);
    values.iter().rev().fold(Complex64::default(), |s, v| s * z + v).norm_sqr()
}

/// Upper bound on `true max / grid max` for length `n` at oversampling `l`.
///
/// `|S|^2` is a trigonometric polynomial of degree `n - 1`, so Bernstein's
/// inequality limits how far it can rise between grid points.
pub fn grid_gain_bound(n: usize, l: usize) -> f64 {
    1.0 / (1.0 - std::f64::consts::PI * n.saturating_sub(1) as f64 / (l * n) as f64)
}

/// Reusable PMEPR estimator for sequences of one fixed length.
///
/// Holds the FFT plan and scratch space, so one instance per thread is the
/// intended use in sweeps.
pub struct PmeprEvaluator {
    n: usize,
    cfg: EnvelopeConfig,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
    power: Vec<f64>,
    gain: f64,
}

impl PmeprEvaluator {
    pub fn new(n: usize, cfg: EnvelopeConfig) -> Result<Self> {
        cfg.validate()?;
        if n == 0 {
            return Err(Error::Empty("sequence"));
        }
        let size = n * cfg.oversampling;
        let fft = FftPlanner::<f64>::new().plan_fft_inverse(size);
        let scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        let gain = grid_gain_bound(n, cfg.oversampling);
        Ok(Self { n, cfg, fft, buf: vec![Complex64::default(); size], scratch, power: Vec::with_capacity(size), gain })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn config(&self) -> EnvelopeConfig {
        self.cfg
    }

    pub fn evaluate(&mut self, a: &CxSeq) -> Result<PmeprEstimate> {
        if a.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: a.len() });
        }
        if !a.is_full_support() {
            return Err(Error::NotPolyphase);
        }
        Ok(self.evaluate_values(a.values()))
    }

    /// Same as [`PmeprEvaluator::evaluate`] without the support check.
    pub fn evaluate_values(&mut self, values: &[Complex64]) -> PmeprEstimate {
        self.evaluate_values_above(values, f64::NEG_INFINITY)
    }

    /// Like [`PmeprEvaluator::evaluate_values`], but refinement is skipped
    /// when the grid maximum shows the PMEPR cannot exceed `floor`.
    pub fn evaluate_values_above(&mut self, values: &[Complex64], floor: f64) -> PmeprEstimate {
        let n = self.n;
        let size = self.buf.len();
        self.buf.fill(Complex64::default());
        self.buf[..n].copy_from_slice(values);
        // The unnormalized inverse DFT evaluates S at theta = t / size.
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);

        self.power.clear();
        self.power.extend(self.buf.iter().map(|z| z.norm_sqr()));
        let power = &self.power;
        let (mut best_t, mut best) = (0usize, power[0]);
        for (t, &p) in power.iter().enumerate() {
            if p > best {
                best = p;
                best_t = t;
            }
        }
        let mut best_theta = best_t as f64 / size as f64;

        let refine = self.cfg.refine && best * self.gain / n as f64 > floor;
        if refine {
            let h = 1.0 / size as f64;
            for t in top_local_maxima(power, REFINE_PEAKS) {
                let centre = t as f64 / size as f64;
                let (theta, p) = golden_max(|th| envelope_power_of(values, th), centre - h, centre + h);
                // Gains at the rounding level keep the grid point.
                if p > best * (1.0 + 1e-12) {
                    best = p;
                    best_theta = theta.rem_euclid(1.0);
                }
            }
        }
        PmeprEstimate {
            grid_max: best / n as f64,
            argmax_theta: best_theta,
            oversampling: self.cfg.oversampling,
            refined: refine,
        }
    }
}

/// Indices of the `k` largest circular local maxima, largest first.
fn top_local_maxima(power: &[f64], k: usize) -> Vec<usize> {
    let n = power.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&t| {
            let prev = power[(t + n - 1) % n];
            let next = power[(t + 1) % n];
            power[t] >= prev && power[t] >= next
        })
        .collect();
    peaks.sort_by(|&a, &b| power[b].total_cmp(&power[a]).then(a.cmp(&b)));
    peaks.truncate(k);
    peaks
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > REFINE_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `PMEPR(A) = sup |S(A)(theta)|^2 / n`, estimated on the oversampled grid.
pub fn pmepr(a: &CxSeq, cfg: EnvelopeConfig) -> Result<PmeprEstimate> {
    PmeprEvaluator::new(a.len(), cfg)?.evaluate(a)
}

/// `(A * B) / n`, an upper bound on the PMEPR of both sequences.
pub fn pmepr_upper_bound_star(a: &CxSeq, b: &CxSeq) -> Result<f64> {
    if !a.is_full_support() || !b.is_full_support() {
        return Err(Error::NotPolyphase);
    }
    Ok(star(a, b)? / a.len() as f64)
}

/// Wire form of a PMEPR estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PmeprReport {
    pub n: usize,
    #[serde(rename = "L")]
    pub oversampling: usize,
    pub grid_max: f64,
    pub theta: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub star_bound: Option<f64>,
}

impl PmeprReport {
    pub fn new(n: usize, est: &PmeprEstimate, star_bound: Option<f64>) -> Self {
        Self {
            n,
            oversampling: est.oversampling,
            grid_max: est.grid_max,
            theta: est.argmax_theta,
            star_bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Gbf, Modulus};
    use crate::sequence::psi;

    fn z(q: u32) -> Modulus {
        Modulus::new(q).unwrap()
    }

    #[test]
    fn envelope_examples() {
        assert!((envelope_power(&CxSeq::all_ones(4), 0.0) - 16.0).abs() < 1e-12);
        // x0x1 + x1x2 over Z_2 sums to 6 - 2 at theta = 0.
        let f = Gbf::from_terms(z(2), 3, &[(0b011, 1), (0b110, 1)]).unwrap();
        let t = f.truth_table();
        let oracle: i32 = t.values().iter().map(|&v| if v == 0 { 1 } else { -1 }).sum();
        assert_eq!(oracle, 4);
        assert!((envelope_power(&psi(&f), 0.0) - (oracle * oracle) as f64).abs() < 1e-12);
    }

    #[test]
    fn mean_power_is_n() {
        let q = z(8);
        let a = CxSeq::from_phases(q, &[0, 5, 3, 3, 1, 7, 2, 6, 4]);
        let steps = 64 * a.len();
        let mean: f64 =
            (0..steps).map(|t| envelope_power(&a, t as f64 / steps as f64)).sum::<f64>() / steps as f64;
        assert!((mean - a.len() as f64).abs() < 0.01 * a.len() as f64);
    }

    #[test]
    fn pmepr_examples() {
        let est = pmepr(&CxSeq::all_ones(4), EnvelopeConfig::default()).unwrap();
        assert!((est.grid_max - 4.0).abs() < 1e-12);
        assert_eq!(est.argmax_theta, 0.0);

        let est = pmepr(&CxSeq::from_phases(z(4), &[3]), EnvelopeConfig::default()).unwrap();
        assert!((est.grid_max - 1.0).abs() < 1e-12);

        let f = Gbf::from_terms(z(2), 3, &[(0b011, 1), (0b110, 1)]).unwrap();
        let est = pmepr(&psi(&f), EnvelopeConfig::default()).unwrap();
        assert!(est.grid_max <= 2.0 + 1e-6);
    }

    #[test]
    fn pmepr_rejects_unsupported_entries() {
        let a = CxSeq::general(vec![Complex64::new(1.0, 0.0), Complex64::default()]);
        assert_eq!(pmepr(&a, EnvelopeConfig::default()), Err(Error::NotPolyphase));
        let cfg = EnvelopeConfig { oversampling: 1, refine: false };
        assert!(pmepr(&CxSeq::all_ones(2), cfg).is_err());
    }

    #[test]
    fn star_bounds() {
        let pm = |s: &[f64]| CxSeq::polyphase(s.iter().map(|&v| Complex64::new(v, 0.0)).collect()).unwrap();
        let (a, b) = (pm(&[1., 1., 1., -1.]), pm(&[1., 1., -1., 1.]));
        assert!((pmepr_upper_bound_star(&a, &b).unwrap() - 2.0).abs() < 1e-12);
        let ones = CxSeq::all_ones(2);
        assert!((pmepr_upper_bound_star(&ones, &ones).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_never_lowers_the_grid_value() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let q = z(8);
        for _ in 0..50 {
            let phases: Vec<u32> = (0..16).map(|_| rng.gen_range(0..8)).collect();
            let a = CxSeq::from_phases(q, &phases);
            let plain = pmepr(&a, EnvelopeConfig { oversampling: 64, refine: false }).unwrap();
            let fine = pmepr(&a, EnvelopeConfig::default()).unwrap();
            assert!(fine.grid_max >= plain.grid_max);
            assert!(fine.grid_max - plain.grid_max < 1e-2);
            let coarse = pmepr(&a, EnvelopeConfig { oversampling: 128, refine: false }).unwrap();
            assert!(coarse.grid_max >= plain.grid_max - 1e-12);
            assert!(plain.grid_max >= envelope_power(&a, 0.0) / 16.0 - 1e-12);
        }
    }

    #[test]
    fn report_json() {
        let est = pmepr(&CxSeq::all_ones(8), EnvelopeConfig::default()).unwrap();
        let r = PmeprReport::new(8, &est, None);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"n":8,"L":64,"grid_max":8.0,"theta":0.0}"#);
    }

    #[test]
    fn grid_gain_bound_covers_dense_maxima() {
        let q = z(8);
        for (seed, m) in [(1u32, 2usize), (5, 3), (9, 4)] {
            let f = Gbf::new(q, m, (0..1u32 << m).map(|i| (i * 7 + seed) * (i + 3) % 8).collect()).unwrap();
            let a = psi(&f);
            let n = a.len();
            let coarse = pmepr(&a, EnvelopeConfig { oversampling: 4, refine: false }).unwrap().grid_max;
            let dense = (0..200_000).map(|t| envelope_power(&a, t as f64 / 200_000.0)).fold(0.0, f64::max) / n as f64;
            assert!(dense <= coarse * grid_gain_bound(n, 4) + 1e-9);
            assert!(dense >= coarse - 1e-9);
        }
        assert_eq!(grid_gain_bound(1, 64), 1.0);
    }

    #[test]
    fn skipping_refinement_needs_a_high_floor() {
        let a = psi(&Gbf::from_terms(z(4), 3, &[(0b011, 2), (0b110, 1), (0b001, 3)]).unwrap());
        let mut ev = PmeprEvaluator::new(8, EnvelopeConfig::default()).unwrap();
        let full = ev.evaluate_values(a.values());
        assert!(full.refined);
        assert_eq!(ev.evaluate_values_above(a.values(), 0.0), full);
        let skipped = ev.evaluate_values_above(a.values(), 100.0);
        assert!(!skipped.refined);
        assert!(skipped.grid_max <= full.grid_max);
    }
}