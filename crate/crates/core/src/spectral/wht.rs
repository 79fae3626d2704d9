//! The q-ary Walsh-Hadamard transform `F(w) = sum_x xi^{f(x) + w.x}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Gbf, Modulus};
use crate::error::{Error, Result};

/// Default limit on the number of spectrum entries.
pub const WHT_CAP: u128 = 1 << 24;

/// Spectra with at most this many bits of index are serialized in full.
const FULL_DUMP_BITS: f64 = 20.0;

/// `F(w)` for `w` on the grid `step * Z_{q/step}^m`.
///
/// The entry for `w` lives at the little-endian mixed-radix index
/// `sum (w_a / step) * radix^a` with `radix = q / step`. For the full
/// transform `step = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhtSpectrum {
    q: Modulus,
    m: usize,
    step: u32,
    values: Vec<Complex64>,
}

impl WhtSpectrum {
    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn radix(&self) -> u32 {
        self.q.q() / self.step
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn index_of(&self, w: &[u32]) -> Result<usize> {
        if w.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, actual: w.len() });
        }
        let radix = self.radix() as usize;
        let mut idx = 0usize;
        for &wa in w.iter().rev() {
            let wa = wa % self.q.q();
            if wa % self.step != 0 {
                return Err(Error::NotOnGrid { value: wa, step: self.step });
            }
            idx = idx * radix + (wa / self.step) as usize;
        }
        Ok(idx)
    }

    pub fn point(&self, mut idx: usize) -> Vec<u32> {
        let radix = self.radix() as usize;
        (0..self.m)
            .map(|_| {
                let d = (idx % radix) as u32;
                idx /= radix;
                d * self.step
            })
            .collect()
    }

    pub fn get(&self, w: &[u32]) -> Result<Complex64> {
        Ok(self.values[self.index_of(w)?])
    }

    /// `max_w |F(w)|^2` and the first `w` attaining it.
    pub fn max_power(&self) -> (f64, Vec<u32>) {
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, v) in self.values.iter().enumerate() {
            let p = v.norm_sqr();
            // Ties within rounding keep the lower index.
            if p > best.1 + 1e-9 {
                best = (i, p);
            }
        }
        (best.1, self.point(best.0))
    }

    /// `sum_w |F(w)|^2`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn summary(&self) -> WhtSummary {
        let (max_power, argmax) = self.max_power();
        let bits = self.m as f64 * (self.radix() as f64).log2();
        let values = (bits <= FULL_DUMP_BITS).then(|| self.values.iter().map(|z| [z.re, z.im]).collect());
        WhtSummary { q: self.q.q(), m: self.m, step: self.step, max_power, argmax, values }
    }
}

/// Wire form of a spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhtSummary {
    pub q: u32,
    pub m: usize,
    pub step: u32,
    pub max_power: f64,
    pub argmax: Vec<u32>,
    /// `[re, im]` pairs in index order, omitted for large spectra.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub values: Option<Vec<[f64; 2]>>,
}

pub fn wht(f: &Gbf) -> Result<WhtSpectrum> {
    wht_with_cap(f, WHT_CAP)
}

pub fn wht_with_cap(f: &Gbf, cap: u128) -> Result<WhtSpectrum> {
    wht_on_grid(f, 1, cap)
}

/// The transform restricted to `w in step * Z_{q/step}^m`.
pub fn wht_on_grid(f: &Gbf, step: u32, cap: u128) -> Result<WhtSpectrum> {
    let q = f.modulus();
    if step == 0 || q.q() % step != 0 {
        return Err(Error::DivisorMismatch { p: if step == 0 { 0 } else { q.q() / step }, q: q.q() });
    }
    let m = f.m();
    let radix = (q.q() / step) as usize;
    let entries = (radix as u128).pow(m as u32);
    if entries > cap {
        return Err(Error::CapExceeded { requested: entries, cap });
    }
    let phases = q.phase_table();
    let twiddle: Vec<Complex64> = (0..radix).map(|j| phases[j * step as usize]).collect();

    let mut cur: Vec<Complex64> = f.truth_table().values().iter().map(|&t| phases[t as usize]).collect();
    // Layout before folding variable a: index = x_low + 2^{a+1} * W, where
    // x_low holds bits 0..=a and W the already folded digits a+1..m.
    for a in (0..m).rev() {
        let low = 1usize << a;
        let high = cur.len() / (2 * low);
        let mut next = vec![Complex64::default(); low * radix * high];
        for w_hi in 0..high {
            for xl in 0..low {
                let f0 = cur[xl + 2 * low * w_hi];
                let f1 = cur[xl + low + 2 * low * w_hi];
                for (wa, tw) in twiddle.iter().enumerate() {
                    next[xl + low * (wa + radix * w_hi)] = f0 + tw * f1;
                }
            }
        }
        cur = next;
    }
    Ok(WhtSpectrum { q, m, step, values: cur })
}

/// `(1/2^m) max_{w in (q/p) Z_p^m} |F(w)|^2`.
pub fn papr_p(f: &Gbf, p: u32) -> Result<f64> {
    let q = f.q();
    if p == 0 {
        return Err(Error::UnsupportedP(p));
    }
    if q % p != 0 {
        return Err(Error::DivisorMismatch { p, q });
    }
    let s = wht_on_grid(f, q / p, WHT_CAP)?;
    Ok(s.max_power().0 / (1u64 << f.m()) as f64)
}

/// `(1/2^m) max_w |F(w)|^2`, a value some word of the coset
/// `f + RM_q(1,m)` reaches.
pub fn coset_lower_bound(f: &Gbf) -> Result<f64> {
    coset_lower_bound_with_cap(f, WHT_CAP)
}

pub fn coset_lower_bound_with_cap(f: &Gbf, cap: u128) -> Result<f64> {
    let s = wht_with_cap(f, cap)?;
    Ok(s.max_power().0 / (1u64 << f.m()) as f64)
}

/// Largest `m` accepted by [`covering_radius_check`].
pub const COVERING_MAX_M: usize = 12;

/// For binary `f`, the Hamming distance from `f` to `RM_2(1,m)` and
/// `max_w |F(w)|`, after checking `max |F| = 2^m - 2 d`.
pub fn covering_radius_check(f: &Gbf) -> Result<(u64, f64)> {
    if f.q() != 2 {
        return Err(Error::InvalidModulus(f.q()));
    }
    let m = f.m();
    if m > COVERING_MAX_M {
        return Err(Error::TooManyVariables { m, max: COVERING_MAX_M });
    }
    let n = 1usize << m;
    let words = n.div_ceil(64);
    let mut table = vec![0u64; words];
    for (x, &v) in f.truth_table().values().iter().enumerate() {
        table[x / 64] |= (v as u64) << (x % 64);
    }
    let mut linear = vec![0u64; words];
    let mut dist = n as u64;
    for v in 0..n {
        linear.fill(0);
        for x in 0..n {
            linear[x / 64] |= (((v & x).count_ones() & 1) as u64) << (x % 64);
        }
        let d: u64 = table.iter().zip(&linear).map(|(a, b)| (a ^ b).count_ones() as u64).sum();
        // The complemented word is the same linear part plus the constant 1.
        dist = dist.min(d).min(n as u64 - d);
    }
    let spec = wht(f)?;
    let max_abs = spec.max_power().0.sqrt();
    let expected = n as f64 - 2.0 * dist as f64;
    if (max_abs - expected).abs() > 1e-6 * n as f64 {
        return Err(Error::Verification(format!(
            "max |F(w)| = {max_abs} but 2^m - 2d = {expected}"
        )));
    }
    Ok((dist, max_abs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::psi;
    use crate::spectral::envelope_power;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z(q: u32) -> Modulus {
        Modulus::new(q).unwrap()
    }

    fn random_gbf(rng: &mut ChaCha8Rng, q: u32, m: usize) -> Gbf {
        let anf = (0..1 << m).map(|_| rng.gen_range(0..q)).collect();
        Gbf::new(z(q), m, anf).unwrap()
    }

    /// Direct summation over all `x`.
    fn wht_oracle(f: &Gbf, w: &[u32]) -> Complex64 {
        let q = f.modulus();
        (0..1usize << f.m())
            .map(|x| {
                let dot: u32 = w.iter().enumerate().filter(|(a, _)| x >> a & 1 == 1).map(|(_, &v)| v).sum();
                q.phase((f.evaluate(x) + dot) % q.q())
            })
            .sum()
    }

    #[test]
    fn spec_examples() {
        let f = Gbf::constant(z(8), 0, 3);
        let s = wht(&f).unwrap();
        assert_eq!(s.values(), &[z(8).phase(3)]);

        let s = wht(&Gbf::zero(z(2), 1)).unwrap();
        assert!((s.values()[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(s.values()[1].norm() < 1e-12);

        let f = Gbf::from_terms(z(4), 2, &[(3, 2), (1, 3), (2, 1)]).unwrap();
        let s = wht(&f).unwrap();
        assert!(s.get(&[0, 0]).unwrap().norm() < 1e-12);
        assert!((wht_oracle(&f, &[0, 0])).norm() < 1e-12);
    }

    #[test]
    fn fold_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (q, m) in [(2, 4), (4, 3), (8, 2), (6, 3), (4, 0)] {
            let f = random_gbf(&mut rng, q, m);
            let s = wht(&f).unwrap();
            assert_eq!(s.values().len(), (q as usize).pow(m as u32));
            for i in 0..s.values().len() {
                let w = s.point(i);
                assert_eq!(s.index_of(&w).unwrap(), i);
                assert!((s.values()[i] - wht_oracle(&f, &w)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn restricted_grid_is_a_subset() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let f = random_gbf(&mut rng, 8, 3);
        let full = wht(&f).unwrap();
        let half = wht_on_grid(&f, 2, WHT_CAP).unwrap();
        assert_eq!(half.radix(), 4);
        for i in 0..half.values().len() {
            let w = half.point(i);
            assert!((half.values()[i] - full.get(&w).unwrap()).norm() < 1e-9);
        }
        assert!(matches!(half.index_of(&[1, 0, 0]), Err(Error::NotOnGrid { .. })));
    }

    #[test]
    fn cap_is_enforced() {
        let f = Gbf::zero(z(4), 5);
        assert!(matches!(wht_with_cap(&f, 1000), Err(Error::CapExceeded { requested: 1024, .. })));
        assert!(wht_with_cap(&f, 1024).is_ok());
    }

    #[test]
    fn parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (q, m) in [(2, 6), (4, 4), (8, 3), (16, 2)] {
            let f = random_gbf(&mut rng, q, m);
            let e = wht(&f).unwrap().energy();
            let target = (q as f64).powi(m as i32) * (1u64 << m) as f64;
            assert!((e - target).abs() <= 1e-9 * target);
        }
    }

    #[test]
    fn affine_invariance_of_the_magnitude_multiset() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let sorted = |s: &WhtSpectrum| {
            let mut v: Vec<f64> = s.values().iter().map(|z| z.norm()).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        for _ in 0..5 {
            let f = random_gbf(&mut rng, 4, 3);
            let base = sorted(&wht(&f).unwrap());
            for sigma in crate::perm::all(3) {
                let v: Vec<u32> = (0..3).map(|_| rng.gen_range(0..4)).collect();
                let g = f.permute_vars(&sigma).unwrap().add_affine(&v, rng.gen_range(0..4)).unwrap();
                let other = sorted(&wht(&g).unwrap());
                for (a, b) in base.iter().zip(&other) {
                    assert!((a - b).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn lower_bound_is_constant_on_cosets() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..20 {
            let f = random_gbf(&mut rng, 8, 3);
            let v: Vec<u32> = (0..3).map(|_| rng.gen_range(0..8)).collect();
            let g = f.add_affine(&v, rng.gen_range(0..8)).unwrap();
            let (a, b) = (coset_lower_bound(&f).unwrap(), coset_lower_bound(&g).unwrap());
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn theta_zero_of_an_offset_word_is_the_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let f = random_gbf(&mut rng, 4, 3);
        let s = wht(&f).unwrap();
        for i in 0..s.values().len() {
            let w = s.point(i);
            let g = f.add_affine(&w, 1).unwrap();
            let p = envelope_power(&psi(&g), 0.0);
            assert!((p - s.values()[i].norm_sqr()).abs() < 1e-9);
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(coset_lower_bound(&Gbf::zero(z(2), 2)).unwrap(), 4.0);
        let golay = Gbf::from_terms(z(2), 3, &[(0b011, 1), (0b110, 1)]).unwrap();
        assert!((coset_lower_bound(&golay).unwrap() - 2.0).abs() < 1e-9);
        let f = Gbf::from_terms(z(2), 2, &[(0b11, 1)]).unwrap();
        assert!((coset_lower_bound(&f).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn papr_examples() {
        for p in [1, 2, 4, 8] {
            assert!((papr_p(&Gbf::zero(z(8), 3), p).unwrap() - 8.0).abs() < 1e-9);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let f = random_gbf(&mut rng, 4, 4);
            assert!(papr_p(&f, 2).unwrap() <= papr_p(&f, 4).unwrap() + 1e-9);
        }
        let golay = Gbf::from_terms(z(2), 3, &[(0b011, 1), (0b110, 1)]).unwrap();
        assert!(papr_p(&golay, 2).unwrap() <= 2.0 + 1e-9);
        assert_eq!(papr_p(&golay, 3), Err(Error::DivisorMismatch { p: 3, q: 2 }));
        assert_eq!(papr_p(&golay, 0), Err(Error::UnsupportedP(0)));
    }

    #[test]
    fn covering_radius_examples() {
        assert_eq!(covering_radius_check(&Gbf::zero(z(2), 3)).unwrap(), (0, 8.0));
        let f = Gbf::from_terms(z(2), 3, &[(0b011, 1)]).unwrap();
        let (d, mx) = covering_radius_check(&f).unwrap();
        assert_eq!(d, 2);
        assert!((mx - 4.0).abs() < 1e-9);
        let bent = Gbf::from_terms(z(2), 4, &[(0b0011, 1), (0b1100, 1)]).unwrap();
        let (d, mx) = covering_radius_check(&bent).unwrap();
        assert_eq!(d, 6);
        assert!((mx - 4.0).abs() < 1e-9);
        assert!(covering_radius_check(&Gbf::zero(z(4), 2)).is_err());
        assert!(covering_radius_check(&Gbf::zero(z(2), 13)).is_err());
    }

    #[test]
    fn covering_radius_identity_at_larger_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for m in [7, 9] {
            let f = random_gbf(&mut rng, 2, m);
            covering_radius_check(&f).unwrap();
        }
    }

    #[test]
    fn summary_json() {
        let f = Gbf::zero(z(2), 1);
        let j = serde_json::to_string(&wht(&f).unwrap().summary()).unwrap();
        assert_eq!(j, r#"{"q":2,"m":1,"step":1,"max_power":4.0,"argmax":[0],"values":[[2.0,0.0],[0.0,0.0]]}"#);
        let big = wht(&Gbf::zero(z(4), 11)).unwrap().summary();
        assert!(big.values.is_none());
    }
}
