//! Aperiodic correlations and the `star` figure of merit
//! `A * B = sum_{l=1-n}^{n-1} |AC_A(l) + AC_B(l)|`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::cxseq::CxSeq;
use crate::error::Result;

/// Sequences longer than this use the FFT autocorrelation.
pub const DIRECT_MAX_LEN: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `C(A,B)(l)`: `sum_i A_{i+l} conj(B_i)` for `0 <= l < n`, the mirrored sum
/// for `-n < l < 0`, and zero otherwise.
pub fn aperiodic_cross(a: &CxSeq, b: &CxSeq, shift: i64) -> Result<Complex64> {
    a.check_len(b)?;
    let n = a.len() as i64;
    if shift <= -n || shift >= n {
        return Ok(ZERO);
    }
    let (av, bv) = (a.values(), b.values());
    let s = if shift >= 0 {
        let l = shift as usize;
        (0..a.len() - l).map(|i| av[i + l] * bv[i].conj()).sum()
    } else {
        let l = (-shift) as usize;
        (0..a.len() - l).map(|i| av[i] * bv[i + l].conj()).sum()
    };
    Ok(s)
}

/// Autocorrelation at shifts `0..n`; negative shifts are the conjugates.
pub fn autocorrelation(a: &CxSeq) -> Vec<Complex64> {
    let n = a.len();
    let s = a.support_size();
    if s * s <= n {
        autocorrelation_sparse(a)
    } else if n <= DIRECT_MAX_LEN {
        autocorrelation_direct(a)
    } else {
        autocorrelation_fft(a)
    }
}

/// Direct `O(n^2)` summation.
pub fn autocorrelation_direct(a: &CxSeq) -> Vec<Complex64> {
    let v = a.values();
    let n = v.len();
    (0..n).map(|l| (0..n - l).map(|i| v[i + l] * v[i].conj()).sum()).collect()
}

/// Sum over pairs of support positions; `O(|support|^2)`.
pub fn autocorrelation_sparse(a: &CxSeq) -> Vec<Complex64> {
    let v = a.values();
    let pos = a.support_positions();
    let mut out = vec![ZERO; v.len()];
    for (k, &j) in pos.iter().enumerate() {
        for &i in &pos[k..] {
            out[i - j] += v[i] * v[j].conj();
        }
    }
    out
}

/// Inverse transform of the zero-padded power spectrum.
pub fn autocorrelation_fft(a: &CxSeq) -> Vec<Complex64> {
    let n = a.len();
    if n == 0 {
        return vec![];
    }
    let size = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut buf = vec![ZERO; size];
    buf[..n].copy_from_slice(a.values());
    fwd.process(&mut buf);
    for x in buf.iter_mut() {
        *x = Complex64::new(x.norm_sqr(), 0.0);
    }
    inv.process(&mut buf);
    let scale = 1.0 / size as f64;
    buf[..n].iter().map(|x| x * scale).collect()
}

/// The `star` operator.
pub fn star(a: &CxSeq, b: &CxSeq) -> Result<f64> {
    a.check_len(b)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let ra = autocorrelation(a);
    let rb = autocorrelation(b);
    Ok(star_from_autocorrelations(&ra, &rb))
}

/// `|r_a(0) + r_b(0)| + 2 sum_{l>=1} |r_a(l) + r_b(l)|`, using
/// `AC(-l) = conj(AC(l))`.
pub fn star_from_autocorrelations(ra: &[Complex64], rb: &[Complex64]) -> f64 {
    let zero = (ra[0] + rb[0]).norm();
    let rest: f64 = ra[1..].iter().zip(&rb[1..]).map(|(x, y)| (x + y).norm()).sum();
    zero + 2.0 * rest
}

/// `A * B == 2n` within `tol`, for polyphase `A, B` of length `n`.
pub fn is_complementary(a: &CxSeq, b: &CxSeq, tol: f64) -> Result<bool> {
    Ok((star(a, b)? - 2.0 * a.len() as f64).abs() <= tol)
}
