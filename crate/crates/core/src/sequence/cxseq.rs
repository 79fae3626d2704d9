use std::fmt::Write as _;

use num_complex::Complex64;

use crate::algebra::{Gbf, Modulus};
use crate::error::{Error, Result};

/// Entries with magnitude below this are treated as zero.
pub const SUPPORT_TOL: f64 = 1e-12;

/// A finite complex sequence with an explicit support mask.
///
/// Sequences built by [`CxSeq::polyphase`] or [`CxSeq::with_support`] are
/// unimodular on their support and zero elsewhere. [`CxSeq::general`] admits
/// arbitrary values (sums of sequences, for instance); the PMEPR bound
/// theorems only speak about the unimodular case.
#[derive(Clone, Debug, PartialEq)]
pub struct CxSeq {
    values: Vec<Complex64>,
    support: Vec<bool>,
}

impl CxSeq {
    /// A fully supported sequence; every value must be unimodular.
    pub fn polyphase(values: Vec<Complex64>) -> Result<Self> {
        let support = vec![true; values.len()];
        Self::with_support(values, support)
    }

    pub fn with_support(values: Vec<Complex64>, support: Vec<bool>) -> Result<Self> {
        if values.len() != support.len() {
            return Err(Error::LengthMismatch { expected: values.len(), actual: support.len() });
        }
        for (index, (v, &s)) in values.iter().zip(&support).enumerate() {
            let ok = if s { (v.norm() - 1.0).abs() <= SUPPORT_TOL } else { v.norm() <= SUPPORT_TOL };
            if !ok {
                return Err(Error::SupportViolation { index });
            }
        }
        Ok(Self { values, support })
    }

    /// Arbitrary complex values; the support is the set of nonzero entries.
    pub fn general(values: Vec<Complex64>) -> Self {
        let support = values.iter().map(|v| v.norm() > SUPPORT_TOL).collect();
        Self { values, support }
    }

    /// `(xi^{t_0}, ..., xi^{t_{n-1}})`.
    pub fn from_phases(q: Modulus, phases: &[u32]) -> Self {
        Self {
            values: phases.iter().map(|&t| q.phase(t)).collect(),
            support: vec![true; phases.len()],
        }
    }

    /// Sparse polyphase sequence of length `n` with `xi^t` at each listed position.
    pub fn from_sparse_phases(q: Modulus, n: usize, entries: &[(usize, u32)]) -> Result<Self> {
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        let mut support = vec![false; n];
        for &(pos, t) in entries {
            if pos >= n || support[pos] {
                return Err(Error::InvalidIndices(format!("position {pos} repeated or out of range")));
            }
            values[pos] = q.phase(t);
            support[pos] = true;
        }
        Ok(Self { values, support })
    }

    pub fn all_ones(n: usize) -> Self {
        Self { values: vec![Complex64::new(1.0, 0.0); n], support: vec![true; n] }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn support_size(&self) -> usize {
        self.support.iter().filter(|&&s| s).count()
    }

    pub fn is_full_support(&self) -> bool {
        self.support.iter().all(|&s| s)
    }

    /// Full support with every entry on the unit circle.
    pub fn is_polyphase(&self) -> bool {
        self.is_full_support() && self.values.iter().all(|v| (v.norm() - 1.0).abs() <= 1e-9)
    }

    pub fn neg(&self) -> Self {
        Self { values: self.values.iter().map(|v| -v).collect(), support: self.support.clone() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::general(self.values.iter().map(|v| v * c).collect())
    }

    pub fn try_add(&self, other: &CxSeq) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self::general(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect()))
    }

    pub fn try_sub(&self, other: &CxSeq) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self::general(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect()))
    }

    /// `(self | other)`.
    pub fn concat(&self, other: &CxSeq) -> Self {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        let mut support = self.support.clone();
        support.extend_from_slice(&other.support);
        Self { values, support }
    }

    pub(crate) fn check_len(&self, other: &CxSeq) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: other.len() });
        }
        Ok(())
    }

    /// Positions of the support, ascending.
    pub fn support_positions(&self) -> Vec<usize> {
        self.support.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect()
    }

    /// Comma-separated text: `t` for `xi^t`, `.` for an unsupported zero, and
    /// `re+imj` for anything else.
    pub fn to_text(&self, q: Modulus) -> String {
        let mut out = String::new();
        for (i, (v, &s)) in self.values.iter().zip(&self.support).enumerate() {
            if i > 0 {
                out.push(',');
            }
            if !s {
                out.push('.');
            } else if let Some(t) = q.phase_index(*v, 1e-9) {
                write!(out, "{t}").unwrap();
            } else {
                write!(out, "{}{:+}j", v.re, v.im).unwrap();
            }
        }
        out
    }

    pub fn parse_text(text: &str, q: Modulus) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self { values: vec![], support: vec![] });
        }
        let mut values = Vec::new();
        let mut support = Vec::new();
        for tok in text.split(',').map(str::trim) {
            if tok == "." {
                values.push(Complex64::new(0.0, 0.0));
                support.push(false);
            } else if let Ok(t) = tok.parse::<i64>() {
                values.push(q.phase(q.reduce(t)));
                support.push(true);
            } else {
                let z = parse_complex(tok)?;
                support.push(z.norm() > SUPPORT_TOL);
                values.push(z);
            }
        }
        Ok(Self { values, support })
    }
}

fn parse_complex(tok: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad sequence entry {tok:?}"));
    let body = tok.strip_suffix('j').ok_or_else(bad)?;
    // The imaginary part starts at the last sign that is not an exponent sign
    // and not the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im_text = &body[split..];
    let im: f64 = match im_text {
        "+" => 1.0,
        "-" => -1.0,
        s => s.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// `Psi(f) = (xi^{f_0}, ..., xi^{f_{2^m-1}})`.
pub fn psi(f: &Gbf) -> CxSeq {
    CxSeq::from_phases(f.modulus(), f.truth_table().values())
}
