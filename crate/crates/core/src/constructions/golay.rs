//! Rudin-Shapiro combination and Golay's concatenation and interleaving.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequence::CxSeq;

/// `(A + B, A - B)`; the star of the result is twice that of the input.
pub fn rs_combine(a: &CxSeq, b: &CxSeq) -> Result<(CxSeq, CxSeq)> {
    Ok((a.try_add(b)?, a.try_sub(b)?))
}

fn require_pair(a: &CxSeq, b: &CxSeq) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), actual: b.len() });
    }
    if !a.is_full_support() || !b.is_full_support() {
        return Err(Error::NotPolyphase);
    }
    Ok(())
}

/// `((A | B), (A | -B))`.
pub fn golay_concatenate(a: &CxSeq, b: &CxSeq) -> Result<(CxSeq, CxSeq)> {
    require_pair(a, b)?;
    Ok((a.concat(b), a.concat(&b.neg())))
}

/// `A_[x0=0] +- B_[x0=1]`: the entries of `A` and `+-B` alternate.
pub fn golay_interleave(a: &CxSeq, b: &CxSeq) -> Result<(CxSeq, CxSeq)> {
    require_pair(a, b)?;
    let zip = |sign: f64| -> Vec<Complex64> {
        a.values().iter().zip(b.values()).flat_map(|(x, y)| [*x, y * sign]).collect()
    };
    Ok((CxSeq::polyphase(zip(1.0))?, CxSeq::polyphase(zip(-1.0))?))
}
