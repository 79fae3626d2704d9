//! Membership predicates for `RM_q(r,m)` and `ZRM_q(r,m)`, exhaustive code
//! enumeration at desk scale, and minimum Lee distance.

use super::gbf::{Gbf, TruthTable};
use super::modulus::Modulus;
use crate::error::{Error, Result};

/// Largest code [`rm_code`] and [`zrm_code`] will materialize.
pub const MAX_CODE_WORDS: u128 = 1 << 22;

/// Largest number of pairwise comparisons [`min_lee_distance`] accepts.
pub const MAX_LEE_PAIRS: u128 = 1 << 20;

/// `psi(f)` lies in `RM_q(r,m)` iff `deg f <= r`.
pub fn rm_membership(t: &TruthTable, r: usize) -> Result<bool> {
    let m = t.m();
    if r > m {
        return Err(Error::InvalidOrder { r, m, reason: "RM requires 0 <= r <= m" });
    }
    Ok(t.to_gbf().degree() <= r)
}

/// `psi(f)` lies in `ZRM_q(r,m)` iff the ANF has order at most `r` and every
/// order-`r` coefficient is even.
pub fn zrm_membership(t: &TruthTable, r: usize) -> Result<bool> {
    let q = t.modulus().q();
    if q < 4 {
        return Err(Error::ZrmModulus(q));
    }
    let m = t.m();
    if r < 2 || r > m {
        return Err(Error::InvalidOrder { r, m, reason: "ZRM requires 1 < r <= m" });
    }
    Ok(gbf_in_zrm(&t.to_gbf(), r))
}

pub(crate) fn gbf_in_zrm(f: &Gbf, r: usize) -> bool {
    f.terms().all(|(mask, c)| {
        let order = mask.count_ones() as usize;
        order < r || (order == r && c % 2 == 0)
    })
}

fn monomials_up_to(m: usize, r: usize) -> Vec<usize> {
    (0..1usize << m).filter(|i| i.count_ones() as usize <= r).collect()
}

fn enumerate(q: Modulus, m: usize, slots: &[(usize, u32)]) -> Result<Vec<TruthTable>> {
    // Each slot is (monomial, step): coefficients range over step * Z_q.
    let choices: Vec<u32> = slots.iter().map(|&(_, step)| q.q() / step).collect();
    let total: u128 = choices.iter().map(|&c| c as u128).product();
    if total > MAX_CODE_WORDS {
        return Err(Error::CapExceeded { requested: total, cap: MAX_CODE_WORDS });
    }
    let mut words = Vec::with_capacity(total as usize);
    let mut digits = vec![0u32; slots.len()];
    for _ in 0..total {
        let mut f = Gbf::zero(q, m);
        for (&(mask, step), &d) in slots.iter().zip(&digits) {
            f.add_term(mask, d * step);
        }
        words.push(f.truth_table());
        for (d, &c) in digits.iter_mut().zip(&choices) {
            *d += 1;
            if *d < c {
                break;
            }
            *d = 0;
        }
    }
    Ok(words)
}

/// Every word of `RM_q(r,m)`.
pub fn rm_code(q: Modulus, r: usize, m: usize) -> Result<Vec<TruthTable>> {
    if r > m {
        return Err(Error::InvalidOrder { r, m, reason: "RM requires 0 <= r <= m" });
    }
    let slots: Vec<_> = monomials_up_to(m, r).into_iter().map(|i| (i, 1)).collect();
    enumerate(q, m, &slots)
}

/// Every word of `ZRM_q(r,m)`.
pub fn zrm_code(q: Modulus, r: usize, m: usize) -> Result<Vec<TruthTable>> {
    if q.q() < 4 {
        return Err(Error::ZrmModulus(q.q()));
    }
    if r < 2 || r > m {
        return Err(Error::InvalidOrder { r, m, reason: "ZRM requires 1 < r <= m" });
    }
    let slots: Vec<_> = monomials_up_to(m, r)
        .into_iter()
        .map(|i| (i, if i.count_ones() as usize == r { 2 } else { 1 }))
        .collect();
    enumerate(q, m, &slots)
}

/// Lee weight of a single residue.
#[inline]
pub fn lee(v: u32, q: u32) -> u32 {
    let v = v % q;
    v.min(q - v)
}

pub fn lee_distance(u: &TruthTable, v: &TruthTable) -> Result<u32> {
    if u.values().len() != v.values().len() {
        return Err(Error::LengthMismatch { expected: u.values().len(), actual: v.values().len() });
    }
    let q = u.modulus();
    if q != v.modulus() {
        return Err(Error::ModulusMismatch { left: q.q(), right: v.modulus().q() });
    }
    Ok(u.values().iter().zip(v.values()).map(|(&a, &b)| lee(q.sub(a, b), q.q())).sum())
}

/// Minimum pairwise Lee distance of an explicitly listed code.
pub fn min_lee_distance(code: &[TruthTable]) -> Result<u32> {
    let first = code.first().ok_or(Error::Empty("code"))?;
    for w in code {
        if w.values().len() != first.values().len() {
            return Err(Error::LengthMismatch {
                expected: first.values().len(),
                actual: w.values().len(),
            });
        }
        if w.modulus() != first.modulus() {
            return Err(Error::ModulusMismatch { left: first.modulus().q(), right: w.modulus().q() });
        }
    }
    let n = code.len() as u128;
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs > MAX_LEE_PAIRS {
        return Err(Error::CapExceeded { requested: pairs, cap: MAX_LEE_PAIRS });
    }
    let mut best: Option<u32> = None;
    for (i, u) in code.iter().enumerate() {
        for v in &code[i + 1..] {
            let d = lee_distance(u, v)?;
            if d > 0 {
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
    }
    // A code of identical words has distance 0.
    Ok(best.unwrap_or(0))
}
