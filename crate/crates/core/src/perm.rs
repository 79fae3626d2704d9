//! Small permutation helpers shared by the constructions and the search.

use itertools::Itertools;

use crate::error::{Error, Result};

pub fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation { perm: perm.to_vec(), n });
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation { perm: perm.to_vec(), n });
        }
        seen[p] = true;
    }
    Ok(())
}

pub fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn all(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).permutations(n)
}

/// One permutation per reversal class: those with `pi[0] < pi[n-1]`
/// (every permutation when `n < 2`).
pub fn reversal_classes(n: usize) -> impl Iterator<Item = Vec<usize>> {
    all(n).filter(|p| p.len() < 2 || p[0] < p[p.len() - 1])
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
