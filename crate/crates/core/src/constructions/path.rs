//! Near-complementary pairs of length `2^m` grown from a kernel along a path
//! of the remaining variables.

use serde::{Deserialize, Serialize};

use super::kernel::KernelPair;
use crate::algebra::Gbf;
use crate::error::{Error, Result};
use crate::perm::check_permutation;

/// Placement of the kernel inside `m` variables.
///
/// The path variables are `J = {0..s} + {m-t..m}`; the kernel occupies the
/// rest. `pi` orders the path, `weights[a]` is the linear coefficient of the
/// `a`-th path variable and `constant` is added at the end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSpec {
    pub m: usize,
    pub s: usize,
    pub t: usize,
    pub pi: Vec<usize>,
    pub weights: Vec<u32>,
    #[serde(default)]
    pub constant: u32,
}

impl PathSpec {
    /// Identity order, zero weights.
    pub fn plain(m: usize, s: usize, t: usize) -> Self {
        let n = s + t;
        Self { m, s, t, pi: (0..n).collect(), weights: vec![0; n], constant: 0 }
    }

    pub fn k(&self) -> usize {
        self.m - self.s - self.t
    }

    /// `j_0 < ... < j_{m-k-1}`.
    pub fn j_indices(&self) -> Vec<usize> {
        (0..self.s).chain(self.m - self.t..self.m).collect()
    }

    /// `i_0 < ... < i_{k-1}`.
    pub fn i_indices(&self) -> Vec<usize> {
        (self.s..self.m - self.t).collect()
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        if self.m <= k {
            return Err(Error::InvalidOrder { r: k, m: self.m, reason: "the path needs m > k" });
        }
        if self.s + self.t + k != self.m {
            return Err(Error::InvalidIndices(format!(
                "s + t = {} but m - k = {}",
                self.s + self.t,
                self.m - k
            )));
        }
        check_permutation(&self.pi, self.s + self.t)?;
        if self.weights.len() != self.s + self.t {
            return Err(Error::LengthMismatch { expected: self.s + self.t, actual: self.weights.len() });
        }
        Ok(())
    }
}

/// `(f, f + (q/2) x_{j_{pi(m-k-1)}})` with `J` split as prefix/suffix.
pub fn construct_path(kernel: &KernelPair, spec: &PathSpec) -> Result<(Gbf, Gbf)> {
    spec.validate(kernel.k())?;
    construct_path_on(kernel, spec.m, &spec.j_indices(), &spec.pi, &spec.weights, spec.constant)
}

/// The same construction for an arbitrary set `J` of path variables, given
/// in any order; the kernel takes the remaining variables in increasing order.
pub fn construct_path_on(
    kernel: &KernelPair,
    m: usize,
    j: &[usize],
    pi: &[usize],
    weights: &[u32],
    constant: u32,
) -> Result<(Gbf, Gbf)> {
    let k = kernel.k();
    if m <= k || j.len() != m - k {
        return Err(Error::InvalidIndices(format!("{} path variables for m={m}, k={k}", j.len())));
    }
    check_permutation(pi, j.len())?;
    if weights.len() != j.len() {
        return Err(Error::LengthMismatch { expected: j.len(), actual: weights.len() });
    }
    let mut used = vec![false; m];
    for &v in j {
        if v >= m || used[v] {
            return Err(Error::InvalidIndices(format!("path variables {j:?} not distinct in 0..{m}")));
        }
        used[v] = true;
    }
    let i: Vec<usize> = (0..m).filter(|&v| !used[v]).collect();
    let q = kernel.modulus();

    let mut c = kernel.a().substitute(&i, m)?;
    let mut d = kernel.b().substitute(&i, m)?;
    for (mu, &p) in pi.iter().enumerate() {
        let x = j[p];
        let mut shifted = d;
        shifted.add_term(0, weights[mu]);
        c = c.mul_not_var(x).try_add(&shifted.mul_var(x))?;
        d = c.clone();
        d.add_term(1 << x, q.half());
    }
    c.add_term(0, constant);
    d.add_term(0, constant);
    Ok((c, d))
}
