//! Coset representatives `f` of `RM_q(1,m)` built from a kernel, and the
//! words of `f + RM_q(1,m)`.

use std::collections::BTreeMap;
use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::kernel::{KernelJson, KernelPair};
use crate::algebra::codes::gbf_in_zrm;
use crate::algebra::{Gbf, Modulus};
use crate::error::{Error, Result};
use crate::perm::{self, check_permutation};
use crate::sequence::CxSeq;

/// Most words an exhaustive coset enumeration will produce.
pub const MAX_EXHAUSTIVE_WORDS: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Golay,
    AlphaBeta,
    Cubic,
    Custom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Golay => "golay",
            Family::AlphaBeta => "alpha-beta",
            Family::Cubic => "cubic",
            Family::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CosetRep {
    pub kernel: KernelPair,
    pub m: usize,
    pub pi: Vec<usize>,
    pub gbf: Gbf,
    /// `Phi(a) * Phi(b) / 2^k`.
    pub upper_bound: f64,
    /// Every word of the coset lies in `RM_q(degree, m)`.
    pub degree: usize,
    /// The coset lies in `ZRM_q(degree, m)`.
    pub zrm: bool,
    pub family: Family,
}

/// `f = (q/2) sum_{a=k}^{m-2} x_{pi(a)} x_{pi(a+1)}
///   + a(x_{pi(0..k)}) (1 - x_{pi(k)}) + b(x_{pi(0..k)}) x_{pi(k)}`.
pub fn construct_coset_rep(kernel: &KernelPair, m: usize, pi: &[usize]) -> Result<CosetRep> {
    let k = kernel.k();
    if m <= k {
        return Err(Error::InvalidOrder { r: k, m, reason: "a coset needs m > k" });
    }
    check_permutation(pi, m)?;
    let q = kernel.modulus();
    let a = kernel.a().substitute(&pi[..k], m)?;
    let b = kernel.b().substitute(&pi[..k], m)?;
    let mut f = a.mul_not_var(pi[k]).try_add(&b.mul_var(pi[k]))?;
    for w in pi[k..].windows(2) {
        f.add_term(1 << w[0] | 1 << w[1], q.half());
    }

    let diff = kernel.b().try_sub(kernel.a())?;
    let mut degree = (diff.degree() + 1).max(kernel.a().degree());
    if m > k + 1 {
        degree = degree.max(2);
    }
    let zrm = q.q() >= 4 && degree >= 2 && gbf_in_zrm(&f, degree);
    Ok(CosetRep {
        kernel: kernel.clone(),
        m,
        pi: pi.to_vec(),
        gbf: f,
        upper_bound: kernel.upper_bound(),
        degree,
        zrm,
        family: Family::Custom,
    })
}

impl CosetRep {
    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn q(&self) -> u32 {
        self.gbf.q()
    }

    pub fn k(&self) -> usize {
        self.kernel.k()
    }

    /// The word `Psi(f + (q/2) x_{pi(m-1)})` paired with `Psi(f)`.
    pub fn companion(&self) -> Gbf {
        let mut g = self.gbf.clone();
        g.add_term(1 << self.pi[self.m - 1], self.gbf.modulus().half());
        g
    }

    pub fn to_json(&self) -> CosetRepJson {
        CosetRepJson {
            family: self.family,
            q: self.q(),
            m: self.m,
            k: self.k(),
            pi: self.pi.clone(),
            kernel: self.kernel.to_json(),
            anf: self.gbf.to_json().anf,
            upper_bound: self.upper_bound,
            degree: self.degree,
            zrm: self.zrm,
        }
    }

    /// Rebuilds the representative from its kernel and permutation and checks
    /// the stored ANF against it.
    pub fn from_json(j: &CosetRepJson) -> Result<Self> {
        let kernel = KernelPair::from_json(&j.kernel)?;
        let rep = construct_coset_rep(&kernel, j.m, &j.pi)?.with_family(j.family);
        if rep.gbf.to_json().anf != j.anf {
            return Err(Error::Verification("stored ANF differs from the kernel construction".into()));
        }
        Ok(rep)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetRepJson {
    pub family: Family,
    pub q: u32,
    pub m: usize,
    pub k: usize,
    pub pi: Vec<usize>,
    pub kernel: KernelJson,
    pub anf: BTreeMap<String, u32>,
    pub upper_bound: f64,
    pub degree: usize,
    pub zrm: bool,
}

/// Random access to the `q^{m+1}` words `Psi(f + sum w_a x_a + w)`.
///
/// Word index `i` has little-endian base-`q` digits `(w, w_0, ..., w_{m-1})`.
#[derive(Clone, Debug)]
pub struct CosetWords {
    q: Modulus,
    m: usize,
    base: Vec<u32>,
}

impl CosetWords {
    pub fn new(f: &Gbf) -> Self {
        Self { q: f.modulus(), m: f.m(), base: f.truth_table().into_values() }
    }

    pub fn size(&self) -> u128 {
        (self.q.q() as u128).pow(self.m as u32 + 1)
    }

    pub fn word_len(&self) -> usize {
        self.base.len()
    }

    /// `(w_0..w_{m-1}, w)` for a word index.
    pub fn offsets(&self, mut idx: u128) -> (Vec<u32>, u32) {
        let q = self.q.q() as u128;
        let w = (idx % q) as u32;
        idx /= q;
        let lin = (0..self.m)
            .map(|_| {
                let d = (idx % q) as u32;
                idx /= q;
                d
            })
            .collect();
        (lin, w)
    }

    /// Phase exponents of word `idx` written into `out`.
    pub fn phases_into(&self, idx: u128, out: &mut [u32]) {
        let (lin, w) = self.offsets(idx);
        let q = self.q;
        // Affine part at x from x with its lowest set bit cleared.
        out[0] = w;
        for x in 1..self.base.len() {
            out[x] = q.add(out[x & (x - 1)], lin[x.trailing_zeros() as usize]);
        }
        for (o, &b) in out.iter_mut().zip(&self.base) {
            *o = q.add(*o, b);
        }
    }

    pub fn phases(&self, idx: u128) -> Vec<u32> {
        let mut out = vec![0; self.base.len()];
        self.phases_into(idx, &mut out);
        out
    }

    pub fn word(&self, idx: u128) -> CxSeq {
        CxSeq::from_phases(self.q, &self.phases(idx))
    }
}

/// How a coset is traversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum SweepMode {
    Exhaustive,
    /// One uniformly drawn word from each of `n` equal strata of the index
    /// range.
    Sample { n: u64, seed: u64 },
}

/// Word indices visited by `mode`, in increasing order.
pub fn coset_indices(size: u128, mode: SweepMode) -> Result<Vec<u128>> {
    match mode {
        SweepMode::Exhaustive => {
            if size > MAX_EXHAUSTIVE_WORDS {
                return Err(Error::CapExceeded { requested: size, cap: MAX_EXHAUSTIVE_WORDS });
            }
            Ok((0..size).collect())
        }
        SweepMode::Sample { n, seed } => {
            let n = n as u128;
            if n == 0 {
                return Err(Error::Config("sample size must be positive".into()));
            }
            if n > MAX_EXHAUSTIVE_WORDS {
                return Err(Error::CapExceeded { requested: n, cap: MAX_EXHAUSTIVE_WORDS });
            }
            if n >= size {
                return Ok((0..size).collect());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let stride = size / n;
            Ok((0..n)
                .map(|i| {
                    let lo = i * stride;
                    let hi = if i + 1 == n { size } else { lo + stride };
                    rng.gen_range(lo..hi)
                })
                .collect())
        }
    }
}

/// The words of `rep.gbf + RM_q(1,m)` selected by `mode`.
pub fn enumerate_coset(rep: &CosetRep, mode: SweepMode) -> Result<impl Iterator<Item = CxSeq>> {
    let words = CosetWords::new(&rep.gbf);
    let idx = coset_indices(words.size(), mode)?;
    Ok(idx.into_iter().map(move |i| words.word(i)))
}

/// The `m!/2` Golay cosets `(q/2) sum x_{pi(i)} x_{pi(i+1)}`, one per
/// permutation with `pi(0) < pi(m-1)`.
pub fn davis_jedwab_family(q: Modulus, m: usize) -> Result<Vec<CosetRep>> {
    if m < 2 {
        return Err(Error::InvalidOrder { r: 0, m, reason: "the Golay family needs m >= 2" });
    }
    let kernel = KernelPair::trivial(q);
    perm::reversal_classes(m)
        .map(|pi| Ok(construct_coset_rep(&kernel, m, &pi)?.with_family(Family::Golay)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaBetaMember {
    pub alpha: u32,
    pub beta: u32,
    pub rep: CosetRep,
}

/// Values `(q/p) Z_p`.
pub fn grid_values(q: Modulus, p: u32) -> Result<Vec<u32>> {
    if !matches!(p, 2 | 4 | 8) {
        return Err(Error::UnsupportedP(p));
    }
    if q.q() % p != 0 {
        return Err(Error::DivisorMismatch { p, q: q.q() });
    }
    let step = q.q() / p;
    Ok((0..p).map(|i| i * step).collect())
}

/// Cosets from the `alpha/beta` kernels with `alpha, beta in (q/p) Z_p`,
/// one per reversal class of permutations.
///
/// `alpha = beta = q/2` reproduces the representatives of `alpha = beta = 0`
/// and is left out, so the family has `(p^2 - 1) m!/2` members. Distinct
/// members can still share an ANF; see [`distinct_anfs`].
pub fn alpha_beta_family(q: Modulus, p: u32, m: usize) -> Result<Vec<AlphaBetaMember>> {
    let values = grid_values(q, p)?;
    if m <= 2 {
        return Err(Error::InvalidOrder { r: 2, m, reason: "the alpha/beta family needs m > 2" });
    }
    let h = q.half();
    let perms: Vec<Vec<usize>> = perm::reversal_classes(m).collect();
    let mut out = Vec::with_capacity(values.len() * values.len() * perms.len());
    for &alpha in &values {
        for &beta in &values {
            if alpha == h && beta == h {
                continue;
            }
            let kernel = KernelPair::alpha_beta(q, alpha, beta);
            for pi in &perms {
                let rep = construct_coset_rep(&kernel, m, pi)?.with_family(Family::AlphaBeta);
                out.push(AlphaBetaMember { alpha, beta, rep });
            }
        }
    }
    Ok(out)
}

/// Cosets from one kernel over all `m!` permutations, keeping the first
/// permutation of each distinct representative.
pub fn kernel_family(kernel: &KernelPair, m: usize, family: Family) -> Result<Vec<CosetRep>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for pi in perm::all(m) {
        let rep = construct_coset_rep(kernel, m, &pi)?.with_family(family);
        if seen.insert(rep.gbf.anf().to_vec()) {
            out.push(rep);
        }
    }
    Ok(out)
}

/// Number of distinct representative functions among `reps`.
pub fn distinct_anfs<'a>(reps: impl IntoIterator<Item = &'a CosetRep>) -> usize {
    reps.into_iter().map(|r| r.gbf.anf().to_vec()).collect::<HashSet<_>>().len()
}
