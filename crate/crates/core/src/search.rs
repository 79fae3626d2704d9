//! Exhaustive search for kernel pairs `(a, b)` on `k` variables with small
//! merit `Phi(a) * Phi(b) / 2^k`.
//!
//! Pairs related by a shared affine offset `(a + L, b + L)` or a simultaneous
//! permutation of the variables have the same merit, so only the
//! lexicographically least pair of each orbit is evaluated. Offsets applied to
//! `a` and `b` independently do not preserve the merit and are not used.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{Gbf, GbfJson, Modulus};
use crate::constructions::KernelPair;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::perm::{all as all_perms, factorial};

/// Largest number of coefficient vectors `q^M` a search may range over.
pub const ITER_CAP: u128 = 1 << 40;

/// Tolerance of the post hoc merit check.
pub const VERIFY_TOL: f64 = 1e-9;

const MAX_BLOCKS: usize = 256;
const BATCH_BLOCKS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub q: u32,
    pub k: usize,
    /// Restrict `a` and `b` to ANFs of at most this degree.
    #[serde(default)]
    pub degree_cap: Option<usize>,
    /// Keep pairs with `merit / 2^k` strictly below this.
    #[serde(default = "default_threshold")]
    pub merit_threshold: f64,
    /// `0` uses every core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_true")]
    pub canonical_pruning: bool,
    /// Stop once this many pairs have been evaluated.
    #[serde(default)]
    pub work_cap: Option<u64>,
}

fn default_threshold() -> f64 {
    4.0
}

fn default_true() -> bool {
    true
}

impl SearchConfig {
    pub fn new(q: u32, k: usize) -> Self {
        Self {
            q,
            k,
            degree_cap: None,
            merit_threshold: default_threshold(),
            workers: 0,
            canonical_pruning: true,
            work_cap: None,
        }
    }

    pub fn validate(&self) -> Result<Modulus> {
        let q = Modulus::new(self.q)?;
        if self.q % 2 != 0 {
            return Err(Error::InvalidModulus(self.q));
        }
        if self.k == 0 || self.k > 6 {
            return Err(Error::Config(format!("k = {} outside 1..=6", self.k)));
        }
        if self.merit_threshold.is_nan() || self.merit_threshold <= 2.0 {
            return Err(Error::Config(format!("threshold {} must exceed 2", self.merit_threshold)));
        }
        if self.degree_cap == Some(0) {
            return Err(Error::Config("degree cap must be at least 1".into()));
        }
        Ok(q)
    }

    /// Number of monomials of degree at most the cap.
    pub fn monomials(&self) -> usize {
        let cap = self.degree_cap.unwrap_or(self.k);
        (0..1usize << self.k).filter(|m| m.count_ones() as usize <= cap).count()
    }

    /// `q^{2 M}` pairs with `M` monomials; `q^{2 * 2^k}` without a cap.
    pub fn space_size(&self) -> u128 {
        (self.q as u128).saturating_pow(2 * self.monomials() as u32)
    }

    /// Approximate number of orbits: the space divided by the group order.
    pub fn projected_orbits(&self) -> u128 {
        let group = (self.q as u128).pow(self.k as u32 + 1) * factorial(self.k) as u128;
        self.space_size().div_ceil(group)
    }

    /// Same searched space and threshold; workers and the work cap may differ.
    pub fn same_search(&self, other: &SearchConfig) -> bool {
        (self.q, self.k, self.degree_cap, self.canonical_pruning) == (other.q, other.k, other.degree_cap, other.canonical_pruning)
            && self.merit_threshold == other.merit_threshold
    }

    pub fn config_hash(&self) -> String {
        hex_digest(&serde_json::to_vec(self).expect("config serializes"))
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// A kept pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoundKernel {
    pub a: GbfJson,
    pub b: GbfJson,
    pub merit: f64,
    pub upper_bound: f64,
}

impl FoundKernel {
    pub fn kernel(&self) -> Result<KernelPair> {
        KernelPair::new(Gbf::from_json(&self.a)?, Gbf::from_json(&self.b)?)
    }
}

/// Search state after a run of whole blocks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config: SearchConfig,
    pub blocks: usize,
    pub next_block: usize,
    pub explored: u64,
    pub visited: u128,
    pub found: Vec<FoundKernel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub found: Vec<FoundKernel>,
    /// Pairs evaluated.
    pub explored: u64,
    /// Pairs skipped as non-canonical.
    pub pruned: u128,
    pub space: u128,
    pub projected_orbits: u128,
    /// The work cap stopped the search early.
    pub partial: bool,
    pub completed_blocks: usize,
    pub blocks: usize,
    /// SHA-256 of the found list and counters.
    pub payload_hash: String,
    pub wall_time: f64,
}

#[derive(Serialize)]
struct HashPayload<'a> {
    found: &'a [FoundKernel],
    explored: u64,
    pruned: u128,
    partial: bool,
}

/// The least pair in the orbit of `pair` under shared affine offsets and
/// simultaneous variable permutations.
pub fn canonicalize(pair: &KernelPair) -> Result<KernelPair> {
    let k = pair.k();
    let mut best: Option<(Gbf, Gbf)> = None;
    for sigma in all_perms(k) {
        let a = pair.a().permute_vars(&sigma)?;
        let b = pair.b().permute_vars(&sigma)?;
        let w: Vec<u32> = (0..k).map(|i| a.coeff(1 << i)).collect();
        let shift = Gbf::affine(a.modulus(), &w, a.coeff(0)).neg();
        let a = a.try_add(&shift)?;
        let b = b.try_add(&shift)?;
        let better = match &best {
            None => true,
            Some((ba, bb)) => (a.anf(), b.anf()) < (ba.anf(), bb.anf()),
        };
        if better {
            best = Some((a, b));
        }
    }
    let (a, b) = best.expect("at least one permutation");
    KernelPair::new(a, b)
}

/// Coefficient layout of the searched space.
struct Space {
    q: Modulus,
    k: usize,
    masks: Vec<usize>,
    /// Positions of the constant and linear monomials.
    affine: Vec<usize>,
    /// Positions of the other monomials.
    free: Vec<usize>,
    /// For each non-identity permutation, the image of every position.
    perms: Vec<Vec<usize>>,
    /// Truth table of each monomial.
    mono: Vec<Vec<u32>>,
    /// Point pairs `(u, v)` of `Phi` grouped by positive shift.
    groups: Vec<Vec<(usize, usize)>>,
}

impl Space {
    fn new(cfg: &SearchConfig, q: Modulus) -> Result<Self> {
        let k = cfg.k;
        let cap = cfg.degree_cap.unwrap_or(k);
        let masks: Vec<usize> = (0..1usize << k).filter(|m| m.count_ones() as usize <= cap).collect();
        let size = (q.q() as u128).saturating_pow(masks.len() as u32);
        if size > ITER_CAP {
            return Err(Error::CapExceeded { requested: size, cap: ITER_CAP });
        }
        let mut pos = vec![usize::MAX; 1 << k];
        for (i, &m) in masks.iter().enumerate() {
            pos[m] = i;
        }
        let (affine, free): (Vec<usize>, Vec<usize>) = (0..masks.len()).partition(|&i| masks[i].count_ones() <= 1);
        let perms = all_perms(k)
            .skip(1)
            .map(|sigma| {
                masks
                    .iter()
                    .map(|&m| {
                        let image = (0..k).filter(|&i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << sigma[i]);
                        pos[image]
                    })
                    .collect()
            })
            .collect();
        let mono = masks
            .iter()
            .map(|&m| (0..1usize << k).map(|u| (u & m == m) as u32).collect())
            .collect();

        let spread = |u: usize| (0..k).filter(|&i| u >> i & 1 == 1).fold(0usize, |acc, i| acc | 1 << (2 * i));
        let mut by_shift: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for u in 0..1usize << k {
            for v in 0..1usize << k {
                if spread(u) > spread(v) {
                    by_shift.entry(spread(u) - spread(v)).or_default().push((u, v));
                }
            }
        }
        let groups = by_shift.into_values().collect();
        Ok(Self { q, k, masks, affine, free, perms, mono, groups })
    }

    fn len(&self) -> usize {
        self.masks.len()
    }

    fn to_gbf(&self, digits: &[u32]) -> Gbf {
        let mut anf = vec![0; 1 << self.k];
        for (&m, &d) in self.masks.iter().zip(digits) {
            anf[m] = d;
        }
        Gbf::new(self.q, self.k, anf).expect("digits are reduced")
    }

    fn truth_table(&self, digits: &[u32]) -> Vec<u32> {
        let mut t = vec![0u32; 1 << self.k];
        for (mono, &d) in self.mono.iter().zip(digits) {
            for (x, &e) in t.iter_mut().zip(mono) {
                *x = self.q.add(*x, d * e);
            }
        }
        t
    }

    /// Nonzero-shift autocorrelations of `Phi`, one entry per group.
    fn correlations(&self, t: &[u32], out: &mut [Complex64]) {
        let ph = self.q.phase_table();
        for (o, g) in out.iter_mut().zip(&self.groups) {
            *o = g.iter().map(|&(u, v)| ph[self.q.sub(t[u], t[v]) as usize]).sum();
        }
    }
}

fn decode(mut idx: u64, q: u64, positions: &[usize], out: &mut [u32]) {
    out.iter_mut().for_each(|d| *d = 0);
    for &p in positions {
        out[p] = (idx % q) as u32;
        idx /= q;
    }
}

struct BlockOutput {
    explored: u64,
    visited: u128,
    found: Vec<(Vec<u32>, Vec<u32>, f64)>,
}

fn run_block(space: &Space, cfg: &SearchConfig, block: usize, blocks: usize) -> BlockOutput {
    let q = space.q;
    let qq = q.q() as u64;
    let n = space.len();
    let a_positions: Vec<usize> = if cfg.canonical_pruning { space.free.clone() } else { (0..n).collect() };
    let a_count = qq.pow(a_positions.len() as u32);
    let b_count = qq.pow(n as u32);
    // Each canonical-form `a` stands for every affine shift of itself.
    let a_weight = if cfg.canonical_pruning { (qq as u128).pow(space.affine.len() as u32) } else { 1 };
    let limit = cfg.merit_threshold * (1u64 << space.k) as f64;

    let mut out = BlockOutput { explored: 0, visited: 0, found: Vec::new() };
    let mut a = vec![0u32; n];
    let mut b = vec![0u32; n];
    let mut image = vec![0u32; n];
    let base = (1u64 << (space.k + 1)) as f64;
    let mut ra = vec![Complex64::default(); space.groups.len()];
    let mut rb = ra.clone();
    let mut idx = block as u64;
    while idx < a_count {
        decode(idx, qq, &a_positions, &mut a);
        idx += blocks as u64;
        out.visited += a_weight * b_count as u128;

        // Permutations fixing the normal form of `a`, with the offset they need.
        let mut stab: Vec<(&[usize], Vec<u32>)> = Vec::new();
        if cfg.canonical_pruning {
            let mut minimal = true;
            for perm in &space.perms {
                for (i, &p) in perm.iter().enumerate() {
                    image[p] = a[i];
                }
                let shift: Vec<u32> = space.affine.iter().map(|&p| image[p]).collect();
                for &p in &space.affine {
                    image[p] = 0;
                }
                match image.cmp(&a) {
                    std::cmp::Ordering::Less => {
                        minimal = false;
                        break;
                    }
                    std::cmp::Ordering::Equal => stab.push((perm.as_slice(), shift)),
                    std::cmp::Ordering::Greater => {}
                }
            }
            if !minimal {
                continue;
            }
        }

        space.correlations(&space.truth_table(&a), &mut ra);
        b.iter_mut().for_each(|d| *d = 0);
        let mut tb = vec![0u32; 1 << space.k];
        for _ in 0..b_count {
            let canonical = stab.iter().all(|(perm, shift)| {
                for (i, &p) in perm.iter().enumerate() {
                    image[p] = b[i];
                }
                for (&p, &s) in space.affine.iter().zip(shift) {
                    image[p] = q.sub(image[p], s);
                }
                image >= b
            });
            if canonical {
                out.explored += 1;
                space.correlations(&tb, &mut rb);
                let merit = base + 2.0 * ra.iter().zip(&rb).map(|(x, y)| (x + y).norm()).sum::<f64>();
                if merit < limit {
                    out.found.push((a.clone(), b.clone(), merit));
                }
            }
            for (digit, mono) in b.iter_mut().zip(&space.mono) {
                for (x, &e) in tb.iter_mut().zip(mono) {
                    *x = q.add(*x, e);
                }
                *digit += 1;
                if *digit < q.q() {
                    break;
                }
                *digit = 0;
            }
        }
    }
    out
}

/// Runs the whole search.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchResult> {
    run_search_from(cfg, None, |_| Ok(()))
}

/// Runs the search from `resume`, handing a checkpoint to `on_checkpoint`
/// after every batch of blocks.
///
/// Blocks interleave the `a` coefficients with a fixed stride and are merged
/// by sorting, so the result does not depend on the worker count.
pub fn run_search_from(
    cfg: &SearchConfig,
    resume: Option<Checkpoint>,
    mut on_checkpoint: impl FnMut(&Checkpoint) -> Result<()>,
) -> Result<SearchResult> {
    let start = Instant::now();
    let q = cfg.validate()?;
    let ex = Executor::new(cfg.workers)?;
    let space = Space::new(cfg, q)?;

    let a_len = if cfg.canonical_pruning { space.free.len() } else { space.len() };
    let a_count = (q.q() as u128).pow(a_len as u32);
    let blocks = a_count.min(MAX_BLOCKS as u128) as usize;

    let mut state = match resume {
        Some(cp) => {
            if !cp.config.same_search(cfg) || cp.blocks != blocks {
                return Err(Error::Config("checkpoint was written for another configuration".into()));
            }
            Checkpoint { config: cfg.clone(), ..cp }
        }
        None => Checkpoint { config: cfg.clone(), blocks, next_block: 0, explored: 0, visited: 0, found: Vec::new() },
    };

    let mut partial = false;
    while state.next_block < blocks {
        if cfg.work_cap.is_some_and(|cap| state.explored >= cap) {
            partial = true;
            break;
        }
        let end = (state.next_block + BATCH_BLOCKS).min(blocks);
        let outputs = ex.map(state.next_block..end, |blk| run_block(&space, cfg, blk, blocks));
        for o in outputs {
            state.explored += o.explored;
            state.visited += o.visited;
            for (a, b, merit) in o.found {
                state.found.push(FoundKernel {
                    a: space.to_gbf(&a).to_json(),
                    b: space.to_gbf(&b).to_json(),
                    merit,
                    upper_bound: merit / (1u64 << cfg.k) as f64,
                });
            }
        }
        state.next_block = end;
        on_checkpoint(&state)?;
    }

    let mut keyed: Vec<(Vec<u32>, Vec<u32>, FoundKernel)> = state
        .found
        .into_iter()
        .map(|f| Ok((Gbf::from_json(&f.a)?.anf().to_vec(), Gbf::from_json(&f.b)?.anf().to_vec(), f)))
        .collect::<Result<_>>()?;
    keyed.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    let found: Vec<FoundKernel> = keyed.into_iter().map(|(_, _, f)| f).collect();

    let checks = ex.map(0..found.len(), |i| {
        let kernel = found[i].kernel()?;
        if (kernel.merit() - found[i].merit).abs() > VERIFY_TOL || kernel.upper_bound() >= cfg.merit_threshold {
            return Err(Error::Verification(format!(
                "found pair {i} has merit {} but the table gave {}",
                kernel.merit(),
                found[i].merit
            )));
        }
        Ok(())
    });
    checks.into_iter().collect::<Result<Vec<()>>>()?;

    let pruned = state.visited - state.explored as u128;
    let payload = HashPayload { found: &found, explored: state.explored, pruned, partial };
    let payload_hash = hex_digest(&serde_json::to_vec(&payload)?);
    Ok(SearchResult {
        config: cfg.clone(),
        found,
        explored: state.explored,
        pruned,
        space: cfg.space_size(),
        projected_orbits: cfg.projected_orbits(),
        partial,
        completed_blocks: state.next_block,
        blocks,
        payload_hash,
        wall_time: start.elapsed().as_secs_f64(),
    })
}
