//! Closed-form PMEPR bounds for kernel cosets, the `alpha/beta` class tables
//! and tightness verdicts from coset sweeps.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Modulus;
use crate::constructions::{alpha_beta_family, grid_values, CosetRep, CosetRepJson, KernelPair, SweepMode};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::perm::factorial;
use crate::spectral::{wht, EnvelopeConfig};
use crate::sweep::{sweep_coset, EXHAUSTIVE_LIMIT, SAMPLE_SEED, SAMPLE_SIZE};

/// A measured maximum this close to the upper bound counts as tight.
pub const TIGHT_TOL: f64 = 0.02;

/// Largest `w` grid scanned by [`lb_closed_form`].
pub const LB_GRID_CAP: u128 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Lower bound on the largest PMEPR in any coset built from `kernel` in `m`
/// variables, from the transforms `A`, `B` of `a`, `b`.
///
/// With `m - k` odd this is `max |A(w') + B(w') xi^{w_k}|^2 / 2^{k+1}`; with
/// `m - k` even it is
/// `max |A(w')(1 + xi^{u}) + B(w') xi^{w_k} (1 - xi^{u})|^2 / 2^{k+2}`.
pub fn lb_closed_form(kernel: &KernelPair, m: usize) -> Result<f64> {
    let k = kernel.k();
    if m <= k {
        return Err(Error::InvalidOrder { r: k, m, reason: "a coset needs m > k" });
    }
    let q = kernel.modulus();
    let parity = Parity::of(m - k);
    let extra = if parity == Parity::Odd { 1 } else { 2 };
    let grid = (q.q() as u128).pow((k + extra) as u32);
    if grid > LB_GRID_CAP {
        return Err(Error::CapExceeded { requested: grid, cap: LB_GRID_CAP });
    }
    let sa = wht(kernel.a())?;
    let sb = wht(kernel.b())?;
    let ph = q.phase_table();
    let one = Complex64::new(1.0, 0.0);

    let mut best = 0.0f64;
    for (&a, &b) in sa.values().iter().zip(sb.values()) {
        // |A| + |B| caps both closed forms at this w'.
        let envelope = (a.norm() + b.norm()).powi(2) * if parity == Parity::Odd { 1.0 } else { 4.0 };
        if envelope <= best {
            continue;
        }
        for &zk in ph {
            match parity {
                Parity::Odd => best = best.max((a + b * zk).norm_sqr()),
                Parity::Even => {
                    for &zu in ph {
                        best = best.max((a * (one + zu) + b * zk * (one - zu)).norm_sqr());
                    }
                }
            }
        }
    }
    Ok(best / (1u64 << (k + extra)) as f64)
}

/// `2 + (|1 - xi^{beta-alpha}| + |1 - xi^{beta+alpha}|) / 2`.
pub fn alpha_beta_bound(q: Modulus, alpha: u32, beta: u32) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let d = |t: u32| (one - q.phase(t)).norm();
    2.0 + (d(q.sub(beta, alpha)) + d(q.add(beta, alpha))) / 2.0
}

/// Closed forms of the class bounds.
const LABELS: &[(&str, fn() -> f64)] = &[
    ("2", || 2.0),
    ("2+1/sqrt(2)", || 2.0 + 0.5f64.sqrt()),
    ("2+sqrt(2-sqrt(2))", || 2.0 + (2.0 - 2f64.sqrt()).sqrt()),
    ("3", || 3.0),
    ("2+sqrt(1+1/sqrt(2))", || 2.0 + (1.0 + 0.5f64.sqrt()).sqrt()),
    ("2+sqrt(2)", || 2.0 + 2f64.sqrt()),
    ("3+1/sqrt(2)", || 3.0 + 0.5f64.sqrt()),
    ("2+sqrt(2+sqrt(2))", || 2.0 + (2.0 + 2f64.sqrt()).sqrt()),
    ("4", || 4.0),
];

/// One class of `alpha/beta` kernels with a common bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub p: u32,
    /// `beta - alpha` and `beta + alpha`, up to sign and order, in units of
    /// `q/p`.
    pub key: (u32, u32),
    pub constraint: String,
    pub bound: f64,
    pub label: String,
    /// Ordered `(alpha, beta)` pairs in the class, `alpha = beta = q/2`
    /// excluded. The class holds `pairs * m!/2` cosets.
    pub pairs: u32,
}

impl ClassRow {
    /// Coset count as a multiple of `m!`.
    pub fn multiplier(&self) -> f64 {
        self.pairs as f64 / 2.0
    }

    pub fn coset_count(&self, m: usize) -> u64 {
        self.pairs as u64 * factorial(m) / 2
    }
}

fn unit_distance(q: Modulus, p: u32, t: u32) -> u32 {
    let step = q.q() / p;
    let t = t.min(q.q() - t);
    t / step
}

fn class_key(q: Modulus, p: u32, alpha: u32, beta: u32) -> (u32, u32) {
    let x = unit_distance(q, p, q.sub(beta, alpha));
    let y = unit_distance(q, p, q.add(beta, alpha));
    (x.min(y), x.max(y))
}

fn check_on_grid(q: Modulus, p: u32, v: u32) -> Result<()> {
    let step = q.q() / p;
    if v >= q.q() || v % step != 0 {
        return Err(Error::NotOnGrid { value: v, step });
    }
    Ok(())
}

/// Bound and class of the kernel with parameters `alpha, beta in (q/p) Z_p`.
///
/// `pairs` is filled in for the whole class.
pub fn classify_alpha_beta(q: Modulus, p: u32, alpha: u32, beta: u32) -> Result<ClassRow> {
    let values = grid_values(q, p)?;
    check_on_grid(q, p, alpha)?;
    check_on_grid(q, p, beta)?;
    let key = class_key(q, p, alpha, beta);
    let h = q.half();
    let pairs = values
        .iter()
        .flat_map(|&a| values.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| !(a == h && b == h) && class_key(q, p, a, b) == key)
        .count() as u32;
    let bound = alpha_beta_bound(q, alpha, beta);
    let label = LABELS
        .iter()
        .find(|(_, v)| (v() - bound).abs() < 1e-9)
        .map(|(s, _)| s.to_string())
        .ok_or_else(|| Error::Verification(format!("bound {bound} matches no known class")))?;
    Ok(ClassRow {
        p,
        key,
        constraint: format!("beta-alpha, beta+alpha = +-{}, +-{} (units of q/{p})", key.0, key.1),
        bound,
        label,
        pairs,
    })
}

/// A class row with the cosets found by enumerating the family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassTableRow {
    #[serde(flatten)]
    pub row: ClassRow,
    pub cosets: u64,
    /// Cosets with bound at most this row's.
    pub cumulative: u64,
    pub lower_bound: f64,
}

/// The class table for `alpha, beta in (q/p) Z_p` and `m` variables, sorted by
/// bound.
pub fn class_tables(q: Modulus, p: u32, m: usize) -> Result<Vec<ClassTableRow>> {
    let family = alpha_beta_family(q, p, m)?;
    let mut rows: BTreeMap<(u32, u32), (ClassRow, u64, f64)> = BTreeMap::new();
    for mem in &family {
        let key = class_key(q, p, mem.alpha, mem.beta);
        if let Some(entry) = rows.get_mut(&key) {
            entry.1 += 1;
            continue;
        }
        let row = classify_alpha_beta(q, p, mem.alpha, mem.beta)?;
        let lb = lb_closed_form(&mem.rep.kernel, m)?;
        rows.insert(key, (row, 1, lb));
    }
    let mut out: Vec<_> = rows
        .into_values()
        .map(|(row, cosets, lower_bound)| ClassTableRow { row, cosets, cumulative: 0, lower_bound })
        .collect();
    out.sort_by(|a, b| a.row.bound.total_cmp(&b.row.bound));
    let mut total = 0;
    for r in &mut out {
        total += r.cosets;
        r.cumulative = total;
    }
    Ok(out)
}

/// One line of the `classify` CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyRecord {
    pub p: u32,
    pub alpha: u32,
    pub beta: u32,
    pub bound: f64,
    pub lower_bound: f64,
    pub count_multiplier: f64,
}

/// Every `(alpha, beta)` of the family with its bound, closed-form lower
/// bound in `m` variables and share of the coset count as a multiple of `m!`.
pub fn classify_records(q: Modulus, p: u32, m: usize) -> Result<Vec<ClassifyRecord>> {
    let values = grid_values(q, p)?;
    let h = q.half();
    let mut out = Vec::new();
    for &alpha in &values {
        for &beta in &values {
            if alpha == h && beta == h {
                continue;
            }
            let kernel = KernelPair::alpha_beta(q, alpha, beta);
            out.push(ClassifyRecord {
                p,
                alpha,
                beta,
                bound: alpha_beta_bound(q, alpha, beta),
                lower_bound: lb_closed_form(&kernel, m)?,
                count_multiplier: 0.5,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Tight,
    Gap,
    Unverified,
}

/// Sweep limits for [`tightness_verdict`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepBudget {
    /// Cosets up to this size are swept exhaustively.
    pub exhaustive_limit: u128,
    pub sample_size: u64,
    pub seed: u64,
    /// Refuse to evaluate more words than this.
    pub word_cap: u128,
    pub envelope: EnvelopeConfig,
}

impl Default for SweepBudget {
    fn default() -> Self {
        Self {
            exhaustive_limit: EXHAUSTIVE_LIMIT,
            sample_size: SAMPLE_SIZE,
            seed: SAMPLE_SEED,
            word_cap: EXHAUSTIVE_LIMIT,
            envelope: EnvelopeConfig::default(),
        }
    }
}

impl SweepBudget {
    pub fn mode(&self, size: u128) -> SweepMode {
        if size <= self.exhaustive_limit {
            SweepMode::Exhaustive
        } else {
            SweepMode::Sample { n: self.sample_size, seed: self.seed }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub upper: f64,
    pub lower: f64,
    pub measured: Option<f64>,
    pub words: u64,
    pub sampled: bool,
    pub tight: Verdict,
    pub parity: Parity,
}

/// Upper and lower bounds of `rep` and the largest PMEPR found by sweeping
/// its coset.
pub fn tightness_verdict(rep: &CosetRep, budget: &SweepBudget, ex: &Executor) -> Result<BoundReport> {
    let upper = rep.upper_bound;
    let lower = lb_closed_form(&rep.kernel, rep.m)?;
    let parity = Parity::of(rep.m - rep.k());
    let size = (rep.q() as u128).pow(rep.m as u32 + 1);
    let mode = budget.mode(size);
    let needed = match mode {
        SweepMode::Exhaustive => size,
        SweepMode::Sample { n, .. } => (n as u128).min(size),
    };
    if needed > budget.word_cap {
        return Ok(BoundReport { upper, lower, measured: None, words: 0, sampled: false, tight: Verdict::Unverified, parity });
    }
    let r = sweep_coset(&rep.gbf, mode, budget.envelope, ex)?;
    let tight = if r.max_pmepr >= upper - TIGHT_TOL { Verdict::Tight } else { Verdict::Gap };
    Ok(BoundReport {
        upper,
        lower,
        measured: Some(r.max_pmepr),
        words: r.words,
        sampled: r.sampled,
        tight,
        parity,
    })
}

/// A representative together with its bound report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub rep: CosetRepJson,
    #[serde(flatten)]
    pub report: BoundReport,
}
