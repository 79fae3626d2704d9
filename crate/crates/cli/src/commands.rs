use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rm_pmepr::algebra::{Gbf, GbfJson, Modulus};
use rm_pmepr::bounds::{
    class_tables, classify_records, tightness_verdict, ClassTableRow, SweepBudget, Verdict, VerdictJson, TIGHT_TOL,
};
use rm_pmepr::constructions::{
    alpha_beta_family, construct_coset_rep, davis_jedwab_family, kernel_catalog, KernelJson, KernelPair,
};
use rm_pmepr::exec::Executor;
use rm_pmepr::perm;
use rm_pmepr::search::{run_search_from, Checkpoint, SearchConfig};
use rm_pmepr::sequence::{phi_star, psi, star, CxSeq};
use rm_pmepr::spectral::{
    coset_lower_bound, covering_radius_check, papr_p, pmepr as estimate, pmepr_upper_bound_star, wht_on_grid,
    EnvelopeConfig, PmeprReport,
};
use rm_pmepr::spectral::wht::WHT_CAP;
use rm_pmepr::sweep::{default_mode, sweep_coset};
use rm_pmepr::{Error, Result};
use serde::Serialize;
use serde_json::json;

use crate::report::Outcome;
use crate::{ClassifyArgs, CosetArgs, GolayArgs, PmeprArgs, SearchArgs, VerifyArgs, WhtArgs};

const STAR_TOL: f64 = 1e-9;
const BOUND_TOL: f64 = 1e-6;
const GOLAY_PMEPR_TOL: f64 = 1e-4;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, data: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, data)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct GolayRow {
    #[serde(flatten)]
    rep: rm_pmepr::constructions::CosetRepJson,
    star: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    words: Option<u64>,
}

pub fn golay(a: &GolayArgs, ex: &Executor) -> Result<Outcome> {
    let q = Modulus::new(a.q)?;
    if !(2..=8).contains(&a.m) {
        return Err(Error::Config(format!("golay needs 2 <= m <= 8, got {}", a.m)));
    }
    let n = 1usize << a.m;
    let fam = davis_jedwab_family(q, a.m)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for rep in &fam {
        let s = star(&psi(&rep.gbf), &psi(&rep.companion()))?;
        if (s - 2.0 * n as f64).abs() > STAR_TOL {
            failures.push(format!("pi={:?}: star {s} != {}", rep.pi, 2 * n));
        }
        let (mut measured, mut words) = (None, None);
        if a.verify_envelope {
            let size = (a.q as u128).pow(a.m as u32 + 1);
            let r = sweep_coset(&rep.gbf, default_mode(size), EnvelopeConfig::default(), ex)?;
            if r.max_pmepr > 2.0 + GOLAY_PMEPR_TOL {
                failures.push(format!("pi={:?}: PMEPR {} > 2", rep.pi, r.max_pmepr));
            }
            measured = Some(r.max_pmepr);
            words = Some(r.words);
        }
        rows.push(GolayRow { rep: rep.to_json(), star: s, measured, words });
    }
    let max_measured = rows.iter().filter_map(|r| r.measured).fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    let mut out = Outcome::new(json!({
        "q": a.q,
        "m": a.m,
        "count": rows.len(),
        "representatives": rows,
        "max_measured": max_measured,
    }));
    out.line(format!("{} Golay cosets of RM_{}(1,{}), star target {}", fam.len(), a.q, a.m, 2 * n));
    out.line(format!("{:<24} {:>10} {:>10}", "pi", "star", "pmepr"));
    for (rep, row) in fam.iter().zip(&rows) {
        let pm = row.measured.map_or("-".to_string(), |x| format!("{x:.6}"));
        out.line(format!("{:<24} {:>10.4} {:>10}", format!("{:?}", rep.pi), row.star, pm));
    }
    if let Some(x) = max_measured {
        out.line(format!("max PMEPR {x:.6}"));
    }
    out.failures = failures;
    Ok(out)
}

pub fn coset(a: &CosetArgs, ex: &Executor) -> Result<Outcome> {
    let kernel = match (&a.kernel, &a.named) {
        (Some(path), _) => KernelPair::from_json(&read_json::<KernelJson>(path)?)?,
        (None, Some(name)) => {
            let q = Modulus::new(a.q.ok_or_else(|| Error::Config("--named needs -q".into()))?)?;
            kernel_catalog(q)
                .into_iter()
                .find(|k| &k.name == name)
                .ok_or_else(|| Error::Config(format!("no catalog kernel named {name:?} for q={}", q.q())))?
                .kernel
        }
        (None, None) => return Err(Error::Config("give --kernel or --named".into())),
    };
    if let Some(q) = a.q {
        if q != kernel.q() {
            return Err(Error::ModulusMismatch { left: q, right: kernel.q() });
        }
    }
    let pi = a.pi.clone().unwrap_or_else(|| perm::identity(a.m));
    let rep = construct_coset_rep(&kernel, a.m, &pi)?;
    if !a.sweep {
        let mut out = Outcome::new(rep.to_json());
        out.line(format!("f = {}", rep.gbf));
        out.line(format!("q={} m={} k={} pi={:?}", rep.q(), rep.m, rep.k(), rep.pi));
        out.line(format!("upper bound {:.6}", rep.upper_bound));
        return Ok(out);
    }
    let mut budget = SweepBudget::default();
    if let Some(n) = a.samples {
        budget.sample_size = n;
    }
    if let Some(s) = a.seed {
        budget.seed = s;
    }
    let report = tightness_verdict(&rep, &budget, ex)?;
    let mut out = Outcome::new(VerdictJson { rep: rep.to_json(), report: report.clone() });
    out.line(format!("f = {}", rep.gbf));
    out.line(format!("upper {:.6}  lower {:.6}", report.upper, report.lower));
    match report.measured {
        Some(x) => out.line(format!(
            "measured {x:.6} over {} words{}  verdict {:?}",
            report.words,
            if report.sampled { " (sampled)" } else { "" },
            report.tight
        )),
        None => out.line("coset too large to sweep, verdict Unverified"),
    }
    if let Some(x) = report.measured {
        out.check(x <= report.upper + BOUND_TOL, || format!("measured {x} exceeds the upper bound {}", report.upper));
    }
    Ok(out)
}

fn class_text(out: &mut Outcome, rows: &[ClassTableRow]) {
    out.line(format!("{:<22} {:>10} {:>8} {:>8} {:>10} {:>8}", "bound", "value", "cosets", "cum", "x m!", "lower"));
    for r in rows {
        out.line(format!(
            "{:<22} {:>10.6} {:>8} {:>8} {:>10} {:>8.4}",
            r.row.label,
            r.row.bound,
            r.cosets,
            r.cumulative,
            r.row.multiplier(),
            r.lower_bound
        ));
    }
}

pub fn classify(a: &ClassifyArgs) -> Result<Outcome> {
    let q = Modulus::new(a.q)?;
    let rows = class_tables(q, a.p, a.m)?;
    let f = perm::factorial(a.m);
    let total: u64 = rows.iter().map(|r| r.cosets).sum();
    let want = (a.p as u64 * a.p as u64 - 1) * f / 2;
    let mut out = Outcome::new(json!({ "q": a.q, "p": a.p, "m": a.m, "rows": rows, "total": total }));
    class_text(&mut out, &rows);
    out.line(format!("total {total}"));
    for r in &rows {
        out.check(r.cosets == r.row.coset_count(a.m), || {
            format!("class {}: {} cosets, expected {}", r.row.label, r.cosets, r.row.coset_count(a.m))
        });
    }
    out.check(total == want, || format!("total {total} != (p^2-1) m!/2 = {want}"));
    if let Some(path) = &a.csv {
        let records = classify_records(q, a.p, a.m)?;
        let csv_err = |e: csv::Error| Error::Config(e.to_string());
        if path.as_os_str() == "-" {
            let mut w = csv::Writer::from_writer(io::stdout());
            for r in &records {
                w.serialize(r).map_err(csv_err)?;
            }
            w.flush().map_err(|e| Error::Config(e.to_string()))?;
            out.text.clear();
        } else {
            let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
            for r in &records {
                w.serialize(r).map_err(csv_err)?;
            }
            w.flush().map_err(|e| Error::Config(e.to_string()))?;
        }
    }
    Ok(out)
}

fn read_seq(path: &Path, q: Option<u32>) -> Result<CxSeq> {
    let q = Modulus::new(q.ok_or_else(|| Error::Config("sequence files need -q".into()))?)?;
    CxSeq::parse_text(&read(path)?, q)
}

pub fn pmepr(a: &PmeprArgs) -> Result<Outcome> {
    let seq = if a.all_ones {
        let n = a.n.ok_or_else(|| Error::Config("--all-ones needs -n".into()))?;
        CxSeq::all_ones(n)
    } else {
        let path = a.file.as_deref().ok_or_else(|| Error::Config("give --file or --all-ones".into()))?;
        read_seq(path, a.q)?
    };
    let cfg = EnvelopeConfig { oversampling: a.oversampling, refine: !a.no_refine };
    let est = estimate(&seq, cfg)?;
    let star_bound = match &a.companion {
        Some(path) => Some(pmepr_upper_bound_star(&seq, &read_seq(path, a.q)?)?),
        None => None,
    };
    let report = PmeprReport::new(seq.len(), &est, star_bound);
    let mut out = Outcome::new(&report);
    out.line(format!(
        "PMEPR {:.6} at theta {:.6} (n={}, L={}{})",
        report.grid_max,
        report.theta,
        report.n,
        report.oversampling,
        if est.refined { ", refined" } else { "" }
    ));
    if let Some(b) = star_bound {
        out.line(format!("star bound {b:.6}"));
        out.check(report.grid_max <= b + BOUND_TOL, || format!("PMEPR {} exceeds the star bound {b}", report.grid_max));
    }
    Ok(out)
}

pub fn wht(a: &WhtArgs) -> Result<Outcome> {
    let f = Gbf::from_json(&read_json::<GbfJson>(&a.f)?)?;
    let q = f.q();
    if a.p == 0 || q % a.p != 0 {
        return Err(Error::DivisorMismatch { p: a.p, q });
    }
    let spectrum = wht_on_grid(&f, q / a.p, WHT_CAP)?;
    let at_p = papr_p(&f, a.p)?;
    let at_q = papr_p(&f, q)?;
    let lower = coset_lower_bound(&f)?;
    let covering = if q == 2 { Some(covering_radius_check(&f)?) } else { None };
    let mut out = Outcome::new(json!({
        "spectrum": spectrum.summary(),
        "papr_p": at_p,
        "papr_q": at_q,
        "coset_lower_bound": lower,
        "covering": covering.map(|(d, max)| json!({ "distance": d, "max_abs": max })),
    }));
    out.line(format!("f = {}", f));
    out.line(format!("papr at p={}: {at_p:.6}", a.p));
    out.line(format!("papr at p=q={q}: {at_q:.6}"));
    out.line(format!("coset lower bound: {lower:.6}"));
    if let Some((d, max)) = covering {
        out.line(format!("distance to RM_2(1,{}): {d}, max |F| = {max}", f.m()));
    }
    out.check(at_p <= at_q + STAR_TOL, || format!("papr at p={} ({at_p}) exceeds papr at q ({at_q})", a.p));
    Ok(out)
}

fn search_config(a: &SearchArgs, resume: Option<&Checkpoint>) -> Result<SearchConfig> {
    if let Some(path) = &a.config {
        return read_json(path);
    }
    let (q, k) = match (a.q, a.k, resume) {
        (Some(q), Some(k), _) => (q, k),
        (_, _, Some(cp)) => return Ok(SearchConfig { work_cap: a.work_cap, ..cp.config.clone() }),
        _ => return Err(Error::Config("give -q and -k, --config or --resume".into())),
    };
    let mut cfg = SearchConfig::new(q, k);
    cfg.degree_cap = a.degree_cap;
    if let Some(t) = a.threshold {
        cfg.merit_threshold = t;
    }
    cfg.canonical_pruning = !a.no_pruning;
    cfg.work_cap = a.work_cap;
    Ok(cfg)
}

pub fn search(a: &SearchArgs, workers: Option<usize>, json: bool) -> Result<Outcome> {
    let resume: Option<Checkpoint> = a.resume.as_deref().map(read_json).transpose()?;
    let mut cfg = search_config(a, resume.as_ref())?;
    cfg.workers = Executor::from_env(workers.unwrap_or(cfg.workers))?.workers();
    let result = run_search_from(&cfg, resume, |cp| match &a.checkpoint {
        Some(path) => write_file(path, &serde_json::to_string(cp)?),
        None => Ok(()),
    })?;
    let lines: Vec<String> = result.found.iter().map(serde_json::to_string).collect::<std::result::Result<_, _>>()?;
    match &a.out {
        Some(path) => {
            let mut body = lines.join("\n");
            if !body.is_empty() {
                body.push('\n');
            }
            write_file(path, &body)?;
        }
        None if !json => {
            let mut stdout = io::stdout().lock();
            for l in &lines {
                writeln!(stdout, "{l}").map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        None => {}
    }
    let mut summary = json!({
        "config": result.config,
        "config_hash": result.config.config_hash(),
        "found": result.found.len(),
        "explored": result.explored,
        "pruned": result.pruned,
        "space": result.space,
        "projected_orbits": result.projected_orbits,
        "partial": result.partial,
        "completed_blocks": result.completed_blocks,
        "blocks": result.blocks,
        "payload_hash": result.payload_hash,
    });
    if json && a.out.is_none() {
        summary["kernels"] = serde_json::to_value(&result.found)?;
    }
    let mut out = Outcome::new(summary);
    out.line(format!(
        "q={} k={}: {} pairs below {} (explored {}, pruned {}, space {})",
        cfg.q,
        cfg.k,
        result.found.len(),
        cfg.merit_threshold,
        result.explored,
        result.pruned,
        result.space
    ));
    if result.partial {
        out.line(format!("stopped by the work cap after {}/{} blocks", result.completed_blocks, result.blocks));
    }
    out.line(format!("payload {}", result.payload_hash));
    Ok(out)
}

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn multipliers(p: u32) -> &'static [f64] {
    match p {
        2 => &[0.5, 1.0],
        4 => &[0.5, 2.0, 4.0, 1.0],
        _ => &[0.5, 4.0, 4.0, 2.0, 8.0, 4.0, 4.0, 4.0, 1.0],
    }
}

pub fn verify_tables(a: &VerifyArgs, ex: &Executor) -> Result<Outcome> {
    let mut checks = Vec::new();
    let mut push = |name: String, pass: bool, detail: String| checks.push(Check { name, pass, detail });

    for (q, p) in [(4u32, 2u32), (8, 4), (16, 8)] {
        for m in [3usize, 4] {
            let rows = class_tables(Modulus::new(q)?, p, m)?;
            let got: Vec<f64> = rows.iter().map(|r| r.row.multiplier()).collect();
            let total: u64 = rows.iter().map(|r| r.cosets).sum();
            let want = (p as u64 * p as u64 - 1) * perm::factorial(m) / 2;
            let counts_ok = rows.iter().all(|r| r.cosets == r.row.coset_count(m));
            push(
                format!("classes q={q} p={p} m={m}"),
                got == multipliers(p) && total == want && counts_ok,
                format!("multipliers {got:?}, total {total} (want {want})"),
            );
        }
    }

    let q4 = Modulus::new(4)?;
    let lows: Vec<f64> = class_tables(q4, 4, 3)?.iter().map(|r| r.lower_bound).collect();
    let mut sorted = lows.clone();
    sorted.sort_by(f64::total_cmp);
    let want = [2.0, 2.5, 2.5, 4.0];
    push(
        "lower bounds q=4 p=4".into(),
        sorted.iter().zip(want).all(|(x, y)| (x - y).abs() < 1e-9),
        format!("{lows:?}"),
    );

    for q in [4u32, 8, 16] {
        let zq = Modulus::new(q)?;
        for p in [2u32, 4, 8].into_iter().filter(|p| q % p == 0) {
            let step = q / p;
            let mut worst: f64 = 0.0;
            for alpha in (0..q).step_by(step as usize) {
                for beta in (0..q).step_by(step as usize) {
                    let k = KernelPair::alpha_beta(zq, alpha, beta);
                    let bound = rm_pmepr::bounds::alpha_beta_bound(zq, alpha, beta);
                    worst = worst.max((bound * 4.0 - phi_star(k.a(), k.b())?).abs());
                }
            }
            push(format!("bound formula q={q} p={p}"), worst < 1e-9, format!("max deviation {worst:.2e}"));
        }
    }

    let h = KernelPair::holzmann_kharaghani(q4)?;
    let ok = (h.star_psi() - 16.0).abs() < STAR_TOL && (h.upper_bound() - 5.0).abs() < STAR_TOL;
    push("holzmann-kharaghani".into(), ok, format!("star {}, upper {}", h.star_psi(), h.upper_bound()));

    if a.sweep {
        let q8 = Modulus::new(8)?;
        let fam = alpha_beta_family(q8, 4, 3)?;
        for row in class_tables(q8, 4, 3)? {
            let mem = fam
                .iter()
                .find(|x| (x.rep.upper_bound - row.row.bound).abs() < 1e-9)
                .ok_or_else(|| Error::Verification(format!("no member for class {}", row.row.label)))?;
            let r = tightness_verdict(&mem.rep, &SweepBudget::default(), ex)?;
            let measured = r.measured.unwrap_or(f64::NAN);
            push(
                format!("tight q=8 p=4 m=3 {}", row.row.label),
                r.tight == Verdict::Tight && (measured - row.row.bound).abs() <= TIGHT_TOL,
                format!("measured {measured:.6} over {} words", r.words),
            );
        }
    }

    let mut out = Outcome::new(json!({ "checks": &checks }));
    for c in &checks {
        out.line(format!("{} {:<36} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail));
        out.check(c.pass, || format!("{}: {}", c.name, c.detail));
    }
    Ok(out)
}
