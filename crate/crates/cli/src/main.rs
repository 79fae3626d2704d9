mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rm_pmepr::exec::Executor;
use rm_pmepr::Error;
use serde::Serialize;

use report::{CommandReport, Outcome};

#[derive(Parser, Debug)]
#[command(name = "rm-pmepr", version, about = "Low-PMEPR cosets of generalized first-order Reed-Muller codes")]
struct Cli {
    /// Print the machine-readable report instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (0 = all cores). RM_PMEPR_WORKERS takes precedence.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Golay cosets of RM_q(1,m) and their star identity.
    Golay(GolayArgs),
    /// Build one coset representative from a kernel pair.
    Coset(CosetArgs),
    /// Class table of the alpha/beta family.
    Classify(ClassifyArgs),
    /// Oversampled PMEPR of one sequence.
    Pmepr(PmeprArgs),
    /// Walsh-Hadamard spectrum of a function.
    Wht(WhtArgs),
    /// Exhaustive kernel-pair search.
    Search(SearchArgs),
    /// Recheck the class tables and bound identities.
    VerifyTables(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
struct GolayArgs {
    #[arg(short)]
    q: u32,
    #[arg(short)]
    m: usize,
    /// Sweep every coset and check its PMEPR against 2.
    #[arg(long)]
    verify_envelope: bool,
}

#[derive(Args, Debug, Serialize)]
struct CosetArgs {
    /// KernelPair JSON file.
    #[arg(long, conflicts_with = "named", required_unless_present = "named")]
    kernel: Option<PathBuf>,
    /// Catalog kernel, e.g. `alpha-beta(1,2)` or `holzmann-kharaghani`.
    #[arg(long)]
    named: Option<String>,
    /// Modulus for `--named`.
    #[arg(short, required_unless_present = "kernel")]
    q: Option<u32>,
    #[arg(short)]
    m: usize,
    /// Comma-separated permutation of 0..m (default identity).
    #[arg(long, value_delimiter = ',')]
    pi: Option<Vec<usize>>,
    /// Sweep the coset and compare with the bounds.
    #[arg(long)]
    sweep: bool,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    #[arg(short)]
    q: u32,
    #[arg(short)]
    p: u32,
    #[arg(short)]
    m: usize,
    /// Write one CSV line per (alpha, beta) to PATH, or `-` for stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct PmeprArgs {
    /// Sequence text file: comma-separated phase exponents, `.` for unsupported entries.
    #[arg(long, conflicts_with = "all_ones", required_unless_present = "all_ones")]
    file: Option<PathBuf>,
    #[arg(short)]
    q: Option<u32>,
    #[arg(long)]
    all_ones: bool,
    #[arg(short)]
    n: Option<usize>,
    /// Oversampling factor.
    #[arg(short = 'L', default_value_t = 64)]
    oversampling: usize,
    #[arg(long)]
    no_refine: bool,
    /// Companion sequence file; adds the star bound.
    #[arg(long)]
    companion: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct WhtArgs {
    /// Gbf JSON file.
    #[arg(short)]
    f: PathBuf,
    #[arg(short)]
    p: u32,
}

#[derive(Args, Debug, Serialize)]
struct SearchArgs {
    /// SearchConfig JSON; flags below are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short, required_unless_present_any = ["config", "resume"])]
    q: Option<u32>,
    #[arg(short, required_unless_present_any = ["config", "resume"])]
    k: Option<usize>,
    #[arg(long)]
    degree_cap: Option<usize>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    no_pruning: bool,
    #[arg(long)]
    work_cap: Option<u64>,
    /// JSONL file for found kernels (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rewrite this checkpoint after every batch.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    resume: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    /// Also sweep one coset per class for tightness.
    #[arg(long)]
    sweep: bool,
}

fn run(cli: &Cli) -> rm_pmepr::Result<Outcome> {
    let ex = Executor::from_env(cli.workers.unwrap_or(0))?;
    match &cli.command {
        Command::Golay(a) => commands::golay(a, &ex),
        Command::Coset(a) => commands::coset(a, &ex),
        Command::Classify(a) => commands::classify(a),
        Command::Pmepr(a) => commands::pmepr(a),
        Command::Wht(a) => commands::wht(a),
        Command::Search(a) => commands::search(a, cli.workers, cli.json),
        Command::VerifyTables(a) => commands::verify_tables(a, &ex),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let rep = CommandReport::new(&cli.command, out.results, start.elapsed().as_secs_f64());
                println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
            } else {
                print!("{}", out.text);
            }
            if out.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in &out.failures {
                    eprintln!("verification failed: {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            match e {
                Error::Verification(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
