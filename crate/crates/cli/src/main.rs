//! `fermi-rdm`: certificate runs, sweeps and extremal searches from the
//! command line.
//!
//! Exit codes: 0 success, 1 a certificate failed (or the optimizer beat
//! `sqrt(5) N`), 2 invalid flags or inputs.

mod ranges;
mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fermi_rdm::certificates::suite::{build_state, certify_state, Family, SuiteOptions};
use fermi_rdm::extremal::{maximize_with_threads, ExtremalResult, OptimizerConfig};
use fermi_rdm::fock_basis::{sector_dimension, DEFAULT_DIM_CAP};
use fermi_rdm::rdm::MAX_RDM_MODES;
use fermi_rdm::Error;

use crate::ranges::{parse_int_list, parse_real_list};
use crate::sweep::SweepSpec;

const THREADS_ENV: &str = "FERMI_RDM_THREADS";

#[derive(Parser)]
#[command(name = "fermi-rdm", version, about = "Reduced density matrices of fermionic states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable certificate on one state; one JSON line each.
    Certify(CertifyArgs),
    /// Tabulate norms and bound margins over a grid of states as CSV.
    Sweep(SweepArgs),
    /// Search for the largest HS norm of gamma2 in a sector.
    Extremal(ExtremalArgs),
}

#[derive(Args)]
struct Common {
    /// Worker threads (overridden by FERMI_RDM_THREADS).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Largest sector dimension C(M, N) accepted.
    #[arg(long = "cap-dim", default_value_t = DEFAULT_DIM_CAP)]
    cap_dim: u64,
}

#[derive(Args)]
struct CertifyArgs {
    /// slater | pairing | random | near_slater
    #[arg(long)]
    family: Family,
    #[arg(long = "M")]
    modes: usize,
    #[arg(long = "N")]
    particles: usize,
    /// Seed for random states and for the random test objects.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Interpolation parameter of near_slater states.
    #[arg(long, default_value_t = 0.1)]
    t: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated families.
    #[arg(long, value_delimiter = ',', required = true)]
    families: Vec<Family>,
    /// Mode counts, e.g. `2-6` or `4,8`.
    #[arg(long = "M")]
    modes: String,
    /// Particle numbers; defaults to every N from 0 to M.
    #[arg(long = "N")]
    particles: Option<String>,
    /// Seeds for random and near_slater states, e.g. `0-9`.
    #[arg(long, default_value = "0")]
    seeds: String,
    /// near_slater interpolation values.
    #[arg(long = "t", default_value = "0,0.001,0.01,0.1,1")]
    t_values: String,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ExtremalArgs {
    #[arg(long = "M")]
    modes: usize,
    #[arg(long = "N")]
    particles: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long = "max-iters", default_value_t = 2000)]
    max_iters: usize,
    #[arg(long = "step-size", default_value_t = 0.1)]
    step_size: f64,
    #[arg(long = "tol-grad", default_value_t = 1e-8)]
    tol_grad: f64,
    /// Where to write the full result as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    /// Bad flags or inputs.
    Usage(String),
    /// A check ran and failed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn threads(flag: usize) -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|n| n.max(1))
            .map_err(|_| Failure::Usage(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        Err(_) => Ok(flag.max(1)),
    }
}

fn check_sector(modes: usize, particles: usize, cap: u64) -> Result<(), Failure> {
    if modes > MAX_RDM_MODES {
        return Err(Failure::Usage(format!(
            "M = {modes} exceeds the limit {MAX_RDM_MODES}"
        )));
    }
    sector_dimension(modes, particles, cap)?;
    Ok(())
}

fn certify(args: CertifyArgs) -> Result<(), Failure> {
    threads(args.common.threads)?;
    check_sector(args.modes, args.particles, args.common.cap_dim)?;
    let psi = build_state(args.family, args.modes, args.particles, args.seed, args.t)?;
    let opts = SuiteOptions {
        seed: args.seed,
        ..SuiteOptions::default()
    };
    let reports = certify_state(&psi, &opts)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for r in &reports {
        writeln!(out, "{}", r.to_json_line())?;
    }
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    let workers = threads(args.common.threads)?;
    let ints = |s: &str| -> Result<Vec<usize>, Failure> {
        let v = parse_int_list(s).map_err(Failure::Usage)?;
        Ok(v.into_iter().map(|x| x as usize).collect())
    };
    let spec = SweepSpec {
        families: args.families,
        modes: ints(&args.modes)?,
        particles: args.particles.as_deref().map(ints).transpose()?,
        seeds: parse_int_list(&args.seeds).map_err(Failure::Usage)?,
        t_values: parse_real_list(&args.t_values).map_err(Failure::Usage)?,
        cap_dim: args.common.cap_dim,
    };
    let rows = sweep::run(&spec, workers)?;
    let write = |w: Box<dyn Write>| sweep::write_csv(w, &rows).map_err(|e| Failure::Usage(e.to_string()));
    match &args.out {
        Some(path) => write(Box::new(BufWriter::new(File::create(path)?)))?,
        None => write(Box::new(io::stdout().lock()))?,
    }
    let failed = rows.iter().any(|r| r.last().map(String::as_str) != Some("true"));
    if failed {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn write_json(path: &PathBuf, result: &ExtremalResult) -> Result<(), Failure> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, result).map_err(Error::from)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

fn summary(r: &ExtremalResult) -> String {
    serde_json::json!({
        "M": r.modes,
        "N": r.particles,
        "best_value": r.best_value,
        "best_value_over_n": r.best_value_over_n,
        "sqrt5_n": r.sqrt5_n,
        "slater_value": r.slater_value,
        "best_start": r.best_start,
        "converged": r.converged,
    })
    .to_string()
}

fn extremal(args: ExtremalArgs) -> Result<(), Failure> {
    let workers = threads(args.common.threads)?;
    check_sector(args.modes, args.particles, args.common.cap_dim)?;
    let cfg = OptimizerConfig {
        max_iters: args.max_iters,
        step_size: args.step_size,
        tol_grad: args.tol_grad,
        restarts: args.restarts,
        seed: args.seed,
    };
    match maximize_with_threads(args.modes, args.particles, &cfg, workers) {
        Ok(r) => {
            if let Some(path) = &args.out {
                write_json(path, &r)?;
            }
            println!("{}", summary(&r));
            Ok(())
        }
        Err(Error::HsBoundExceeded(r)) => {
            if let Some(path) = &args.out {
                write_json(path, &r)?;
            }
            println!("{}", summary(&r));
            eprintln!(
                "BOUND EXCEEDED: ||gamma2||_HS = {} > sqrt(5) N = {}",
                r.best_value, r.sqrt5_n
            );
            Err(Failure::Check)
        }
        Err(e) => Err(e.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Certify(a) => certify(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Extremal(a) => extremal(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
