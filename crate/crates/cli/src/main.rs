mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "oscillabound", version, about = "Certified bounds for Fourier transforms of curve measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// TOML run configuration
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    budget: Option<usize>,
    /// Write a CSV sidecar of sampled values
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the real Fourier transform at one or more frequencies
    Muhat(Common),
    /// Search for the minimum of the Fourier transform
    Minimize(Common),
    /// Certified constant C for a real family (plus a per-frequency certificate)
    Certify(Common),
    /// Certified and empirical independence-ratio and chromatic bounds
    Pipeline(Common),
    /// Exact p-adic Fourier transform
    PadicMuhat(Common),
    /// Certified p-adic floor after echelon reduction
    PadicCertify(Common),
    /// Look for x1 - x2 = F(s) inside a box set
    ConfigSearch(Common),
    /// Largest clique among sample points of a curve Cayley graph
    Clique(Common),
    /// Verify the periodic coloring on random edges
    ColorCheck(Common),
    /// Reduce a multivariate family to a one-variable family
    Reduce(Common),
}

/// Exit codes: validation failures and internal consistency failures.
const EXIT_INVALID: u8 = 1;
const EXIT_CONSISTENCY: u8 = 2;

fn configure_threads() {
    if let Some(n) = std::env::var("OSCILLABOUND_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // fails only if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (name, common) = match &cli.command {
        Command::Muhat(c) => ("muhat", c),
        Command::Minimize(c) => ("minimize", c),
        Command::Certify(c) => ("certify", c),
        Command::Pipeline(c) => ("pipeline", c),
        Command::PadicMuhat(c) => ("padic-muhat", c),
        Command::PadicCertify(c) => ("padic-certify", c),
        Command::ConfigSearch(c) => ("config-search", c),
        Command::Clique(c) => ("clique", c),
        Command::ColorCheck(c) => ("color-check", c),
        Command::Reduce(c) => ("reduce", c),
    };
    let mut cfg = RunConfig::load(&common.config)?;
    if common.seed.is_some() {
        cfg.seed = common.seed;
    }
    if common.tol.is_some() {
        cfg.tol = common.tol;
    }
    if common.budget.is_some() {
        cfg.budget = common.budget;
    }
    let out = commands::dispatch(name, &cfg)?;
    if let (Some(path), Some(table)) = (&common.csv, &out.csv) {
        table.write(path)?;
    }
    let report = serde_json::json!({
        "command": name,
        "config": cfg,
        "result": out.result,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let consistency = matches!(
                e.downcast_ref::<oscillabound::Error>(),
                Some(oscillabound::Error::Consistency(_))
            );
            eprintln!("error: {e:#}");
            ExitCode::from(if consistency { EXIT_CONSISTENCY } else { EXIT_INVALID })
        }
    }
}
