//! Command-line surface for the bounds engine: squeezing sweeps,
//! convention-reconciliation reports, Monte Carlo estimation runs, and
//! phase-space ellipse export. Every command is deterministic under fixed
//! flags and seed and writes byte-stable CSV or JSON.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 model/scheme error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hcrb_core::measurement::{run_monte_carlo, DualHomodyneScheme};
use hcrb_core::report::{
    bound_comparison, bounds_csv, phasespace_csv, phasespace_rows, reconcile_report,
    sweep_records, SweepSpec, RECONCILE_G_VALUES, SWEEP_SCHEMA,
};
use hcrb_core::{Error, ModelConfig, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "hcrb",
    version,
    about = "Precision bounds and simulated readout for two-mode displacement sensing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate engine and reference bounds over a squeezing-strength grid
    Sweep(SweepArgs),
    /// Compare the two Gram builders and every readout scheme against the
    /// closed-form reference values, across convention knobs
    Reconcile(ReconcileArgs),
    /// Sample a measurement scheme, estimate by GLS, and compare the
    /// empirical MSE against the bounds
    Mc(McArgs),
    /// Export the phase-space ellipse of each mode after every pipeline stage
    Phasespace(PhasespaceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    g_min: Option<f64>,
    #[arg(long)]
    g_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    theta_g: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Readout scheme id (heterodyne, qq, pp, qp, pq, squeezed, alternate)
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file supplying any flag; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ReconcileArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Only json is meaningful here
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    /// Operating squeezing strength; falls back to --g-min, then 0
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    g_min: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    theta_g: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// True displacements as four comma-separated numbers
    #[arg(long)]
    theta: Option<String>,
    /// Only json is meaningful here
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PhasespaceArgs {
    /// Operating squeezing strength; falls back to --g-min, then 0
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    g_min: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    theta_g: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Encoded displacements as four comma-separated numbers
    #[arg(long)]
    theta: Option<String>,
    /// Only csv is meaningful here
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Union of every flag a config file may supply; keys mirror the long flag
/// names. Keys irrelevant to the invoked command are simply unused.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ConfigFile {
    g_min: Option<f64>,
    g_max: Option<f64>,
    steps: Option<usize>,
    alpha: Option<f64>,
    theta_g: Option<f64>,
    kappa: Option<f64>,
    scheme: Option<String>,
    shots: Option<usize>,
    seed: Option<u64>,
    g: Option<f64>,
    theta: Option<String>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<ConfigFile> {
        match path {
            None => Ok(ConfigFile::default()),
            Some(p) => Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?),
        }
    }
}

fn parse_theta(text: Option<&str>) -> Result<[f64; 4]> {
    let Some(text) = text else {
        return Ok([0.0; 4]);
    };
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::invalid(
            "theta",
            format!("need four comma-separated values, got {}", parts.len()),
        ));
    }
    let mut theta = [0.0; 4];
    for (slot, raw) in theta.iter_mut().zip(&parts) {
        *slot = raw
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::invalid("theta", format!("not a number: {raw}")))?;
    }
    Ok(theta)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let cfg = ConfigFile::load(args.config.as_deref())?;
    let base = SweepSpec::default();
    let spec = SweepSpec {
        g_min: args.g_min.or(cfg.g_min).unwrap_or(base.g_min),
        g_max: args.g_max.or(cfg.g_max).unwrap_or(base.g_max),
        steps: args.steps.or(cfg.steps).unwrap_or(base.steps),
        alpha: args.alpha.or(cfg.alpha).unwrap_or(base.alpha),
        theta_g: args.theta_g.or(cfg.theta_g).unwrap_or(base.theta_g),
        kappa: args.kappa.or(cfg.kappa).unwrap_or(base.kappa),
        scheme: args.scheme.or(cfg.scheme).unwrap_or(base.scheme),
        seed: args.seed.or(cfg.seed).unwrap_or(base.seed),
    };
    let records = sweep_records(&spec)?;
    let text = match args.format.or(cfg.format).unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => bounds_csv(&records),
        OutputFormat::Json => pretty(&serde_json::json!({
            "schema": SWEEP_SCHEMA,
            "spec": spec,
            "records": records,
        }))?,
    };
    emit(args.out.or(cfg.out).as_deref(), &text)
}

fn cmd_reconcile(args: ReconcileArgs) -> Result<()> {
    let cfg = ConfigFile::load(args.config.as_deref())?;
    if args.format.or(cfg.format) == Some(OutputFormat::Csv) {
        return Err(Error::invalid("format", "reconcile emits json only"));
    }
    let alpha = args.alpha.or(cfg.alpha).unwrap_or(1.0);
    let seed = args.seed.or(cfg.seed).unwrap_or(1);
    let report = reconcile_report(alpha, &RECONCILE_G_VALUES, seed)?;
    let text = pretty(&serde_json::to_value(&report)?)?;
    emit(args.out.or(cfg.out).as_deref(), &text)
}

fn cmd_mc(args: McArgs) -> Result<()> {
    let cfg = ConfigFile::load(args.config.as_deref())?;
    if args.format.or(cfg.format) == Some(OutputFormat::Csv) {
        return Err(Error::invalid("format", "mc emits json only"));
    }
    let g = args.g.or(cfg.g).or(args.g_min).or(cfg.g_min).unwrap_or(0.0);
    let alpha = args.alpha.or(cfg.alpha).unwrap_or(1.0);
    let shots = args.shots.or(cfg.shots).unwrap_or(100_000);
    if shots < 1000 {
        return Err(Error::invalid(
            "shots",
            format!("{shots} (the MSE and its standard errors need at least 1000)"),
        ));
    }
    let mut config = ModelConfig::new(alpha, g);
    if let Some(theta_g) = args.theta_g.or(cfg.theta_g) {
        config = config.with_theta_g(theta_g);
    }
    if let Some(kappa) = args.kappa.or(cfg.kappa) {
        config = config.with_kappa(kappa);
    }
    let scheme_id = args.scheme.or(cfg.scheme).unwrap_or_else(|| "heterodyne".into());
    let scheme = DualHomodyneScheme::from_id(&scheme_id)?;
    let theta = parse_theta(args.theta.or(cfg.theta).as_deref())?;
    let seed = args.seed.or(cfg.seed).unwrap_or(1);

    let estimation = run_monte_carlo(&config, &scheme, &theta, shots, seed)?;
    let record = bound_comparison(&config, &scheme, seed, Some(estimation.tr_mse))?;
    let text = pretty(&serde_json::json!({
        "estimation": estimation,
        "bounds_record": record,
    }))?;
    emit(args.out.or(cfg.out).as_deref(), &text)
}

fn cmd_phasespace(args: PhasespaceArgs) -> Result<()> {
    let cfg = ConfigFile::load(args.config.as_deref())?;
    if args.format.or(cfg.format) == Some(OutputFormat::Json) {
        return Err(Error::invalid("format", "phasespace emits csv only"));
    }
    let g = args.g.or(cfg.g).or(args.g_min).or(cfg.g_min).unwrap_or(0.0);
    let alpha = args.alpha.or(cfg.alpha).unwrap_or(1.0);
    let mut config = ModelConfig::new(alpha, g);
    if let Some(theta_g) = args.theta_g.or(cfg.theta_g) {
        config = config.with_theta_g(theta_g);
    }
    if let Some(kappa) = args.kappa.or(cfg.kappa) {
        config = config.with_kappa(kappa);
    }
    let theta = parse_theta(args.theta.or(cfg.theta).as_deref())?;
    let rows = phasespace_rows(&config, &theta)?;
    emit(args.out.or(cfg.out).as_deref(), &phasespace_csv(&rows))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Reconcile(args) => cmd_reconcile(args),
        Command::Mc(args) => cmd_mc(args),
        Command::Phasespace(args) => cmd_phasespace(args),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Invalid { .. } | Error::Json(_) => 1,
        Error::Io(_) => 2,
        Error::NotIdentifiable(_)
        | Error::NoUnbiasedEstimator(_)
        | Error::SchemeNotIdentifiable(_) => 3,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}
