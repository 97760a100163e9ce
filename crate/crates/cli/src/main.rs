use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use grover_slocc::experiments::{run, ExperimentConfig, ExperimentKind, OutputFormat, OutputSection};
use grover_slocc::Error;

/// Runs Grover/SLOCC experiments from TOML configs and writes CSV (and
/// optionally SVG) artifacts.
#[derive(Parser, Debug)]
#[command(name = "grover-slocc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form and gate-level Grover states with their coefficients.
    Simulate(Common),
    /// Orbit of each Grover state in a 3-factor format.
    Classify(Common),
    /// Normalized hyperdeterminant along the Grover trajectory.
    DeltaCurve(Common),
    /// Geometric measure of entanglement along the trajectory, and its peak.
    GmeCurve(Common),
    /// Normalized relative dimension of the first secant variety.
    Nrd(Common),
    /// Golden checks: normal forms and the marked-set tables.
    Tables(Common),
    /// GME peak location for symmetric marked sets over several sizes.
    PeakScan(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Experiment config (TOML). Optional for `tables`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; defaults to the config's `output.dir`, then `.`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the output format.
    #[arg(long, value_parser = ["csv", "csv+svg"])]
    format: Option<String>,
}

impl Command {
    fn split(&self) -> (ExperimentKind, &Common) {
        match self {
            Command::Simulate(c) => (ExperimentKind::Simulate, c),
            Command::Classify(c) => (ExperimentKind::Classify, c),
            Command::DeltaCurve(c) => (ExperimentKind::DeltaCurve, c),
            Command::GmeCurve(c) => (ExperimentKind::GmeCurve, c),
            Command::Nrd(c) => (ExperimentKind::Nrd, c),
            Command::Tables(c) => (ExperimentKind::Tables, c),
            Command::PeakScan(c) => (ExperimentKind::PeakScan, c),
        }
    }
}

fn load(kind: ExperimentKind, args: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::parse_unvalidated(&text)?
        }
        None => ExperimentConfig::new(kind),
    };
    if cfg.experiment != kind {
        return Err(Error::Config(format!("config is for `{}`, not `{kind}`", cfg.experiment)));
    }
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if let Some(f) = &args.format {
        cfg.output.get_or_insert_with(OutputSection::default).format = f.parse::<OutputFormat>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (kind, args) = cli.command.split();
    let cfg = match load(kind, args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let dir = args.out.clone().or_else(|| cfg.output().dir).unwrap_or_else(|| PathBuf::from("."));
    let output = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match output.write_to(&dir) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    println!("{}: {}", cfg.experiment, output.summary);
    if output.golden_failures > 0 {
        eprintln!("{} golden check(s) failed", output.golden_failures);
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
