use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gpelab_cli::commands::{cmd_rates, cmd_solve, cmd_spectrum, cmd_sweep};
use gpelab_cli::config::{parse_config, RunSpec};
use gpelab_cli::CliError;

/// Ground-state solver laboratory for the 1D Gross-Pitaevskii
/// eigenvector problem.
#[derive(Parser)]
#[command(name = "gpelab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, clap::Args)]
struct CommonArgs {
    /// TOML run specification.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in problem preset (mp1 or mp2); overrides the problem
    /// block of the config file when both are given.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory for CSV files (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the scheme seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scheme and report the converged ground state.
    Solve(CommonArgs),
    /// Measure per-iteration contraction rates against a reference.
    Rates(CommonArgs),
    /// Eigenvalues and predicted rates at the ground state.
    Spectrum(CommonArgs),
    /// Parameter sweep with predicted vs observed rates.
    Sweep(CommonArgs),
}

fn build_spec(args: &CommonArgs) -> Result<RunSpec, CliError> {
    let mut spec = match (&args.config, &args.preset) {
        (Some(path), None) => parse_config(path)?,
        (None, Some(preset)) => RunSpec::preset(preset)?,
        (Some(path), Some(preset)) => {
            let mut spec = parse_config(path)?;
            spec.problem = RunSpec::preset(preset)?.problem;
            spec
        }
        (None, None) => {
            return Err(CliError::Config(
                "either --config or --preset is required".into(),
            ));
        }
    };
    if let Some(seed) = args.seed {
        spec.scheme.seed = seed;
    }
    if let Some(out) = &args.out {
        spec.experiment.output = Some(out.clone());
    }
    spec.validate()?;
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&CommonArgs, fn(&RunSpec) -> Result<(), CliError>) = match &cli.command {
        Command::Solve(a) => (a, cmd_solve),
        Command::Rates(a) => (a, cmd_rates),
        Command::Spectrum(a) => (a, cmd_spectrum),
        Command::Sweep(a) => (a, cmd_sweep),
    };
    let result = build_spec(args).and_then(|spec| run(&spec));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gpelab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
