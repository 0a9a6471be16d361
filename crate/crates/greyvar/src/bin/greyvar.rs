use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use greyvar::exec::{resolve_threads, THREADS_ENV};
use greyvar::io::read_file;
use greyvar::{presets, run, write_outcome, CliError, Command, ExperimentConfig, Format, Pool, Written};

/// Simulate generalized grey Brownian motion and analyse its p-variation.
#[derive(Parser)]
#[command(name = "greyvar", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Draw sample paths and write them as CSV files plus a binary bundle, or as JSON.
    Sample(RunArgs),
    /// Tabulate p-variation sums across levels and exponents.
    Variation(RunArgs),
    /// Estimate alpha and beta from simulated paths.
    Estimate(RunArgs),
    /// Decide between candidate laws path by path and report a confusion matrix.
    Discriminate(RunArgs),
    /// Run special-function identities and Monte Carlo law checks.
    Validate(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat-key JSON configuration file.
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Use a bundled configuration instead of a file.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Master seed; overrides `master_seed` in the configuration.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Output path (a directory for `sample --format csv`); stdout if absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; falls back to GREYVAR_THREADS, then one per CPU.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let bytes = read_file(path)?;
            let text =
                String::from_utf8(bytes).map_err(|_| CliError::usage(format!("{} is not UTF-8", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        (None, Some(name)) => {
            let json = presets::get(name).ok_or_else(|| {
                let known: Vec<_> = presets::names().collect();
                CliError::usage(format!("unknown preset {name:?}; known: {}", known.join(", ")))
            })?;
            ExperimentConfig::from_json(json)?
        }
        (None, None) => ExperimentConfig::default(),
    };
    cfg.apply_overrides(args.seed, args.out.clone(), args.format);
    Ok(cfg)
}

fn execute(cmd: Command, args: RunArgs) -> Result<bool, CliError> {
    let cfg = load(&args)?;
    let env = std::env::var(THREADS_ENV).ok();
    let pool = Pool::new(resolve_threads(args.threads, env.as_deref())?)?;
    let outcome = run(cmd, &cfg, &pool)?;
    match write_outcome(&outcome)? {
        Written::Stdout(bytes) => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))?;
        }
        Written::Files(files) => {
            eprintln!("greyvar: wrote {} file(s), first {}", files.len(), files[0].display());
        }
    }
    Ok(outcome.report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match cli.command {
        Sub::Sample(a) => (Command::Sample, a),
        Sub::Variation(a) => (Command::Variation, a),
        Sub::Estimate(a) => (Command::Estimate, a),
        Sub::Discriminate(a) => (Command::Discriminate, a),
        Sub::Validate(a) => (Command::Validate, a),
    };
    match execute(cmd, args) {
        Ok(passed) => {
            if !passed {
                eprintln!("greyvar: one or more checks failed");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("greyvar: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
