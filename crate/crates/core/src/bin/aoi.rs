use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aoi_online::experiment::{load_config, run, ExperimentKind, RunConfig};
use aoi_online::record::OutputFormat;
use aoi_online::Error;

#[derive(Parser)]
#[command(name = "aoi", version, about = "Online AoI monitoring and scheduling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-source threshold learning (FTPL, EXP3).
    Single(Args),
    /// Multi-source scheduling (FPWL, FDWL, max-AoI).
    Multi(Args),
    /// Mobility tracking (Levy or adversarial motion).
    Mobility(Args),
    /// Exhaustive best schedule for one epoch.
    Oracle(Args),
    /// Observed regret against the theoretical bounds.
    Bounds(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Repeatable; overrides the config's seed list.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Defaults to the config's output path, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Cap on enumerated schedules.
    #[arg(long)]
    budget: Option<u64>,
}

fn execute(kind: ExperimentKind, args: Args) -> Result<(), Error> {
    let mut config = match &args.config {
        Some(path) => load_config(path, kind)?,
        None => RunConfig::default().resolve(kind)?,
    };
    if !args.seeds.is_empty() {
        config.seeds = args.seeds;
    }
    if args.budget.is_some() {
        config.budget = args.budget;
    }
    let format = match &args.format {
        Some(f) => f.parse()?,
        None => config.output.format.unwrap_or(OutputFormat::Csv),
    };
    let bytes = run(kind, &config)?.to_bytes(format);
    match args.out.or(config.output.path) {
        Some(path) => std::fs::write(&path, bytes).map_err(|source| Error::Io { path, source }),
        None => std::io::stdout().write_all(&bytes).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (kind, args) = match cli.command {
        Command::Single(a) => (ExperimentKind::Single, a),
        Command::Multi(a) => (ExperimentKind::Multi, a),
        Command::Mobility(a) => (ExperimentKind::Mobility, a),
        Command::Oracle(a) => (ExperimentKind::Oracle, a),
        Command::Bounds(a) => (ExperimentKind::Bounds, a),
    };
    match execute(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
