use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use stakit::{Error, Result};
use stakit_cli::{load_config, run_command, write_atomic, write_report, Command};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sub {
    Invert,
    Identities,
    Hertz,
    Maxwell,
    Mde1,
    Mde2,
    Sw,
    WeylGauge,
}

/// Run a verification pipeline from a JSON config.
#[derive(Debug, Parser)]
#[command(name = "stakit", version)]
struct Args {
    #[arg(value_enum)]
    command: Sub,
    #[arg(long)]
    config: PathBuf,
    /// Report path; stdout when neither this nor the config names one.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker cap for the data-parallel inner loops.
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(args: &Args) -> Result<bool> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Config(format!("--threads: {e}")))?;
    }
    let cfg = load_config(&args.config)?;
    let wanted = Command::parse(args.command.to_possible_value().expect("no skipped variants").get_name())
        .expect("subcommands mirror Command");
    if cfg.command != wanted {
        return Err(Error::Config(format!("command: config says `{}` but `{wanted}` was invoked", cfg.command)));
    }
    let report = run_command(&cfg, args.seed)?;
    match args.out.clone().or_else(|| cfg.output.clone().map(PathBuf::from)) {
        Some(path) => write_report(&report, &path)?,
        None => print!("{}", report.to_json()),
    }
    if let Some(csv) = &cfg.csv {
        write_atomic(Path::new(csv), &report.to_csv())?;
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("stakit: {e}");
            ExitCode::from(2)
        }
    }
}
