use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tcqsim_cli::{execute, parse_config_for, render_csv, Command};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Spectrum,
    Chi,
    ZzSweep,
    TransmonBaseline,
    Calibrate,
    Rip,
    Ramsey,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Chi => Command::Chi,
            Cmd::ZzSweep => Command::ZzSweep,
            Cmd::TransmonBaseline => Command::TransmonBaseline,
            Cmd::Calibrate => Command::Calibrate,
            Cmd::Rip => Command::Rip,
            Cmd::Ramsey => Command::Ramsey,
        }
    }
}

/// Charge-basis TCQ simulator.
#[derive(Debug, Parser)]
#[command(name = "tcqsim", version)]
struct Cli {
    command: Cmd,

    /// Run configuration (key = value lines with [block] headers)
    #[arg(long)]
    config: PathBuf,

    /// CSV destination; overrides `output` in the config, stdout if neither is set
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps
    #[arg(long, env = "TCQSIM_THREADS")]
    threads: Option<usize>,
}

fn fail(module: &str, message: impl std::fmt::Display) -> ExitCode {
    // one machine-readable line on stderr
    eprintln!("error\tmodule={module}\t{message}");
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => return fail("io", format_args!("{}: {e}", cli.config.display())),
    };
    let config = match parse_config_for(&text, Some(cli.command.into())) {
        Ok(c) => c,
        Err(e) => return fail("config", format_args!("{}: {e}", cli.config.display())),
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            return fail("config", format_args!("thread pool: {e}"));
        }
    }
    let table = match execute(&config) {
        Ok(t) => t,
        Err(e) => return fail(e.module(), e),
    };
    let stamp = chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string();
    let csv = match render_csv(&table, Some(&stamp)) {
        Ok(c) => c,
        Err(e) => return fail(e.module(), e),
    };
    let out = cli
        .out
        .or_else(|| config.output.as_ref().map(PathBuf::from));
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, csv) {
                return fail("io", format_args!("{}: {e}", path.display()));
            }
        }
        None => print!("{csv}"),
    }
    ExitCode::SUCCESS
}
