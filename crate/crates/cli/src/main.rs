//! `thintrace`: experiment runner for thin continued-fraction semigroups.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on invalid input,
//! 3 when a size estimate exceeds its budget.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use commands::Command;
use output::{render, Format, Meta};

#[derive(Debug, Parser)]
#[command(
    name = "thintrace",
    version,
    about = "Experiments on thin continued-fraction semigroups of SL₂(ℤ)"
)]
struct Cli {
    /// Write the result here (plus `<path>.manifest.json`) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; tables default to csv, single records to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

enum Failure {
    Library(thintrace::Error),
    Io(io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Library(e) if e.is_budget() => 3,
            Failure::Library(
                thintrace::Error::NonConvergence(_) | thintrace::Error::Construction(_),
            ) => 1,
            Failure::Library(_) => 2,
            Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Library(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Library(thintrace::Error::InvalidInput(
                "--threads must be positive".into(),
            )));
        }
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let start = Instant::now();
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let result = cli.command.run(cli.seed).map_err(Failure::Library)?;
    let wall = start.elapsed().as_secs_f64();
    let config = serde_json::to_value(&cli.command).unwrap_or_default();
    let meta = Meta {
        command: cli.command.name().into(),
        config: config.clone(),
        seed: cli.seed,
        timestamp: timestamp.clone(),
    };
    let format = cli.format.unwrap_or_else(|| result.default_format());
    match &cli.out {
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            render(&result, &meta, format, &mut w).map_err(Failure::Io)?;
            w.flush().map_err(Failure::Io)
        }
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(Failure::Io)?);
            render(&result, &meta, format, &mut w).map_err(Failure::Io)?;
            w.flush().map_err(Failure::Io)?;
            let manifest = json!({
                "inputs": std::env::args().collect::<Vec<_>>(),
                "command": cli.command.name(),
                "config": config,
                "seed": cli.seed,
                "threads": cli.threads.unwrap_or_else(rayon::current_num_threads),
                "format": format,
                "versions": { "thintrace": env!("CARGO_PKG_VERSION") },
                "timestamp": timestamp,
                "wall_time_secs": wall,
                "output": path,
                "rows": result.rows.len(),
            });
            let file = File::create(manifest_path(path)).map_err(Failure::Io)?;
            serde_json::to_writer_pretty(file, &manifest).map_err(|e| Failure::Io(e.into()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thintrace {}: {e}", cli.command.name());
            ExitCode::from(e.code())
        }
    }
}
