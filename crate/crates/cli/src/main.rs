//! `coarselab` command-line front end.
//!
//! Exit codes: 0 computed and every asserted property held, 1 property
//! violation, 2 usage or precondition error, 3 budget exceeded.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::SystemTime;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use coarselab::Error;
use commands::Status;
use output::Sink;

#[derive(Parser, Debug)]
#[command(
    name = "coarselab",
    version,
    about = "Coarse-geometry experiments on lazily generated graphs"
)]
pub struct Cli {
    /// Write the JSON report here instead of stdout; a `.log` sidecar with
    /// timings is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the command's series table as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Write a gnuplot script that plots the CSV table.
    #[arg(long, global = true)]
    gnuplot: Option<PathBuf>,
    /// Worker threads (default: one per core). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every sampled vertex list.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: commands::Command,
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Budget(_)) => 3,
        Some(
            Error::GeodesicAudit { .. }
            | Error::TreeEmbedding { .. }
            | Error::Chain { .. }
            | Error::Asymmetric { .. }
            | Error::DegreeExceeded { .. }
            | Error::ThresholdCeiling { .. },
        ) => 1,
        _ => 2,
    }
}

/// Clap's message, followed by the usage line of the subcommand involved.
fn usage_error(e: clap::Error, argv: &[String]) -> ExitCode {
    if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        e.exit();
    }
    let msg = e.render().to_string();
    eprint!("{msg}");
    if !msg.contains("Usage:") {
        let mut cmd = Cli::command();
        cmd.build();
        let usage = match argv.get(1).and_then(|s| cmd.find_subcommand_mut(s)) {
            Some(sub) => sub.render_usage(),
            None => cmd.render_usage(),
        };
        eprintln!("\n{usage}");
    }
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let started = SystemTime::now();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => return usage_error(e, &argv),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    let threads = pool.current_num_threads();
    let sink = Sink {
        out: cli.out.clone(),
        csv: cli.csv.clone(),
        gnuplot: cli.gnuplot.clone(),
    };
    let result = pool.install(|| commands::run(&cli.command, &sink, cli.seed));
    let code = match result {
        Ok(Status::Pass) => 0,
        Ok(Status::Violation(msg)) => {
            eprintln!("property violated: {msg}");
            1
        }
        Ok(Status::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            3
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    };
    if let Some(out) = &cli.out {
        if let Err(e) = output::write_sidecar(out, &argv, threads, started, code as i32) {
            eprintln!("warning: {e:#}");
        }
    }
    ExitCode::from(code)
}
