use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use motivic_cli::{run, Command, RunConfig, EXIT_INPUT};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Monodromy,
    Decompose,
    EtaClass,
    KatoPair,
    ModelAlgebra,
    Dieudonne,
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Monodromy => Command::Monodromy,
            Cmd::Decompose => Command::Decompose,
            Cmd::EtaClass => Command::EtaClass,
            Cmd::KatoPair => Command::KatoPair,
            Cmd::ModelAlgebra => Command::ModelAlgebra,
            Cmd::Dieudonne => Command::Dieudonne,
            Cmd::Verify => Command::Verify,
        }
    }
}

/// Exact computations for strict toric 1-motives. Writes a JSON report;
/// exit code 0 on success, 2 if an invariant fails, 1 on input errors.
#[derive(Debug, Parser)]
#[command(name = "motivic", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Motive JSON: {"r","d","entries":[[{"c","k"}]]}
    #[arg(long)]
    motive: Option<PathBuf>,
    /// Monodromy matrix JSON (d rows of r integers), for `dieudonne`
    #[arg(long)]
    mu: Option<PathBuf>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suite for `verify`: all, or one suite name
    #[arg(long)]
    suite: Option<String>,
    /// Cap on the number n^r of points in model tables
    #[arg(long, default_value_t = 1_000_000)]
    limit_points: u64,
    /// Plain-text rendering instead of JSON
    #[arg(long)]
    human: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MOTIVIC_LOG_LEVEL", "warn")).init();
    let args = Args::parse();
    let cfg = RunConfig {
        command: args.command.into(),
        motive: args.motive,
        mu: args.mu,
        n: args.n,
        p: args.p,
        m: args.m,
        seed: args.seed,
        out: args.out,
        suite: args.suite,
        limit_points: args.limit_points,
    };
    log::debug!("config: {cfg:?}");

    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}", e.to_json());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let body = if args.human {
        report.render_human()
    } else {
        serde_json::to_string_pretty(&report).expect("report is plain data") + "\n"
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("{}", motivic_cli::CliError::usage(format!("cannot write report: {e}")).to_json());
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(report.exit_code() as u8)
}
