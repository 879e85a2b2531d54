use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod config;
mod output;

use args::{Cli, Command};

/// Exit status for rejected input: bad flags, configs or preconditions.
const EXIT_VALIDATION: u8 = 1;
/// Exit status for failures detected while computing.
const EXIT_NUMERICAL: u8 = 2;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<filamentlab::Error>() {
        Some(e) if !e.is_validation() => EXIT_NUMERICAL,
        _ if err.is::<commands::CheckFailed>() => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("FILAMENTLAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("FILAMENTLAB_THREADS={v:?} is not a positive integer"))?;
        anyhow::ensure!(n > 0, "FILAMENTLAB_THREADS must be at least 1");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Kida(a) => commands::kida::run(&a),
        Command::Evolve(a) => commands::evolve::run(&a),
        Command::Discrepancy(a) => commands::discrepancy::run(&a),
        Command::Gronwall(a) => commands::experiments::gronwall(&a),
        Command::Weakstrong(a) => commands::experiments::weak_strong(&a),
        Command::Illposed(a) => commands::illposed::run(&a),
        Command::Pointwise(a) => commands::experiments::pointwise(&a),
        Command::Weakform(a) => commands::experiments::weak_form(&a),
        Command::Selftest(a) => commands::selftest::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command = cli.command.name();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            let diagnostic = serde_json::json!({
                "command": command,
                "kind": if code == EXIT_NUMERICAL { "numerical" } else { "validation" },
                "exit_code": code,
                "error": format!("{err:#}"),
            });
            eprintln!("{diagnostic}");
            ExitCode::from(code)
        }
    }
}
