use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use vqsel_cli::{baseline, export_qubo, run, verify, CliError, RunConfig};

/// Prototype selection with k-medoids and KDE/MMD quadratic binary programs.
#[derive(Debug, Parser)]
#[command(name = "vqsel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Select k prototypes and report objective, MMD and scatter as JSON.
    Select(RunConfig),
    /// Check that the MED QUBO on 1 − K equals the KDE QUBO on K.
    Verify(RunConfig),
    /// Run Lloyd-style k-medoids.
    Baseline(RunConfig),
    /// Write the penalized QUBO in sparse `i j value` form.
    ExportQubo(RunConfig),
}

const VERIFICATION_FAILED: u8 = 3;

fn emit(config: &RunConfig, text: &str) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn execute(command: &Command) -> Result<u8, CliError> {
    match command {
        Command::Select(config) => {
            let result = run(config)?;
            emit(config, &json(&result))?;
            let failed = result.equivalence.is_some_and(|e| !e.passed);
            Ok(if failed { VERIFICATION_FAILED } else { 0 })
        }
        Command::Verify(config) => {
            let result = verify(config)?;
            emit(config, &json(&result))?;
            Ok(if result.equivalence.passed { 0 } else { VERIFICATION_FAILED })
        }
        Command::Baseline(config) => {
            emit(config, &json(&baseline(config)?))?;
            Ok(0)
        }
        Command::ExportQubo(config) => {
            emit(config, &export_qubo(config)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage mistakes are input errors; 2 is reserved for capacity
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("vqsel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
