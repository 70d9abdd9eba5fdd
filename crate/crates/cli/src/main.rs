use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use stiefel_bp_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut progress = |line: &str| eprintln!("{line}");
    let output = match run(&cli, &mut progress) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("stiefel-bp: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &output.text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(output.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("stiefel-bp: {}", CliError::Compute(e));
        return ExitCode::from(1);
    }
    if let Some(msg) = output.failure {
        eprintln!("stiefel-bp: {msg}");
    }
    if output.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
