use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use riesz_lab::cli::{run, Cli, Output};
use riesz_lab::LabError;

fn emit(cli: &Cli, output: Output) -> Result<(), LabError> {
    match (&cli.global.out, output) {
        (Some(path), Output::Text(s)) => std::fs::write(path, s)?,
        (Some(path), Output::Binary(b)) => std::fs::write(path, b)?,
        (None, Output::Text(s)) => std::io::stdout().write_all(s.as_bytes())?,
        (None, Output::Binary(_)) => return Err(LabError::invalid("binary output needs --out")),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        for note in &outcome.notes {
            eprintln!("{note}");
        }
        let status = outcome.status;
        emit(&cli, outcome.output).map(|_| status)
    });
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
