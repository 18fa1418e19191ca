//! Command-line layer over `dirac-core`: argument parsing, output encodings
//! and the verification suites.

pub mod args;
pub mod commands;
pub mod output;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use dirac_core::DiracError;

use crate::args::{Cli, Command};
use crate::output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("verification failed")]
    VerifyFailed,
}

impl From<DiracError> for CliError {
    fn from(e: DiracError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn open(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = commands::physical_config(cli.z, cli.alpha)?;
    let out = cli.out.as_deref();
    let table = match &cli.command {
        Command::Spectrum(a) => commands::spectrum(cfg, a)?,
        Command::State(a) => commands::state(cfg, a)?,
        Command::Field(a) => commands::field(cfg, a)?,
        Command::Oracle(a) => commands::oracle(cfg, a)?,
        Command::Verify(a) => {
            if cli.format == Some(Format::Csv) {
                return Err(CliError::Config("verify writes JSON only".into()));
            }
            let report = verify::run(cfg, a)?;
            let mut w = open(out)?;
            serde_json::to_writer_pretty(&mut w, &report).map_err(|e| CliError::Io(e.into()))?;
            writeln!(w)?;
            w.flush()?;
            return if report.pass { Ok(()) } else { Err(CliError::VerifyFailed) };
        }
    };
    let default = if matches!(cli.command, Command::Field(_)) { Format::Csv } else { Format::Json };
    let mut w = open(out)?;
    table.write(cli.format.unwrap_or(default), &mut w)?;
    w.flush()?;
    Ok(())
}
