//! Command-line front end: argument and config parsing, dispatch and report emission.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Format};
pub use crate::config::{merge_config, parse_config};
pub use crate::error::CliError;

/// Serialized result of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub csv: String,
    pub json: String,
    /// Whitespace-separated parameter lines, for commands that support them.
    pub text: Option<String>,
    /// 0, or 3 when the report documents a failed numerical check.
    pub exit: i32,
    pub note: Option<String>,
}

impl Report {
    pub fn new(csv: String, json: String) -> Self {
        Report { csv, json, text: None, exit: 0, note: None }
    }

    fn body(&self, format: Format) -> Result<&str, CliError> {
        match format {
            Format::Csv => Ok(&self.csv),
            Format::Json => Ok(&self.json),
            Format::Text => self
                .text
                .as_deref()
                .ok_or_else(|| CliError::Validation("--format text is only available for params".into())),
        }
    }
}

/// Runs one command line; returns the process exit code.
pub fn run(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok((code, note)) => {
            if let Some(n) = note {
                let _ = writeln!(err, "{n}");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(i32, Option<String>), CliError> {
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        // the global pool can only be built once per process; later calls keep the first size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let report = commands::dispatch(cli)?;
    let body = report.body(cli.global.format)?;
    match &cli.global.out {
        Some(path) => std::fs::write(path, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok((report.exit, report.note))
}
