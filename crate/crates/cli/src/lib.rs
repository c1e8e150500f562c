//! Command-line front end for the `sun-einstein` library: argument
//! validation, JSON/table/CSV output and the structure-constant cache.

use std::ffi::OsString;

use clap::Parser;

pub mod cache;
pub mod commands;
pub mod config;
pub mod output;

pub use commands::{run, Outcome, Status};
pub use config::{Cli, CommandKind, Format, RunConfig, UsageError, CACHE_ENV};

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Execution {
    fn error(code: Status, msg: String) -> Self {
        Self { stdout: String::new(), stderr: msg, code: code as u8 }
    }
}

/// Parse, validate, run and render; `args[0]` is the program name.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code() as u8;
            let text = e.render().to_string();
            // --help and --version go to stdout with status 0.
            return if code == 0 {
                Execution { stdout: text, stderr: String::new(), code }
            } else {
                Execution { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            return Execution::error(Status::Usage, format!("error: {e}\nsee `sun-einstein --help`\n"))
        }
    };
    let rendered = run(&cfg).and_then(|o| Ok((o.render(cfg.format)?, o.status)));
    match rendered {
        Ok((stdout, status)) => Execution { stdout, stderr: String::new(), code: status as u8 },
        Err(e) => Execution::error(Status::Failure, format!("error: {e:#}\n")),
    }
}

#[cfg(test)]
mod tests;
