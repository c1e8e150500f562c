use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sun_einstein::Scheme;

/// Environment variable naming the structure-constant cache directory.
pub const CACHE_ENV: &str = "SUN_EINSTEIN_CACHE";

#[derive(Debug, Parser)]
#[command(name = "sun-einstein", version, about = "Left-invariant Einstein metrics on SU(n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a generator basis and report its validation data.
    Basis(CommonArgs),
    /// Evaluate the Einstein residual at given metric constants.
    Check(CommonArgs),
    /// Find Einstein metrics of one ansatz.
    Solve(CommonArgs),
    /// Enumerate and class Einstein metrics over all configurations for n.
    Catalog(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Ansatz: 1 (three classes) or 2 (SU(p) x SU(q) split).
    #[arg(long)]
    pub scheme: Option<u8>,
    #[arg(long)]
    pub n: usize,
    /// Split parameter, Scheme 2 only.
    #[arg(long)]
    pub p: Option<usize>,
    /// Per-class metric constants, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    /// Einstein residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 400)]
    pub starts: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Basis,
    Check,
    Solve,
    Catalog,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Basis => "basis",
            CommandKind::Check => "check",
            CommandKind::Solve => "solve",
            CommandKind::Catalog => "catalog",
        }
    }
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(serialize_with = "scheme_number")]
    pub scheme: Option<Scheme>,
    pub n: usize,
    pub p: Option<usize>,
    pub x: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub starts: usize,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

fn scheme_number<S: serde::Serializer>(s: &Option<Scheme>, ser: S) -> Result<S::Ok, S::Error> {
    s.map(Scheme::number).serialize(ser)
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, UsageError> {
        let (kind, args) = match cli.command {
            Command::Basis(a) => (CommandKind::Basis, a),
            Command::Check(a) => (CommandKind::Check, a),
            Command::Solve(a) => (CommandKind::Solve, a),
            Command::Catalog(a) => (CommandKind::Catalog, a),
        };
        Self::validate(kind, args)
    }

    pub fn validate(command: CommandKind, a: CommonArgs) -> Result<Self, UsageError> {
        let cmd = command.name();
        if a.n < 2 {
            return usage(format!("--n must be at least 2 (got {})", a.n));
        }
        let scheme = match (command, a.scheme) {
            (CommandKind::Catalog, Some(_)) => {
                return usage("catalog covers both schemes; drop --scheme")
            }
            (CommandKind::Catalog, None) => None,
            (_, None) => return usage(format!("{cmd} needs --scheme 1 or --scheme 2")),
            (_, Some(k)) => match Scheme::from_number(k) {
                Some(s) => Some(s),
                None => return usage(format!("unknown scheme {k}; use 1 or 2")),
            },
        };
        match (scheme, a.p) {
            (Some(Scheme::One), Some(_)) => return usage("--p applies to --scheme 2 only"),
            (None, Some(_)) => return usage("catalog enumerates every split; drop --p"),
            (Some(Scheme::Two), None) => return usage("--scheme 2 needs --p"),
            (Some(Scheme::Two), Some(p)) if p > a.n => {
                return usage(format!("--p {p} exceeds --n {}", a.n))
            }
            (Some(Scheme::Two), Some(p))
                if command != CommandKind::Basis && (p == 0 || p == a.n) =>
            {
                return usage(format!("--p {p} leaves one block empty; use --scheme 1"))
            }
            _ => {}
        }
        match (command, &a.x) {
            (CommandKind::Check, None) => return usage("check needs --x"),
            (CommandKind::Check, Some(x)) => {
                let want = scheme.map_or(0, Scheme::class_count);
                if x.len() != want {
                    return usage(format!("--x needs {want} values, got {}", x.len()));
                }
                if let Some(v) = x.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                    return usage(format!("--x entries must be positive (got {v})"));
                }
            }
            (_, Some(_)) => return usage(format!("--x is only used by check, not {cmd}")),
            _ => {}
        }
        if let Some(t) = a.tol {
            if !(t.is_finite() && t > 0.0) {
                return usage(format!("--tol must be positive (got {t})"));
            }
        }
        if a.starts == 0 {
            return usage("--starts must be at least 1");
        }
        Ok(Self {
            command,
            scheme,
            n: a.n,
            p: a.p,
            x: a.x,
            tol: a.tol,
            starts: a.starts,
            seed: a.seed,
            format: a.format,
            cache_dir: a.cache_dir,
        })
    }
}
