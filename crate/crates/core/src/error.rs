use std::path::PathBuf;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("rate {rate} is outside the domain of the utility ({reason})")]
    Domain { rate: f64, reason: &'static str },

    #[error("shadow price must be finite and > 0, got {0}")]
    InvalidPrice(f64),

    #[error("solver failed: {0}")]
    SolverFailure(String),

    #[error("sector {sector} is degenerate: {reason}")]
    DegenerateSector { sector: String, reason: &'static str },

    #[error("domain {domain} has a zero aggregate bid across all sectors")]
    DegenerateDomain { domain: String },

    #[error("{}: parse error at line {line}: {message}", .path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid scenario entry `{entry}`{}: {message}", at_line(*.line))]
    Validation {
        entry: String,
        line: Option<usize>,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at_line(line: Option<usize>) -> String {
    line.map(|l| format!(" (line {l})")).unwrap_or_default()
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
