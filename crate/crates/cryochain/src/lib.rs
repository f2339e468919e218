//! File formats, run configuration, and command drivers for the `cryochain`
//! binary. The numerics live in `cryochain-core`; this crate owns everything
//! that touches the filesystem: Touchstone ingestion, JSON run configs,
//! deterministic CSV/JSON artifacts, and the sweep harness.

use std::fmt;

pub mod commands;
pub mod config;
pub mod report;
pub mod sweep;
pub mod touchstone;

/// Run failure carrying its process exit code: bad input or configuration
/// maps to 2, a numerical or physical failure discovered while evaluating
/// maps to 1.
#[derive(Debug, Clone, PartialEq)]
pub enum AppError {
    Invalid(String),
    Numerical(String),
}

impl AppError {
    pub fn invalid(msg: impl fmt::Display) -> Self {
        AppError::Invalid(msg.to_string())
    }

    pub fn numerical(msg: impl fmt::Display) -> Self {
        AppError::Numerical(msg.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Invalid(_) => 2,
            AppError::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Invalid(m) | AppError::Numerical(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for AppError {}
