//! Command-line front-end for the transfer engine: JSON problem files in,
//! deterministic JSON reports out.
//!
//! Exit codes: 0 when every verification passes, 1 when one fails, 2 for
//! unreadable or inconsistent input.

pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

pub use commands::{cmd_bv, cmd_massey, cmd_transfer, cmd_validate, MasseyOptions, Outcome, Pipeline, ThetaSource};
pub use error::{CliError, Result};

/// Version tag carried by problem files and reports.
pub const SCHEMA: &str = "hptmaster/1";

/// Default word-length truncation.
pub const DEFAULT_MAX_WORD_LENGTH: usize = 4;

/// Default perturbation order for `massey`: room for a quintic operation.
pub const DEFAULT_MASSEY_ORDER: usize = 5;
