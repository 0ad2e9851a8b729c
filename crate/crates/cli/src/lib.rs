//! Commands behind the `stabpurity` binary, usable without a process
//! boundary. Every command returns a serializable value or a [`CliError`]
//! carrying its exit code.

pub mod commands;
pub mod schema;

use std::fmt;

use serde::Serialize;

pub use commands::{
    cmd_estimate, cmd_oracle_check, cmd_reproduce_tables, cmd_simulate, replay_instance,
    OracleCheckConfig, Shots,
};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const MALFORMED: i32 = 1;
    pub const INFEASIBLE: i32 = 2;
    pub const TOLERANCE_BREACH: i32 = 3;
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input file, argument or I/O failure.
    Malformed(String),
    /// The record fails `λ_0 >= 0`; carries a structured report.
    Infeasible(Box<schema::InfeasibleReport>),
    /// An oracle comparison exceeded its tolerance.
    ToleranceBreach(Box<schema::OracleSummary>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => exit::MALFORMED,
            CliError::Infeasible(_) => exit::INFEASIBLE,
            CliError::ToleranceBreach(_) => exit::TOLERANCE_BREACH,
        }
    }

    /// Machine-readable body for the error, if it has one.
    pub fn report_json(&self) -> Option<String> {
        match self {
            CliError::Malformed(_) => None,
            CliError::Infeasible(r) => Some(to_json(r)),
            CliError::ToleranceBreach(s) => Some(to_json(s)),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Malformed(msg) => write!(f, "error: {msg}"),
            CliError::Infeasible(r) => write!(
                f,
                "infeasible: sum(a) = {} < n - 2 = {}; the closed form does not apply",
                r.sum_a, r.threshold
            ),
            CliError::ToleranceBreach(s) => write!(
                f,
                "oracle check failed: {} instance(s) outside tolerance",
                s.failures.len()
            ),
        }
    }
}

impl std::error::Error for CliError {}

impl From<stabpurity::Error> for CliError {
    fn from(e: stabpurity::Error) -> Self {
        CliError::Malformed(e.to_string())
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}
