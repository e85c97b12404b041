//! Instance files, built-in generators, and report rendering behind the
//! `fairdiv` command.

pub mod commands;
pub mod generators;
pub mod instance_io;
pub mod report;

use fairdiv::adversarial::AdversarialError;
use fairdiv::algorithms::AlgorithmError;
use fairdiv::metrics::MetricsError;
use fairdiv::model::CoreError;
use thiserror::Error;

pub use generators::{generate, parse_algorithm, NamedInstance};
pub use instance_io::{
    parse_allocation, parse_instance, parse_instance_document, serialize_instance,
};
pub use report::{emit_report, Format, RunRecord};

/// Exit status for malformed input or arguments.
pub const EXIT_INVALID: u8 = 2;
/// Exit status when `verify` finds a fairness violation.
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Validation(#[from] CoreError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Adversarial(#[from] AdversarialError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
