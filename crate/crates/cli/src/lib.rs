//! Scenario runner behind the `dsk` binary.

pub mod grid;
pub mod run;
pub mod scenario;

use thiserror::Error;

pub use grid::{grid_csv, grid_values};
pub use run::{evidence_csv, execute, report, Outcome, Status};
pub use scenario::{Kind, Scenario, Task};

/// Failures that end a run with exit code 1.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
