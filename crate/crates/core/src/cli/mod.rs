//! Verbs of the `critline` binary. Each writes its artifacts into the output
//! directory and returns the overall status; `main` maps it to the exit code.

pub mod config;
mod output;
mod stages;
mod svg;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Status, VerificationReport};

pub use config::{Overrides, RunConfig};
pub use output::{num, write_csv, write_json};
pub use stages::{cmd_check, cmd_compare, cmd_identity, cmd_report, cmd_spectrum, cmd_zeros};

/// Exit code for configuration and usage errors.
pub const EXIT_CONFIG: i32 = 64;

/// Stage artifact names, in report order.
pub const STAGES: [&str; 5] = ["check", "zeros", "identity", "spectrum", "compare"];

/// Common envelope of every `<stage>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageArtifact {
    pub stage: String,
    pub label: String,
    pub eta: String,
    pub status: Status,
    pub reports: Vec<VerificationReport>,
}

impl StageArtifact {
    fn new(stage: &str, cfg: &RunConfig, reports: Vec<VerificationReport>) -> Self {
        let status = reports.iter().map(|r| r.status()).max().unwrap_or(Status::Inconclusive);
        StageArtifact {
            stage: stage.into(),
            label: cfg.spec.label.clone(),
            eta: cfg.eta.name().into(),
            status,
            reports,
        }
    }
}

/// Exit code for a library error.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::MissingArtifact(_) => EXIT_CONFIG,
        _ => Status::Inconclusive.exit_code(),
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}
