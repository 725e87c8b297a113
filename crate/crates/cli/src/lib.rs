//! Library side of the `qnas` command-line tool: settings, run manifests,
//! the correlation study and the command implementations.

pub mod commands;
pub mod error;
pub mod manifest;
pub mod settings;
pub mod study;

pub use commands::{execute, Outcome};
pub use error::{CliError, Result};
pub use manifest::{RunManifest, MANIFEST_FILE};
pub use settings::{Command, Settings};
pub use study::{correlation_study, StudyConfig, StudyReport, StudyRow};
