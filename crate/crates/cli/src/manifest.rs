use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::settings::{Command, Settings};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one command invocation. Everything except the timestamps is a
/// function of the settings, so replaying `config` reproduces the artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub started: String,
    pub finished: String,
    /// Artifact file names, relative to the output directory.
    pub artifacts: Vec<String>,
}

impl RunManifest {
    pub fn settings(&self) -> Result<Settings> {
        let command: Command = self.command.parse()?;
        let mut s = Settings::new(command);
        for (k, v) in &self.config {
            s.set(k, v)?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))
    }
}
