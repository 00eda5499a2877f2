use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Versions {
    pub toolkit: &'static str,
    pub rng: &'static str,
}

#[derive(Debug, Serialize)]
pub struct OutputEntry {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to re-run a command and check its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Argument vector without the program path.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub versions: Versions,
    pub outputs: Vec<OutputEntry>,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[String], seed: Option<u64>) -> Self {
        Self {
            command: command.to_owned(),
            args: argv.iter().skip(1).cloned().collect(),
            seed,
            versions: Versions {
                toolkit: env!("CARGO_PKG_VERSION"),
                rng: mosaic_core::samplers::RNG_ALGORITHM,
            },
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, path: &Path, contents: &[u8]) {
        self.outputs.push(OutputEntry {
            path: path.display().to_string(),
            sha256: sha256_hex(contents),
        });
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        write_file(path, text.as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

pub fn default_manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
