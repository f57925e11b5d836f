use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// What produced a report. Everything except the timestamps goes into the
/// digest that reports carry, so repeated runs give identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
    pub prng: &'static str,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub digest: String,
}

#[derive(Serialize)]
struct Stable<'a> {
    toolkit: &'a str,
    version: &'a str,
    command_line: &'a [String],
    seed: u64,
    inputs: &'a [InputDigest],
    outputs: &'a [String],
    prng: &'a str,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn start(command_line: Vec<String>, seed: u64) -> RunManifest {
        RunManifest {
            toolkit: "qkit",
            version: env!("CARGO_PKG_VERSION"),
            command_line,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            prng: qkit_core::sim::PRNG_ALGORITHM,
            started_unix: unix_now(),
            finished_unix: 0,
            digest: String::new(),
        }
    }

    /// Reads an input file and records its digest.
    pub fn read_input(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes =
            std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes)
            .map_err(|_| CliError::Input(format!("{}: not valid UTF-8", path.display())))
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Digest of the reproducible part of the manifest.
    pub fn stable_digest(&self) -> String {
        let stable = Stable {
            toolkit: self.toolkit,
            version: self.version,
            command_line: &self.command_line,
            seed: self.seed,
            inputs: &self.inputs,
            outputs: &self.outputs,
            prng: self.prng,
        };
        sha256_hex(&serde_json::to_vec(&stable).expect("manifest serializes"))
    }

    /// Writes `<primary>.manifest.json` next to the primary output.
    pub fn finish(mut self, primary: &Path) -> Result<PathBuf, CliError> {
        self.finished_unix = unix_now();
        self.digest = self.stable_digest();
        let mut name = primary.as_os_str().to_owned();
        name.push(".manifest.json");
        let path = PathBuf::from(name);
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes");
        std::fs::write(&path, text + "\n")
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}
