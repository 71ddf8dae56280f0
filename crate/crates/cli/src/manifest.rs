//! Run manifests written next to every output file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use coexact::spectrum::sha256_hex;
use coexact::Error;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: String,
    pub tool_version: String,
    pub threads: usize,
    pub parameters: Value,
    /// SHA-256 of each input file.
    pub inputs: BTreeMap<String, String>,
    /// SHA-256 of each output file.
    pub outputs: BTreeMap<String, String>,
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(parameters: Value) -> Self {
        let command_line = std::env::args().collect::<Vec<_>>().join(" ");
        Self {
            command_line,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            threads: rayon::current_num_threads(),
            parameters,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> coexact::Result<()> {
        let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(())
    }

    /// Writes `contents` to `path` and records its hash.
    pub fn write_output(&mut self, path: &Path, contents: &str) -> coexact::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        }
        fs::write(path, contents).map_err(|e| io_error(path, e))?;
        self.outputs
            .insert(path.display().to_string(), sha256_hex(contents.as_bytes()));
        Ok(())
    }

    /// Saves the manifest as `<anchor>.manifest.json` and returns its path.
    pub fn save_beside(&self, anchor: &Path) -> coexact::Result<PathBuf> {
        let mut name = anchor.as_os_str().to_owned();
        name.push(".manifest.json");
        let path = PathBuf::from(name);
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|e| io_error(&path, e))?;
        Ok(path)
    }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}
