//! Run manifests: a small provenance record written next to every output
//! file, so a result can always be traced back to the exact inputs and
//! invocation that produced it.

use chrono::{SecondsFormat, Utc};
use mmbeam::digest::sha256_file;
use mmbeam::error::{Error, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub struct RunManifest {
    command: String,
    seed: u64,
    /// path → sha256, sorted by path.
    inputs: BTreeMap<String, String>,
}

impl RunManifest {
    /// Captures the current process invocation verbatim.
    pub fn new(seed: u64) -> Self {
        RunManifest {
            command: std::env::args().collect::<Vec<_>>().join(" "),
            seed,
            inputs: BTreeMap::new(),
        }
    }

    /// Digests one consumed input file. Call for every file the command
    /// reads; skipping silently would break the provenance guarantee.
    pub fn record_input(&mut self, path: &Path) -> Result<()> {
        self.inputs
            .insert(path.display().to_string(), sha256_file(path)?);
        Ok(())
    }

    fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command = {}\n", self.command));
        out.push_str(&format!("tool_version = {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!(
            "timestamp = {}\n",
            Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
        ));
        for (path, digest) in &self.inputs {
            out.push_str(&format!("input = {path} sha256:{digest}\n"));
        }
        out
    }

    /// Writes the manifest to the given path.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(|e| Error::io(path, e))
    }

    /// Writes the manifest next to an output file, as `<output>.manifest`.
    pub fn write_beside(&self, output: &Path) -> Result<()> {
        self.write_to(&manifest_path(output))
    }
}

/// `<output>.manifest`, appended to the full file name so `a.csv` and
/// `a.txt` never collide.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest");
    output.with_file_name(name)
}
