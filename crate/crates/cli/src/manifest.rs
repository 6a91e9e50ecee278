//! Machine-readable run manifests: every subcommand emits one next to its
//! data artifacts. Re-running with the same parameters reproduces the data
//! files byte-for-byte; only the wall-clock field of the manifest varies.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub library_version: String,
    pub budget: u64,
    pub wall_clock_ms: u128,
    /// Which computation supplied each output (enumerated / analytic /
    /// fitted / exact-rational).
    pub branch_labels: Vec<String>,
    pub partial_results: bool,
}

pub struct RunWriter {
    out_dir: PathBuf,
    started: Instant,
    manifest: RunManifest,
}

impl RunWriter {
    pub fn new(
        subcommand: &str,
        out_dir: &Path,
        parameters: BTreeMap<String, String>,
        budget: u64,
    ) -> std::io::Result<RunWriter> {
        fs::create_dir_all(out_dir)?;
        Ok(RunWriter {
            out_dir: out_dir.to_path_buf(),
            started: Instant::now(),
            manifest: RunManifest {
                subcommand: subcommand.to_string(),
                parameters,
                library_version: env!("CARGO_PKG_VERSION").to_string(),
                budget,
                wall_clock_ms: 0,
                branch_labels: Vec::new(),
                partial_results: false,
            },
        })
    }

    pub fn branch(&mut self, label: &str) {
        self.manifest.branch_labels.push(label.to_string());
    }

    pub fn mark_partial(&mut self) {
        self.manifest.partial_results = true;
    }

    pub fn write_data(&self, name: &str, bytes: &[u8]) -> std::io::Result<PathBuf> {
        let path = self.out_dir.join(name);
        fs::write(&path, bytes)?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> std::io::Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(value).expect("serializable");
        s.push('\n');
        self.write_data(name, s.as_bytes())
    }

    /// Finalizes the manifest file (`<subcommand>.manifest.json`).
    pub fn finish(mut self) -> std::io::Result<()> {
        self.manifest.wall_clock_ms = self.started.elapsed().as_millis();
        let name = format!("{}.manifest.json", self.manifest.subcommand);
        let mut s = serde_json::to_string_pretty(&self.manifest).expect("serializable");
        s.push('\n');
        fs::write(self.out_dir.join(name), s)
    }
}
