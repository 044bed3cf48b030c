//! CSV emission and run manifests.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// Fixed 12-significant-digit scientific notation; negative zero prints as zero.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Everything needed to regenerate an output file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, as originally given.
    pub argv: Vec<String>,
    pub out_dir: PathBuf,
    pub parameters: serde_json::Value,
    pub outputs: Vec<PathBuf>,
    pub version: String,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("{} is not a run manifest", path.display()))
    }
}

/// Collects output files for one command and writes a manifest next to each.
pub struct Run {
    pub out_dir: PathBuf,
    command: &'static str,
    argv: Vec<String>,
    started: Instant,
    outputs: Vec<PathBuf>,
}

impl Run {
    pub fn start(out_dir: &Path, command: &'static str, argv: &[String]) -> Result<Self> {
        fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
        let out_dir = fs::canonicalize(out_dir)?;
        Ok(Self { out_dir, command, argv: argv.to_vec(), started: Instant::now(), outputs: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    pub fn table(&mut self, name: &str, table: &Table) -> Result<PathBuf> {
        let path = self.path(name);
        table.write(&path)?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<PathBuf> {
        let path = self.path(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    pub fn finish(self, parameters: serde_json::Value) -> Result<Vec<PathBuf>> {
        let manifest = RunManifest {
            command: self.command.to_string(),
            argv: self.argv,
            out_dir: self.out_dir,
            parameters,
            outputs: self.outputs.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s: self.started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        for out in &self.outputs {
            let mut name = out.file_name().expect("output has a file name").to_os_string();
            name.push(".manifest.json");
            fs::write(out.with_file_name(name), &text)?;
        }
        Ok(self.outputs)
    }
}
