use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// What produced an output file. Embedded copies carry no timestamp, so
/// reruns with the same flags give byte-identical files; the timestamp
/// lives only in the `.manifest.json` sidecar.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, params: Value, seed: Option<u64>) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            params,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            warnings: Vec::new(),
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("manifest serializes")
    }

    /// Writes `<out>.manifest.json` next to a file output; no-op for stdout.
    pub fn write_sidecar(&self, out: &str) -> Result<()> {
        if out == "-" {
            return Ok(());
        }
        let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let mut value = self.to_value();
        value["timestamp_unix"] = Value::from(stamp);
        let path = format!("{out}.manifest.json");
        write_text(&path, &serde_json::to_string_pretty(&value)?)
    }
}

pub fn write_text(out: &str, text: &str) -> Result<()> {
    if out == "-" {
        println!("{text}");
        return Ok(());
    }
    if let Some(dir) = Path::new(out).parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(out, text).with_context(|| format!("writing {out}"))
}

pub fn read_text(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {path}"))
}
