//! Output emission: full-precision CSV, the JSON mirror, and run manifests.

use repsim_core::rates::fmt_float;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Reproduction record written next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub created_unix_s: u64,
    pub master_seed: u64,
    /// Resolved command arguments, sufficient to re-run exactly.
    pub args: serde_json::Value,
    /// The resolved scenario document (seed/trial overrides applied).
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        subcommand: &str,
        master_seed: u64,
        args: serde_json::Value,
        config_document: &str,
    ) -> Self {
        let created_unix_s = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            tool: "repsim".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: subcommand.into(),
            created_unix_s,
            master_seed,
            args,
            config: serde_json::from_str(config_document).expect("config document is valid JSON"),
            outputs: Vec::new(),
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Writes the payload to `--out` (plus its manifest) or to stdout.
pub fn emit(
    out: Option<&Path>,
    payload: &str,
    mut manifest: RunManifest,
) -> std::io::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, payload)?;
            manifest.outputs.push(path.display().to_string());
            let mut doc = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            doc.push('\n');
            std::fs::write(manifest_path(path), doc)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(payload.as_bytes())?;
        }
    }
    Ok(())
}

/// One CSV row of full-precision floats.
pub fn csv_row(fields: &[String]) -> String {
    let mut row = fields.join(",");
    row.push('\n');
    row
}

pub fn field(x: f64) -> String {
    fmt_float(x)
}
