//! CSV-with-metadata and JSON-summary writers.
//!
//! Every run produces a CSV whose `#`-prefixed header echoes all physical
//! parameters, the seed, and the artifact version, plus a companion JSON
//! file (same stem) carrying the summary statistics. Numeric columns are
//! fixed-format so a re-run with the same parameters is byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Ordered key–value metadata block.
#[derive(Default, Clone)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn new(subcommand: &str) -> Self {
        let mut m = Self::default();
        m.push("tool", format!("ktops {}", subcommand));
        m.push("version", VERSION);
        m
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn push_float(&mut self, key: &str, value: f64) {
        self.entries.push((key.to_string(), fmt_float(value)));
    }

    fn header(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "# {} = {}", k, v);
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.entries {
            map.insert(k.clone(), serde_json::Value::String(v.clone()));
        }
        serde_json::Value::Object(map)
    }
}

/// Deterministic float formatting for CSV columns.
pub fn fmt_float(x: f64) -> String {
    format!("{:.12e}", x)
}

/// Write a CSV: metadata header, column-name row, then rows.
pub fn write_csv(
    path: &Path,
    meta: &Metadata,
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> std::io::Result<()> {
    let mut body = meta.header();
    let _ = writeln!(body, "# columns: {}", columns.join(","));
    let _ = writeln!(body, "{}", columns.join(","));
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        let _ = writeln!(body, "{}", row.join(","));
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, body)
}

/// Companion JSON path: same stem, `.json` extension.
pub fn json_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Write the JSON summary next to the CSV.
pub fn write_summary(csv_path: &Path, summary: serde_json::Value) -> std::io::Result<()> {
    let path = json_path(csv_path);
    let text = serde_json::to_string_pretty(&summary).expect("JSON serialization");
    fs::write(path, text + "\n")
}
