//! Output directory with atomically written CSV files and an optional JSON index.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexEntry {
    pub file: String,
    pub description: String,
    pub columns: Vec<String>,
    pub rows: usize,
}

#[derive(Debug, Serialize)]
struct Index<'a> {
    command: &'a str,
    seed: u64,
    files: &'a [IndexEntry],
}

/// Every file starts with the resolved configuration as `#` comment lines.
pub struct Output {
    dir: PathBuf,
    command: String,
    seed: u64,
    header: String,
    entries: Vec<IndexEntry>,
}

impl Output {
    pub fn new(dir: &Path, command: &str, seed: u64, resolved_toml: &str) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("output directory {}: {e}", dir.display())))?;
        let mut header = format!("# becmetro {command}\n");
        for line in resolved_toml.lines() {
            header.push_str("# ");
            header.push_str(line);
            header.push('\n');
        }
        Ok(Self { dir: dir.to_path_buf(), command: command.into(), seed, header, entries: Vec::new() })
    }

    pub fn entries(&self) -> &[IndexEntry] {
        &self.entries
    }

    pub fn write_csv(&mut self, file: &str, description: &str, columns: &str, rows: &[String]) -> Result<(), CliError> {
        let mut text = self.header.clone();
        text.push_str(columns);
        text.push('\n');
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        self.write_atomic(file, text.as_bytes())?;
        self.entries.push(IndexEntry {
            file: file.into(),
            description: description.into(),
            columns: columns.split(',').map(String::from).collect(),
            rows: rows.len(),
        });
        Ok(())
    }

    pub fn write_index(&self) -> Result<(), CliError> {
        let index = Index { command: &self.command, seed: self.seed, files: &self.entries };
        let json = serde_json::to_string_pretty(&index).map_err(|e| CliError::Io(e.to_string()))?;
        self.write_atomic("index.json", json.as_bytes())
    }

    fn write_atomic(&self, file: &str, bytes: &[u8]) -> Result<(), CliError> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.dir.join(file)).map_err(|e| CliError::Io(e.to_string()))?;
        Ok(())
    }
}

/// `""` for a missing value, otherwise the shortest round-trip form.
pub fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}
