//! Tables and atomic file output.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::args::Format;
use crate::CliError;

/// A plot-ready table. δ weights travel as header comments in CSV and as
/// a field in JSON, never as sampled values.
#[derive(Debug, Serialize)]
pub struct Table {
    pub quantity: String,
    pub model: Option<serde_json::Value>,
    pub singular_weight: Option<f64>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                let _ = writeln!(s, "# quantity={}", self.quantity);
                if let Some(m) = &self.model {
                    let _ = writeln!(s, "# model={m}");
                }
                if let Some(w) = self.singular_weight {
                    let _ = writeln!(s, "# singular_weight={w:e}");
                }
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

/// Writes `text` to `path` through a temporary file in the same directory
/// followed by a rename, or to standard output when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", p.display()));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.as_file().sync_all().map_err(io)?;
            tmp.persist(p).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}
