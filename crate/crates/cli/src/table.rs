//! Numeric result tables and their on-disk formats.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::Format;
use crate::error::{CliError, Result};

/// Who produced a table, from what, and when.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    pub version: String,
    pub timestamp: String,
    pub title: String,
    pub config: Vec<String>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

impl Provenance {
    fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("blochring {}", self.version),
            format!("title: {}", self.title),
            format!("timestamp: {}", self.timestamp),
        ];
        out.extend(self.config.iter().map(|l| format!("config: {l}")));
        out.extend(self.notes.iter().map(|l| format!("note: {l}")));
        out.extend(self.warnings.iter().map(|l| format!("warning: {l}")));
        out
    }
}

/// A rectangular table of `f64` values with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        ResultTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            provenance: Provenance::default(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Renders the table; the output depends only on the table contents.
    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for line in self.provenance.lines() {
            out.push_str("# ");
            out.push_str(&line);
            out.push('\n');
        }
        let sep = match format {
            Format::Csv => ",",
            Format::Plotdata => " ",
        };
        if format == Format::Plotdata {
            out.push_str("# ");
        }
        out.push_str(&self.columns.join(sep));
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                // 17 significant digits: enough to round-trip any f64
                let _ = write!(out, "{v:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn emit(&self, format: Format, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(path, self.render(format)).map_err(|e| CliError::io(path, e))
    }
}

/// Reads back the column names and values of an emitted CSV file.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| CliError::runtime("csv has no header row"))?;
    let columns: Vec<String> = header.split(',').map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|cell| {
                cell.parse::<f64>()
                    .map_err(|e| CliError::runtime(format!("row {n}: `{cell}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != columns.len() {
            return Err(CliError::runtime(format!(
                "row {n} has {} cells, expected {}",
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    Ok((columns, rows))
}
