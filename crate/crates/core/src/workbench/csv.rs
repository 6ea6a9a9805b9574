use std::io::{self, Write};
use std::path::Path;

/// Column-oriented numeric table with `key=value` metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn new(columns: &[&str]) -> Self {
        Dataset {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// 17 significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// `#key=value` header lines, a column row, then numeric rows; LF endings.
pub fn write_csv(dataset: &Dataset, mut out: impl Write) -> io::Result<()> {
    if dataset.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "refusing to write an empty dataset",
        ));
    }
    for (k, v) in &dataset.metadata {
        let v = v.replace(['\n', '\r'], " ");
        writeln!(out, "#{k}={v}")?;
    }
    writeln!(out, "{}", dataset.columns.join(","))?;
    for row in &dataset.rows {
        let line: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()
}

pub fn emit_csv(dataset: &Dataset, path: &Path) -> io::Result<()> {
    if dataset.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "refusing to write an empty dataset",
        ));
    }
    let mut buf = Vec::new();
    write_csv(dataset, &mut buf)?;
    std::fs::write(path, buf)
}
