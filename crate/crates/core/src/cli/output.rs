use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use super::{CliError, CliResult};
use crate::io::{line_plot, to_json, Axis, Series};

/// Buffered command output. Nothing touches the file system until
/// [`Output::flush`], so failing commands leave no partial files.
#[derive(Debug)]
pub struct Output {
    dir: Option<PathBuf>,
    summary: Option<String>,
    files: Vec<(String, Vec<u8>)>,
}

impl Output {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir, summary: None, files: Vec::new() }
    }

    /// JSON document printed on stdout and saved as `<name>.json`.
    pub fn json<T: Serialize>(&mut self, name: &str, kind: &str, data: &T) {
        let text = to_json(kind, data);
        self.summary = Some(text.clone());
        self.files.push((format!("{name}.json"), text.into_bytes()));
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(|e| CliError::Validation(e.to_string()))?;
        for r in rows {
            w.write_record(r).map_err(|e| CliError::Validation(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Validation(e.to_string()))?;
        self.files.push((format!("{name}.csv"), bytes));
        Ok(())
    }

    pub fn svg(&mut self, name: &str, title: &str, labels: (&str, &str), axes: (Axis, Axis), series: &[Series]) {
        let text = line_plot(title, labels.0, labels.1, axes.0, axes.1, series);
        self.files.push((format!("{name}.svg"), text.into_bytes()));
    }

    /// Write a single file immediately (diagnostics of failed runs).
    pub fn write_now(&self, name: &str, bytes: &[u8]) -> CliResult<()> {
        if let Some(dir) = &self.dir {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), bytes)?;
        }
        Ok(())
    }

    pub fn flush(self) -> CliResult<()> {
        if let Some(dir) = &self.dir {
            std::fs::create_dir_all(dir)?;
            for (name, bytes) in &self.files {
                std::fs::write(dir.join(name), bytes)?;
            }
        }
        if let Some(s) = &self.summary {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(s.as_bytes())?;
        }
        Ok(())
    }
}
