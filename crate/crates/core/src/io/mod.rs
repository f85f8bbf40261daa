//! Deterministic on-disk formats: JSON with fixed float formatting, CSV,
//! minimal SVG line plots and flat `key = value` configuration files.

mod config;
mod json;
mod svg;

pub use config::{parse_key_values, KeyValues};
pub use json::{fmt_f64, to_json, Document, SCHEMA_VERSION};
pub use svg::{line_plot, Axis, Series};

use std::path::Path;

/// RFC 4180 CSV with a header row.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}
