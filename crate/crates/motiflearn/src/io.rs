//! Series loading and atomic report/series writing.
//!
//! Numbers are parsed with Rust's locale-independent float parser and
//! written with 17 significant digits so a load/write/load cycle is exact.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::Path;

use motiflearn_core::TimeSeries;
use serde::{Deserialize, Serialize};

use crate::error::{MotifError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SeriesFormat {
    /// Whitespace separated numbers, any number per line.
    Plain,
    /// One column of a delimited table; an unparsable first row is a header.
    Csv,
}

fn parse_finite(token: &str) -> Option<f64> {
    token.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn load_series(
    path: &Path,
    format: SeriesFormat,
    column: Option<usize>,
    delimiter: Option<char>,
) -> Result<TimeSeries> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => MotifError::FileNotFound(path.to_path_buf()),
        _ => MotifError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    let parse_err = |line: usize, token: &str| MotifError::Parse {
        path: path.to_path_buf(),
        line,
        token: token.to_string(),
    };

    let mut values = Vec::new();
    let source = match format {
        SeriesFormat::Plain => {
            for (i, line) in text.lines().enumerate() {
                for token in line.split_whitespace() {
                    values.push(parse_finite(token).ok_or_else(|| parse_err(i + 1, token))?);
                }
            }
            path.display().to_string()
        }
        SeriesFormat::Csv => {
            let column = column.unwrap_or(0);
            let delimiter = delimiter.unwrap_or(',');
            let mut first_row = true;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split(delimiter).collect();
                let field = fields.get(column).map(|f| f.trim()).ok_or_else(|| {
                    MotifError::ColumnOutOfRange {
                        path: path.to_path_buf(),
                        line: i + 1,
                        column,
                        width: fields.len(),
                    }
                })?;
                match parse_finite(field) {
                    Some(v) => values.push(v),
                    None if first_row => {}
                    None => return Err(parse_err(i + 1, field)),
                }
                first_row = false;
            }
            format!("{}#{}", path.display(), column)
        }
    };
    if values.is_empty() {
        return Err(MotifError::EmptySeries(path.to_path_buf()));
    }
    Ok(TimeSeries::new(values, source)?)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes one value per line in the plain format.
pub fn write_series(path: &Path, series: &TimeSeries) -> Result<()> {
    let mut out = String::with_capacity(series.len() * 24);
    for v in series.values() {
        out.push_str(&format_f64(*v));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place; `path` is never left half-written.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source| MotifError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
