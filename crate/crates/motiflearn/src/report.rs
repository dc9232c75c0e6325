//! The discovery report and its JSON / CSV encodings.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{MotifError, Result};
use crate::io::{format_f64, write_atomic, SeriesFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Gradient-ascent learned motifs.
    Learn,
    /// Exhaustive segment search.
    Brute,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Learn => "learn",
            Method::Brute => "brute",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Resolved run configuration echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub input: String,
    pub format: SeriesFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    pub series_len: usize,
    /// Motif / segment length `L`.
    pub length: usize,
    pub stride: usize,
    /// Number of segments `J`.
    pub segments: usize,
    /// Number of motifs `K`.
    pub motifs: usize,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub percentile: Option<f64>,
    pub sampled_pairs: usize,
    pub alphas: Vec<f64>,
    pub eta: f64,
    pub iters: usize,
    pub restarts: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub objective: Vec<f64>,
    pub smooth_frequency: Vec<f64>,
    pub smooth_violation: Vec<f64>,
}

/// Hard frequency reached by the learner for one smoothness value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaOutcome {
    pub alpha: f64,
    pub total_frequency: usize,
    pub diverse: bool,
    pub restart_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub name: Method,
    /// `K x L` motif values.
    pub motifs: Vec<Vec<f64>>,
    pub frequencies: Vec<usize>,
    pub total_frequency: usize,
    /// Counted segment indices per motif.
    pub matches: Vec<Vec<usize>>,
    pub hard_violation: f64,
    /// `short_selection` (brute) or `nonzero_violation` (learn).
    pub flags: Vec<String>,
    /// Segment rows the brute-force motifs were copied from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segment_indices: Option<Vec<usize>>,
    /// Winning smoothness value of the learner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restart_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha_grid: Vec<AlphaOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscoveryReport {
    pub config: ReportConfig,
    pub methods: Vec<MethodReport>,
}

impl DiscoveryReport {
    pub fn method(&self, method: Method) -> Option<&MethodReport> {
        self.methods.iter().find(|m| m.name == method)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| MotifError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| MotifError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// `(method, motif_index, frequency)` table.
    pub fn frequency_csv(&self) -> String {
        let mut out = String::from("method,motif_index,frequency\n");
        for m in &self.methods {
            for (k, f) in m.frequencies.iter().enumerate() {
                let _ = writeln!(out, "{},{k},{f}", m.name.name());
            }
        }
        out
    }

    /// One motif per row: `method,motif_index,v0,v1,...`.
    pub fn motif_csv(&self) -> String {
        let len = self.config.length;
        let mut out = String::from("method,motif_index");
        for l in 0..len {
            let _ = write!(out, ",v{l}");
        }
        out.push('\n');
        for m in &self.methods {
            for (k, motif) in m.motifs.iter().enumerate() {
                let _ = write!(out, "{},{k}", m.name.name());
                for v in motif {
                    out.push(',');
                    out.push_str(&format_f64(*v));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Sibling path holding motif values for the CSV format:
/// `report.csv` becomes `report.motifs.csv`.
pub fn motif_values_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    path.with_file_name(format!("{stem}.motifs.{ext}"))
}

pub fn write_report(report: &DiscoveryReport, path: &Path, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Json => write_atomic(path, report.to_json().as_bytes()),
        ReportFormat::Csv => {
            write_atomic(&motif_values_path(path), report.motif_csv().as_bytes())?;
            write_atomic(path, report.frequency_csv().as_bytes())
        }
    }
}
