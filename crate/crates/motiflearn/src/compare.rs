//! Learned-vs-searched comparison table across many reports.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{MotifError, Result};
use crate::report::{DiscoveryReport, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Learn,
    Brute,
    Tie,
}

impl Winner {
    fn label(self) -> &'static str {
        match self {
            Winner::Learn => "LM",
            Winner::Brute => "BFM",
            Winner::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub dataset: String,
    pub motifs: usize,
    pub length: usize,
    pub percentile: Option<f64>,
    pub brute_total: usize,
    pub learn_total: usize,
    pub winner: Winner,
    /// `(LM - BFM) / BFM`; undefined when BFM found nothing.
    pub improvement: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSummary {
    pub learn_wins: usize,
    pub brute_wins: usize,
    pub ties: usize,
    pub mean_improvement: f64,
    /// Sample standard deviation; 0 with fewer than two defined improvements.
    pub sd_improvement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
    pub summary: Option<ComparisonSummary>,
}

pub const HEADER: &str = "dataset,K,L,pct,bfm_total,lm_total,winner,improvement,improvement_sd";

fn dataset_name(input: &str) -> String {
    Path::new(input)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| input.to_string())
}

pub fn compare_row(dataset: String, motifs: usize, length: usize, percentile: Option<f64>, brute_total: usize, learn_total: usize) -> ComparisonRow {
    let winner = match learn_total.cmp(&brute_total) {
        std::cmp::Ordering::Greater => Winner::Learn,
        std::cmp::Ordering::Less => Winner::Brute,
        std::cmp::Ordering::Equal => Winner::Tie,
    };
    let improvement = (brute_total > 0)
        .then(|| (learn_total as f64 - brute_total as f64) / brute_total as f64);
    ComparisonRow {
        dataset,
        motifs,
        length,
        percentile,
        brute_total,
        learn_total,
        winner,
        improvement,
    }
}

pub fn summarize(rows: &[ComparisonRow]) -> Option<ComparisonSummary> {
    if rows.is_empty() {
        return None;
    }
    let count = |w| rows.iter().filter(|r| r.winner == w).count();
    let imps: Vec<f64> = rows.iter().filter_map(|r| r.improvement).collect();
    let n = imps.len() as f64;
    let mean = if imps.is_empty() { 0.0 } else { imps.iter().sum::<f64>() / n };
    let sd = if imps.len() < 2 {
        0.0
    } else {
        (imps.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Some(ComparisonSummary {
        learn_wins: count(Winner::Learn),
        brute_wins: count(Winner::Brute),
        ties: count(Winner::Tie),
        mean_improvement: mean,
        sd_improvement: sd,
    })
}

/// One row per report, each of which must hold both methods.
pub fn compare_table(reports: &[DiscoveryReport]) -> Result<ComparisonTable> {
    let mut rows = Vec::with_capacity(reports.len());
    for (index, r) in reports.iter().enumerate() {
        let total = |m: Method| {
            r.method(m)
                .map(|b| b.total_frequency)
                .ok_or_else(|| MotifError::MissingMethod {
                    index,
                    method: m.name().to_string(),
                })
        };
        rows.push(compare_row(
            dataset_name(&r.config.input),
            r.config.motifs,
            r.config.length,
            r.config.percentile,
            total(Method::Brute)?,
            total(Method::Learn)?,
        ));
    }
    let summary = summarize(&rows);
    Ok(ComparisonTable { rows, summary })
}

impl ComparisonTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},",
                r.dataset,
                r.motifs,
                r.length,
                r.percentile.map(|p| p.to_string()).unwrap_or_default(),
                r.brute_total,
                r.learn_total,
                r.winner.label(),
                r.improvement.map(|v| v.to_string()).unwrap_or_default(),
            );
        }
        if let Some(s) = &self.summary {
            let _ = writeln!(
                out,
                "summary,,,,,,LM={};BFM={};tie={},{},{}",
                s.learn_wins, s.brute_wins, s.ties, s.mean_improvement, s.sd_improvement
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insect_b_row() {
        let r = compare_row("insect".into(), 3, 500, Some(1.0), 44, 151);
        assert_eq!(r.winner, Winner::Learn);
        assert!((r.improvement.unwrap() - 107.0 / 44.0).abs() < 1e-12);
        assert!((r.improvement.unwrap() - 2.432).abs() < 1e-3);
    }

    #[test]
    fn tie_row() {
        let r = compare_row("x".into(), 3, 100, None, 7, 7);
        assert_eq!(r.winner, Winner::Tie);
        assert_eq!(r.improvement, Some(0.0));
    }

    #[test]
    fn zero_baseline_has_no_improvement() {
        let r = compare_row("x".into(), 3, 100, None, 0, 2);
        assert_eq!(r.winner, Winner::Learn);
        assert_eq!(r.improvement, None);
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = compare_table(&[]).unwrap();
        assert_eq!(t.to_csv(), format!("{HEADER}\n"));
    }

    #[test]
    fn summary_statistics() {
        let rows = vec![
            compare_row("a".into(), 3, 100, Some(1.0), 10, 20),
            compare_row("b".into(), 3, 100, Some(1.0), 10, 10),
            compare_row("c".into(), 3, 100, Some(1.0), 10, 5),
        ];
        let s = summarize(&rows).unwrap();
        assert_eq!((s.learn_wins, s.brute_wins, s.ties), (1, 1, 1));
        // improvements 1, 0, -0.5
        assert!((s.mean_improvement - 0.5 / 3.0).abs() < 1e-12);
        let m: f64 = 0.5 / 3.0;
        let var = ((1.0 - m) * (1.0 - m) + m * m + (-0.5 - m) * (-0.5 - m)) / 2.0;
        assert!((s.sd_improvement - var.sqrt()).abs() < 1e-12);
    }
}
