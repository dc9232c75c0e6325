//! End-to-end discovery runs: load, segment, pick a threshold, run the
//! brute-force baseline and/or the learner over an alpha grid, report.

use std::path::PathBuf;
use std::time::Instant;

use motiflearn_core::{
    brute_force_search, default_stride, extract_segments, learn_restart, percentile_threshold,
    select_restart, LearnConfig, LearnResult, SegmentMatrix, Threshold, TimeSeries,
};
use rayon::prelude::*;

use crate::error::{MotifError, Result};
use crate::io::{load_series, SeriesFormat};
use crate::report::{
    write_report, AlphaOutcome, DiscoveryReport, Method, MethodReport, ReportConfig,
    ReportFormat, TraceReport,
};

#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdSource {
    Explicit(f64),
    /// Percentile in percent (1.0 means 1%) of pairwise squared segment distances.
    Percentile { pct: f64, sample_budget: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub path: PathBuf,
    pub format: SeriesFormat,
    pub column: Option<usize>,
    pub delimiter: Option<char>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub input: InputSpec,
    /// Motif length `L`.
    pub length: usize,
    /// Defaults to `L / 2`.
    pub stride: Option<usize>,
    /// Motif count `K`.
    pub motifs: usize,
    pub threshold: ThresholdSource,
    pub alphas: Vec<f64>,
    pub eta: f64,
    pub iters: usize,
    pub restarts: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub trace: bool,
    /// Run restarts on the rayon pool. Output does not depend on it.
    pub parallel: bool,
    /// Record wall-clock seconds per method (makes reports non-reproducible).
    pub record_timings: bool,
    pub output: Option<(PathBuf, ReportFormat)>,
}

impl RunSpec {
    /// Defaults for everything except input, length, motif count and threshold.
    pub fn new(input: InputSpec, length: usize, motifs: usize, threshold: ThresholdSource) -> Self {
        Self {
            input,
            length,
            stride: None,
            motifs,
            threshold,
            alphas: vec![1.0, 2.0, 3.0],
            eta: 0.1,
            iters: 1000,
            restarts: 200,
            seed: 0,
            methods: vec![Method::Brute, Method::Learn],
            trace: false,
            parallel: true,
            record_timings: false,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(MotifError::Config(m.to_string()));
        if self.methods.is_empty() {
            return fail("at least one method must be selected");
        }
        if self.length == 0 {
            return fail("motif length must be positive");
        }
        if self.stride == Some(0) {
            return fail("stride must be positive");
        }
        if self.motifs == 0 {
            return fail("motif count must be positive");
        }
        match self.threshold {
            ThresholdSource::Explicit(t) if !(t > 0.0 && t.is_finite()) => {
                return fail("threshold must be positive and finite")
            }
            ThresholdSource::Percentile { pct, sample_budget } => {
                if !(pct > 0.0 && pct < 100.0) {
                    return fail("percentile must lie in (0, 100)");
                }
                if sample_budget == 0 {
                    return fail("sample budget must be positive");
                }
            }
            _ => {}
        }
        if self.methods.contains(&Method::Learn) {
            if self.alphas.is_empty() || self.alphas.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
                return fail("alpha values must be positive and finite");
            }
            if !(self.eta > 0.0 && self.eta.is_finite()) {
                return fail("eta must be positive and finite");
            }
            if self.iters == 0 || self.restarts == 0 {
                return fail("iterations and restarts must be positive");
            }
        }
        Ok(())
    }
}

/// Runs every restart of `cfg` on the rayon pool and selects one exactly
/// as the sequential [`motiflearn_core::learn_with_restarts`] would.
pub fn learn_with_restarts_parallel(
    segments: &SegmentMatrix,
    cfg: &LearnConfig,
) -> Result<LearnResult> {
    cfg.validate()?;
    let runs = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| learn_restart(segments, cfg, r))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(select_restart(runs).expect("at least one restart"))
}

fn learn_once(segments: &SegmentMatrix, cfg: &LearnConfig, parallel: bool) -> Result<LearnResult> {
    if parallel {
        learn_with_restarts_parallel(segments, cfg)
    } else {
        Ok(motiflearn_core::learn_with_restarts(segments, cfg)?)
    }
}

/// Best learner result over the alpha grid, plus per-alpha outcomes.
/// Diverse results beat non-diverse ones, then higher hard frequency,
/// then smaller alpha.
pub fn learn_over_alpha_grid(
    segments: &SegmentMatrix,
    base: &LearnConfig,
    alphas: &[f64],
    parallel: bool,
) -> Result<(f64, LearnResult, Vec<AlphaOutcome>)> {
    let mut grid: Vec<f64> = alphas.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut best: Option<(f64, LearnResult)> = None;
    let mut outcomes = Vec::with_capacity(grid.len());
    for alpha in grid {
        let cfg = LearnConfig {
            alpha,
            ..base.clone()
        };
        let r = learn_once(segments, &cfg, parallel)?;
        outcomes.push(AlphaOutcome {
            alpha,
            total_frequency: r.hard.total,
            diverse: r.diverse,
            restart_index: r.restart_index,
        });
        let better = best.as_ref().is_none_or(|(_, b)| {
            (r.diverse, r.hard.total) > (b.diverse, b.hard.total)
        });
        if better {
            best = Some((alpha, r));
        }
    }
    let (alpha, result) = best.ok_or_else(|| MotifError::Config("empty alpha grid".into()))?;
    Ok((alpha, result, outcomes))
}

/// Loads the input named in `spec`, runs it and writes the report if an
/// output is configured.
pub fn run(spec: &RunSpec) -> Result<DiscoveryReport> {
    spec.validate()?;
    let series = load_series(
        &spec.input.path,
        spec.input.format,
        spec.input.column,
        spec.input.delimiter,
    )?;
    let report = run_on_series(&series, spec)?;
    if let Some((path, format)) = &spec.output {
        write_report(&report, path, *format)?;
    }
    Ok(report)
}

/// Runs `spec` on an already loaded series. Both methods see the same
/// segment matrix and threshold.
pub fn run_on_series(series: &TimeSeries, spec: &RunSpec) -> Result<DiscoveryReport> {
    spec.validate()?;
    let stride = spec.stride.unwrap_or_else(|| default_stride(spec.length));
    let segments = extract_segments(series, spec.length, stride)?;
    let threshold = match spec.threshold {
        ThresholdSource::Explicit(t) => Threshold::new(t)?,
        ThresholdSource::Percentile { pct, sample_budget } => {
            percentile_threshold(&segments, pct, sample_budget, spec.seed)?
        }
    };
    threshold.positive()?;

    let mut methods = Vec::new();
    for &method in &spec.methods {
        let started = Instant::now();
        let mut block = match method {
            Method::Brute => brute_block(&segments, &threshold, spec.motifs)?,
            Method::Learn => learn_block(&segments, &threshold, spec)?,
        };
        if spec.record_timings {
            block.wall_clock_seconds = Some(started.elapsed().as_secs_f64());
        }
        methods.push(block);
    }

    Ok(DiscoveryReport {
        config: ReportConfig {
            input: spec.input.path.display().to_string(),
            format: spec.input.format,
            column: spec.input.column,
            series_len: series.len(),
            length: spec.length,
            stride,
            segments: segments.len(),
            motifs: spec.motifs,
            threshold: threshold.value,
            percentile: threshold.percentile,
            sampled_pairs: threshold.sampled_pairs,
            alphas: spec.alphas.clone(),
            eta: spec.eta,
            iters: spec.iters,
            restarts: spec.restarts,
            seed: spec.seed,
            methods: spec.methods.clone(),
            trace: spec.trace,
        },
        methods,
    })
}

fn brute_block(segments: &SegmentMatrix, threshold: &Threshold, k: usize) -> Result<MethodReport> {
    let r = brute_force_search(segments, threshold, k)?;
    let mut flags = Vec::new();
    if r.short_selection {
        flags.push("short_selection".to_string());
    }
    Ok(MethodReport {
        name: Method::Brute,
        motifs: r.motifs.matrix().to_rows(),
        frequencies: r.hard.per_motif,
        total_frequency: r.hard.total,
        matches: r.hard.matches,
        hard_violation: if r.motifs.count() >= 2 {
            motiflearn_core::hard_violation(&r.motifs, threshold)?
        } else {
            0.0
        },
        flags,
        segment_indices: Some(r.segment_indices),
        alpha: None,
        restart_index: None,
        alpha_grid: Vec::new(),
        wall_clock_seconds: None,
        trace: None,
    })
}

fn learn_block(segments: &SegmentMatrix, threshold: &Threshold, spec: &RunSpec) -> Result<MethodReport> {
    let mut cfg = LearnConfig::new(*threshold, spec.motifs, spec.length);
    cfg.eta = spec.eta;
    cfg.iters = spec.iters;
    cfg.restarts = spec.restarts;
    cfg.seed = spec.seed;
    cfg.trace = spec.trace;
    let (alpha, r, grid) = learn_over_alpha_grid(segments, &cfg, &spec.alphas, spec.parallel)?;
    let mut flags = Vec::new();
    if !r.diverse {
        flags.push("nonzero_violation".to_string());
    }
    Ok(MethodReport {
        name: Method::Learn,
        motifs: r.motifs.matrix().to_rows(),
        frequencies: r.hard.per_motif,
        total_frequency: r.hard.total,
        matches: r.hard.matches,
        hard_violation: r.hard_violation_final,
        flags,
        segment_indices: None,
        alpha: Some(alpha),
        restart_index: Some(r.restart_index),
        alpha_grid: grid,
        wall_clock_seconds: None,
        trace: r.trace.map(|t| TraceReport {
            objective: t.objective,
            smooth_frequency: t.smooth_frequency,
            smooth_violation: t.smooth_violation,
        }),
    })
}
