//! Gradient-ascent motif learning with per-coordinate AdaGrad steps, and
//! seeded random restarts selected by hard frequency.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::objective::{
    grad_frequency_from, grad_violation_from, hard_frequency, hard_violation, is_diverse,
    pairwise_motif_distances, smooth_frequency, violation_from, HardFrequencyReport, MotifSet,
};
use crate::segmentation::{SegmentMatrix, Threshold};

/// Hyper-parameters of one learning run.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnConfig {
    pub threshold: Threshold,
    pub motif_count: usize,
    pub motif_len: usize,
    /// Smoothness of the Gaussian match kernel.
    pub alpha: f64,
    /// Base learning rate.
    pub eta: f64,
    pub iters: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Record per-iteration objective, smooth frequency and smooth violation.
    pub trace: bool,
    /// When false the violation gradient is dropped from the update. Only
    /// meant for ablation experiments.
    pub diversity_gradient: bool,
}

impl LearnConfig {
    pub fn new(threshold: Threshold, motif_count: usize, motif_len: usize) -> Self {
        Self {
            threshold,
            motif_count,
            motif_len,
            alpha: 2.0,
            eta: 0.1,
            iters: 1000,
            restarts: 200,
            seed: 0,
            trace: false,
            diversity_gradient: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.threshold.positive()?;
        if self.motif_count == 0 {
            return Err(Error::InvalidParameter("motif count must be positive"));
        }
        if self.motif_len == 0 {
            return Err(Error::InvalidParameter("motif length must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter("alpha must be positive and finite"));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidParameter("eta must be positive and finite"));
        }
        if self.iters == 0 {
            return Err(Error::InvalidParameter("iteration count must be positive"));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restart count must be positive"));
        }
        Ok(())
    }
}

/// Running sums of squared partial derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GradAccumulator {
    pub nabla: Matrix,
}

impl GradAccumulator {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            nabla: Matrix::zeros(rows, cols),
        }
    }

    /// Accumulates `grad` and returns the ascent step for every coordinate.
    /// Coordinates whose history is still zero take no step.
    pub fn step(&mut self, grad: &Matrix, eta: f64) -> Matrix {
        let mut step = Matrix::zeros(grad.rows(), grad.cols());
        for ((acc, g), s) in self
            .nabla
            .as_mut_slice()
            .iter_mut()
            .zip(grad.as_slice())
            .zip(step.as_mut_slice())
        {
            *acc += g * g;
            if *acc > 0.0 {
                *s = eta / libm::sqrt(*acc) * g;
            }
        }
        step
    }
}

/// Per-iteration values, measured on the motifs at the start of each iteration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LearnTrace {
    pub objective: Vec<f64>,
    pub smooth_frequency: Vec<f64>,
    pub smooth_violation: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnResult {
    pub motifs: MotifSet,
    pub hard: HardFrequencyReport,
    pub hard_violation_final: f64,
    pub smooth_frequency_final: f64,
    pub smooth_violation_final: f64,
    /// Every motif pair is strictly more than `2T` apart.
    pub diverse: bool,
    pub trace: Option<LearnTrace>,
    pub restart_index: usize,
    pub init_segment_indices: Vec<usize>,
}

impl LearnResult {
    pub fn objective_final(&self) -> f64 {
        self.smooth_frequency_final - self.smooth_violation_final
    }
}

/// Draws `amount` distinct indices below `n` (Floyd's algorithm).
fn distinct_indices(rng: &mut ChaCha8Rng, n: usize, amount: usize) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::with_capacity(amount);
    for upper in n - amount..n {
        let t = rng.random_range(0..=upper);
        if picked.contains(&t) {
            picked.push(upper);
        } else {
            picked.push(t);
        }
    }
    picked
}

/// One gradient-ascent run from motifs initialized at random distinct segments.
pub fn learn_motifs(
    segments: &SegmentMatrix,
    cfg: &LearnConfig,
    restart_seed: u64,
) -> Result<LearnResult> {
    learn_run(segments, cfg, restart_seed, 0)
}

fn learn_run(
    segments: &SegmentMatrix,
    cfg: &LearnConfig,
    restart_seed: u64,
    restart_index: usize,
) -> Result<LearnResult> {
    cfg.validate()?;
    if segments.segment_len() != cfg.motif_len {
        return Err(Error::DimensionMismatch {
            expected: cfg.motif_len,
            found: segments.segment_len(),
        });
    }
    if segments.len() < cfg.motif_count {
        return Err(Error::TooFewSegments {
            segments: segments.len(),
            required: cfg.motif_count,
        });
    }
    let t = cfg.threshold.value;
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed);
    let init = distinct_indices(&mut rng, segments.len(), cfg.motif_count);
    let rows: Vec<&[f64]> = init.iter().map(|&j| segments.row(j)).collect();
    let mut motifs = MotifSet::from_rows(&rows)?;
    let mut accumulator = GradAccumulator::new(cfg.motif_count, cfg.motif_len);
    let mut trace = cfg.trace.then(|| LearnTrace {
        objective: Vec::with_capacity(cfg.iters),
        smooth_frequency: Vec::with_capacity(cfg.iters),
        smooth_violation: Vec::with_capacity(cfg.iters),
    });

    for iteration in 0..cfg.iters {
        // scores and motif distances are frozen for the whole iteration
        let profile = smooth_frequency(&motifs, segments, &cfg.threshold, cfg.alpha)?;
        let phi = pairwise_motif_distances(&motifs);
        if let Some(trace) = trace.as_mut() {
            let v = violation_from(&phi, t, true);
            trace.smooth_frequency.push(profile.total_smooth);
            trace.smooth_violation.push(v);
            trace.objective.push(profile.total_smooth - v);
        }
        let mut grad = grad_frequency_from(&motifs, segments, &profile, t, cfg.alpha);
        if cfg.diversity_gradient {
            let gv = grad_violation_from(&motifs, &phi, t);
            for (g, v) in grad.as_mut_slice().iter_mut().zip(gv.as_slice()) {
                *g -= v;
            }
        }
        let step = accumulator.step(&grad, cfg.eta);
        let m = motifs.matrix_mut();
        for (idx, (value, s)) in m
            .as_mut_slice()
            .iter_mut()
            .zip(step.as_slice())
            .enumerate()
        {
            *value += s;
            if !value.is_finite() {
                return Err(Error::NonFiniteValue {
                    iteration,
                    motif: idx / cfg.motif_len,
                    point: idx % cfg.motif_len,
                });
            }
        }
    }

    let hard = hard_frequency(&motifs, segments, &cfg.threshold)?;
    let smooth_frequency_final =
        smooth_frequency(&motifs, segments, &cfg.threshold, cfg.alpha)?.total_smooth;
    let smooth_violation_final = violation_from(&pairwise_motif_distances(&motifs), t, true);
    Ok(LearnResult {
        hard_violation_final: hard_violation(&motifs, &cfg.threshold)?,
        diverse: is_diverse(&motifs, &cfg.threshold),
        motifs,
        hard,
        smooth_frequency_final,
        smooth_violation_final,
        trace,
        restart_index,
        init_segment_indices: init,
    })
}

/// Seed of restart `index`, a SplitMix64 mix of the base seed and the index.
pub fn restart_seed(base: u64, index: usize) -> u64 {
    fn splitmix64(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix64(base ^ splitmix64(index as u64))
}

/// Runs restart `index` of `cfg`.
pub fn learn_restart(segments: &SegmentMatrix, cfg: &LearnConfig, index: usize) -> Result<LearnResult> {
    learn_run(segments, cfg, restart_seed(cfg.seed, index), index)
}

/// Picks the restart with the highest hard frequency among diverse ones,
/// falling back to the highest overall. Earlier restarts win ties.
///
/// The caller can tell the fallback happened from `diverse == false` on
/// the returned result.
pub fn select_restart<I>(results: I) -> Option<LearnResult>
where
    I: IntoIterator<Item = LearnResult>,
{
    let mut best: Option<LearnResult> = None;
    for r in results {
        let better = match &best {
            None => true,
            Some(b) => (r.diverse, r.hard.total) > (b.diverse, b.hard.total),
        };
        if better {
            best = Some(r);
        }
    }
    best
}

/// Runs `cfg.restarts` independent restarts sequentially and selects one
/// with [`select_restart`].
pub fn learn_with_restarts(segments: &SegmentMatrix, cfg: &LearnConfig) -> Result<LearnResult> {
    cfg.validate()?;
    let mut best: Option<LearnResult> = None;
    for index in 0..cfg.restarts {
        let r = learn_restart(segments, cfg, index)?;
        best = select_restart(best.into_iter().chain(core::iter::once(r)));
    }
    best.ok_or(Error::InvalidParameter("restart count must be positive"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn segs(rows: &[Vec<f64>]) -> SegmentMatrix {
        SegmentMatrix::from_rows(Matrix::from_rows(rows).unwrap()).unwrap()
    }

    fn cfg(t: f64, k: usize, l: usize) -> LearnConfig {
        let mut c = LearnConfig::new(Threshold::new(t).unwrap(), k, l);
        c.iters = 50;
        c.restarts = 3;
        c
    }

    #[test]
    fn adagrad_first_step_has_magnitude_eta() {
        let mut acc = GradAccumulator::new(1, 3);
        let g = Matrix::from_rows(&[[0.5, -2.0, 0.0]]).unwrap();
        let s = acc.step(&g, 0.1);
        assert!((s.get(0, 0) - 0.1).abs() < 1e-15);
        assert!((s.get(0, 1) + 0.1).abs() < 1e-15);
        assert_eq!(s.get(0, 2), 0.0);
        let s = acc.step(&g, 0.1);
        assert!(s.max_abs() <= 0.1);
        assert_eq!(acc.nabla.as_slice(), &[0.5, 8.0, 0.0]);
    }

    #[test]
    fn distinct_initialization() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let mut p = distinct_indices(&mut rng, 6, 6);
            p.sort_unstable();
            assert_eq!(p, vec![0, 1, 2, 3, 4, 5]);
        }
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(1.0, 1, 2);
        c.iters = 0;
        assert!(c.validate().is_err());
        let mut c = cfg(1.0, 1, 2);
        c.eta = 0.0;
        assert!(c.validate().is_err());
        assert!(cfg(0.0, 1, 2).validate().is_err());
    }

    #[test]
    fn too_few_segments() {
        let s = segs(&[vec![0.0, 1.0]]);
        assert_eq!(
            learn_motifs(&s, &cfg(1.0, 2, 2), 0).unwrap_err(),
            Error::TooFewSegments {
                segments: 1,
                required: 2
            }
        );
    }

    #[test]
    fn vanishing_step_keeps_initialization() {
        let s = segs(&[vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]]);
        let mut c = cfg(0.5, 2, 2);
        c.eta = 1e-12;
        c.iters = 10;
        let r = learn_motifs(&s, &c, 11).unwrap();
        for (k, &j) in r.init_segment_indices.iter().enumerate() {
            for (a, b) in r.motifs.row(k).iter().zip(s.row(j)) {
                assert!((a - b).abs() <= 10.0 * 1e-12 + 1e-15);
            }
        }
    }

    #[test]
    fn seeded_runs_are_identical() {
        let s = segs(&[
            vec![0.0, 1.0, 0.2],
            vec![1.0, 0.0, -0.3],
            vec![0.5, 0.5, 0.9],
            vec![0.4, 0.6, 1.0],
        ]);
        let mut c = cfg(0.5, 2, 3);
        c.trace = true;
        assert_eq!(learn_motifs(&s, &c, 5).unwrap(), learn_motifs(&s, &c, 5).unwrap());
    }

    #[test]
    fn trace_has_one_entry_per_iteration() {
        let s = segs(&[vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]]);
        let mut c = cfg(0.5, 2, 2);
        c.trace = true;
        c.iters = 17;
        let tr = learn_motifs(&s, &c, 1).unwrap().trace.unwrap();
        assert_eq!(tr.objective.len(), 17);
        assert_eq!(tr.smooth_frequency.len(), 17);
        assert_eq!(tr.smooth_violation.len(), 17);
    }

    #[test]
    fn single_restart_matches_direct_call() {
        let s = segs(&[vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]]);
        let mut c = cfg(0.5, 1, 2);
        c.restarts = 1;
        c.seed = 77;
        let a = learn_with_restarts(&s, &c).unwrap();
        let b = learn_motifs(&s, &c, restart_seed(77, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn restart_seeds_differ() {
        assert_ne!(restart_seed(0, 0), restart_seed(0, 1));
        assert_ne!(restart_seed(1, 0), restart_seed(0, 0));
        assert_eq!(restart_seed(9, 3), restart_seed(9, 3));
    }
}
