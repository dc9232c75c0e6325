//! Central finite-difference check of the analytic gradients on seeded
//! random instances. Only objective *values* feed the numerical side.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::matrix::Matrix;
use crate::objective::{
    grad_frequency, grad_objective, grad_violation, objective, smooth_frequency,
    smooth_violation, MotifSet,
};
use crate::segmentation::{SegmentMatrix, Threshold};

/// Tolerances and instance ranges for [`run_gradcheck`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradcheckConfig {
    pub instances: usize,
    pub seed: u64,
    pub step: f64,
    pub max_rel_error: f64,
    /// Below this analytic magnitude the absolute error is used instead.
    pub small_gradient: f64,
    pub max_abs_error: f64,
}

impl Default for GradcheckConfig {
    fn default() -> Self {
        Self {
            instances: 100,
            seed: 0,
            step: 1e-5,
            max_rel_error: 1e-4,
            small_gradient: 1e-6,
            max_abs_error: 1e-8,
        }
    }
}

/// A random `(M, S, T, alpha)` problem.
#[derive(Debug, Clone)]
pub struct Instance {
    pub motifs: MotifSet,
    pub segments: SegmentMatrix,
    pub threshold: Threshold,
    pub alpha: f64,
}

/// `K in 1..=4`, `J in 1..=8`, `L in 1..=16`, `T in [0.1, 10]`,
/// `alpha in {1, 2, 3}`. Motifs start near segments, and some near each
/// other, so that both terms of the objective are active.
pub fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let k = rng.random_range(1..=4usize);
    let j = rng.random_range(1..=8usize);
    let l = rng.random_range(1..=16usize);
    let t = rng.random_range(0.1..=10.0);
    let alpha = rng.random_range(1..=3u32) as f64;
    let mut segments = Matrix::zeros(j, l);
    for v in segments.as_mut_slice() {
        *v = rng.random_range(-1.5..1.5);
    }
    let spread = libm::sqrt(t / l as f64);
    let mut motifs = Matrix::zeros(k, l);
    for kk in 0..k {
        let anchor: Vec<f64> = if kk > 0 && rng.random_bool(0.5) {
            motifs.row(rng.random_range(0..kk)).to_vec()
        } else {
            segments.row(rng.random_range(0..j)).to_vec()
        };
        for (m, a) in motifs.row_mut(kk).iter_mut().zip(anchor) {
            *m = a + spread * rng.random_range(-1.0..1.0);
        }
    }
    Instance {
        motifs: MotifSet::new(motifs).expect("finite motifs"),
        segments: SegmentMatrix::from_rows(segments).expect("finite segments"),
        threshold: Threshold::new(t).expect("positive threshold"),
        alpha,
    }
}

/// Worst-case discrepancy of one gradient.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GradientError {
    pub max_rel: f64,
    pub max_abs_small: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GradcheckReport {
    pub instances: usize,
    pub frequency: GradientError,
    pub violation: GradientError,
    pub objective: GradientError,
}

impl GradcheckReport {
    pub fn passed(&self) -> bool {
        self.frequency.failures + self.violation.failures + self.objective.failures == 0
    }
}

fn central_difference<F>(motifs: &MotifSet, step: f64, f: F) -> Result<Matrix>
where
    F: Fn(&MotifSet) -> Result<f64>,
{
    let mut out = Matrix::zeros(motifs.count(), motifs.motif_len());
    let mut probe = motifs.clone();
    for idx in 0..motifs.matrix().as_slice().len() {
        let base = motifs.matrix().as_slice()[idx];
        probe.matrix_mut().as_mut_slice()[idx] = base + step;
        let up = f(&probe)?;
        probe.matrix_mut().as_mut_slice()[idx] = base - step;
        let down = f(&probe)?;
        probe.matrix_mut().as_mut_slice()[idx] = base;
        out.as_mut_slice()[idx] = (up - down) / (2.0 * step);
    }
    Ok(out)
}

fn compare(analytic: &Matrix, numeric: &Matrix, cfg: &GradcheckConfig, acc: &mut GradientError) {
    for (&a, &n) in analytic.as_slice().iter().zip(numeric.as_slice()) {
        let diff = (a - n).abs();
        if a.abs() < cfg.small_gradient {
            acc.max_abs_small = acc.max_abs_small.max(diff);
            if diff >= cfg.max_abs_error {
                acc.failures += 1;
            }
        } else {
            let rel = diff / a.abs();
            acc.max_rel = acc.max_rel.max(rel);
            if rel >= cfg.max_rel_error {
                acc.failures += 1;
            }
        }
    }
}

/// Checks the frequency, violation and objective gradients on
/// `cfg.instances` random instances.
pub fn run_gradcheck(cfg: &GradcheckConfig) -> Result<GradcheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = GradcheckReport {
        instances: cfg.instances,
        ..Default::default()
    };
    for _ in 0..cfg.instances {
        let inst = random_instance(&mut rng);
        let (s, t, a) = (&inst.segments, &inst.threshold, inst.alpha);

        let analytic = grad_frequency(&inst.motifs, s, t, a)?;
        let numeric = central_difference(&inst.motifs, cfg.step, |m| {
            Ok(smooth_frequency(m, s, t, a)?.total_smooth)
        })?;
        compare(&analytic, &numeric, cfg, &mut report.frequency);

        let analytic = grad_violation(&inst.motifs, t)?;
        let numeric = central_difference(&inst.motifs, cfg.step, |m| smooth_violation(m, t))?;
        compare(&analytic, &numeric, cfg, &mut report.violation);

        let analytic = grad_objective(&inst.motifs, s, t, a)?;
        let numeric = central_difference(&inst.motifs, cfg.step, |m| objective(m, s, t, a))?;
        compare(&analytic, &numeric, cfg, &mut report.objective);
    }
    Ok(report)
}
