//! Hard and smooth motif frequency, diversity violation, the combined
//! objective and its analytic gradient.
//!
//! Notation used in the comments: `K` motifs of length `L`, `J` segments,
//! threshold `T`, smoothness `alpha`, and `phi[k][q]` the squared distance
//! between motifs `k` and `q`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};
use crate::segmentation::{SegmentMatrix, Threshold};

/// `K` candidate motifs of length `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifSet(Matrix);

impl MotifSet {
    pub fn new(data: Matrix) -> Result<Self> {
        if data.rows() == 0 {
            return Err(Error::InvalidParameter("motif count must be positive"));
        }
        if data.cols() == 0 {
            return Err(Error::InvalidParameter("motif length must be positive"));
        }
        if let Some(index) = data.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        Ok(Self(data))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Motif count `K`.
    pub fn count(&self) -> usize {
        self.0.rows()
    }

    /// Motif length `L`.
    pub fn motif_len(&self) -> usize {
        self.0.cols()
    }

    pub fn row(&self, k: usize) -> &[f64] {
        self.0.row(k)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut Matrix {
        &mut self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// How matches adjacent to a previous match are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrivialMatchRule {
    /// A match is counted only if it is more than one segment after the
    /// previous match (counted or not).
    #[default]
    Exclude,
    /// Every match counts. Test hook only.
    Include,
}

/// Counts matches in index order under `rule`. Returns the counted indices.
pub fn count_matches<I>(matches: I, rule: TrivialMatchRule) -> Vec<usize>
where
    I: IntoIterator<Item = bool>,
{
    let mut counted = Vec::new();
    let mut last: Option<usize> = None;
    for (j, is_match) in matches.into_iter().enumerate() {
        if !is_match {
            continue;
        }
        let far_enough = last.is_none_or(|prev| j - prev > 1);
        if far_enough || rule == TrivialMatchRule::Include {
            counted.push(j);
        }
        last = Some(j);
    }
    counted
}

/// Nontrivial match counts of a motif set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardFrequencyReport {
    pub per_motif: Vec<usize>,
    pub total: usize,
    /// Counted segment indices, per motif, ascending.
    pub matches: Vec<Vec<usize>>,
}

fn check_dims(motifs: &MotifSet, segments: &SegmentMatrix) -> Result<()> {
    if motifs.motif_len() != segments.segment_len() {
        return Err(Error::DimensionMismatch {
            expected: segments.segment_len(),
            found: motifs.motif_len(),
        });
    }
    Ok(())
}

/// Hard frequency: segments strictly closer than `T` (squared distance),
/// with trivial matches excluded.
pub fn hard_frequency(
    motifs: &MotifSet,
    segments: &SegmentMatrix,
    threshold: &Threshold,
) -> Result<HardFrequencyReport> {
    hard_frequency_with(motifs, segments, threshold, TrivialMatchRule::Exclude)
}

pub fn hard_frequency_with(
    motifs: &MotifSet,
    segments: &SegmentMatrix,
    threshold: &Threshold,
    rule: TrivialMatchRule,
) -> Result<HardFrequencyReport> {
    check_dims(motifs, segments)?;
    let t = threshold.value;
    let matches: Vec<Vec<usize>> = (0..motifs.count())
        .map(|k| {
            let m = motifs.row(k);
            count_matches(
                segments
                    .data()
                    .iter_rows()
                    .map(|s| squared_distance(m, s) < t),
                rule,
            )
        })
        .collect();
    let per_motif: Vec<usize> = matches.iter().map(Vec::len).collect();
    Ok(HardFrequencyReport {
        total: per_motif.iter().sum(),
        per_motif,
        matches,
    })
}

/// Gaussian-kernel match scores `exp(-alpha/T * dist)` for every
/// (motif, segment) pair and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchProfile {
    /// `K x J` scores in `(0, 1]` (they may underflow to 0 for very distant pairs).
    pub per_pair: Matrix,
    pub total_smooth: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("alpha must be positive and finite"))
    }
}

pub fn smooth_frequency(
    motifs: &MotifSet,
    segments: &SegmentMatrix,
    threshold: &Threshold,
    alpha: f64,
) -> Result<MatchProfile> {
    check_dims(motifs, segments)?;
    let t = threshold.positive()?;
    check_alpha(alpha)?;
    let k_count = motifs.count();
    let j_count = segments.len();
    let scale = alpha / t;
    let mut per_pair = Matrix::zeros(k_count, j_count);
    let mut sum = 0.0;
    for k in 0..k_count {
        let m = motifs.row(k);
        let row = per_pair.row_mut(k);
        for (j, s) in segments.data().iter_rows().enumerate() {
            let score = libm::exp(-scale * squared_distance(m, s));
            row[j] = score;
            sum += score;
        }
    }
    let total_smooth = if j_count == 0 {
        0.0
    } else {
        sum / (k_count * j_count) as f64
    };
    Ok(MatchProfile {
        per_pair,
        total_smooth,
    })
}

/// Symmetric `K x K` squared distances between motifs, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDistances {
    pub phi: Matrix,
}

pub fn pairwise_motif_distances(motifs: &MotifSet) -> PairDistances {
    let k_count = motifs.count();
    let mut phi = Matrix::zeros(k_count, k_count);
    for k in 0..k_count {
        for q in k + 1..k_count {
            let d = squared_distance(motifs.row(k), motifs.row(q));
            phi.set(k, q, d);
            phi.set(q, k, d);
        }
    }
    PairDistances { phi }
}

/// `2 / (K(K-1))`, or `None` when there are no pairs.
fn pair_normalizer(k_count: usize) -> Option<f64> {
    (k_count >= 2).then(|| 2.0 / (k_count * (k_count - 1)) as f64)
}

fn violation_with(motifs: &MotifSet, threshold: &Threshold, square: bool) -> Result<f64> {
    let t = threshold.positive()?;
    Ok(violation_from(&pairwise_motif_distances(motifs), t, square))
}

/// Violation from precomputed distances; `square` selects the smooth variant.
pub fn violation_from(phi: &PairDistances, t: f64, square: bool) -> f64 {
    let k_count = phi.phi.rows();
    let Some(norm) = pair_normalizer(k_count) else {
        return 0.0;
    };
    let mut sum = 0.0;
    for k in 0..k_count {
        for p in k + 1..k_count {
            let d = phi.phi.get(k, p);
            if d < 2.0 * t {
                let v = 1.0 - d / (2.0 * t);
                sum += if square { v * v } else { v };
            }
        }
    }
    norm * sum
}

/// Mean linear penalty over motif pairs closer than `2T`. Zero for `K = 1`.
pub fn hard_violation(motifs: &MotifSet, threshold: &Threshold) -> Result<f64> {
    violation_with(motifs, threshold, false)
}

/// Squared variant of [`hard_violation`], differentiable everywhere.
pub fn smooth_violation(motifs: &MotifSet, threshold: &Threshold) -> Result<f64> {
    violation_with(motifs, threshold, true)
}

/// Strict diversity audit: every motif pair is more than `2T` apart.
pub fn is_diverse(motifs: &MotifSet, threshold: &Threshold) -> bool {
    let two_t = 2.0 * threshold.value;
    let k_count = motifs.count();
    (0..k_count).all(|k| {
        (k + 1..k_count).all(|p| squared_distance(motifs.row(k), motifs.row(p)) > two_t)
    })
}

/// Smooth frequency minus smooth violation.
pub fn objective(
    motifs: &MotifSet,
    segments: &SegmentMatrix,
    threshold: &Threshold,
    alpha: f64,
) -> Result<f64> {
    let f = smooth_frequency(motifs, segments, threshold, alpha)?.total_smooth;
    Ok(f - smooth_violation(motifs, threshold)?)
}

/// Gradient of the smooth frequency from an already computed profile.
pub fn grad_frequency_from(
    motifs: &MotifSet,
    segments: &SegmentMatrix,
    profile: &MatchProfile,
    t: f64,
    alpha: f64,
) -> Matrix {
    let k_count = motifs.count();
    let len = motifs.motif_len();
    let j_count = segments.len();
    let mut grad = Matrix::zeros(k_count, len);
    if j_count == 0 {
        return grad;
    }
    let coef = -2.0 * alpha / ((k_count * j_count) as f64 * t);
    let mut acc = vec![0.0; len];
    for k in 0..k_count {
        acc.fill(0.0);
        let m = motifs.row(k);
        let scores = profile.per_pair.row(k);
        for (s, &w) in segments.data().iter_rows().zip(scores) {
            for ((a, mv), sv) in acc.iter_mut().zip(m).zip(s) {
                *a += (mv - sv) * w;
            }
        }
        for (g, a) in grad.row_mut(k).iter_mut().zip(&acc) {
            *g = coef * a;
        }
    }
    grad
}

/// Gradient of the smooth violation from precomputed motif distances.
pub fn grad_violation_from(motifs: &MotifSet, phi: &PairDistances, t: f64) -> Matrix {
    let k_count = motifs.count();
    let len = motifs.motif_len();
    let mut grad = Matrix::zeros(k_count, len);
    let Some(norm) = pair_normalizer(k_count) else {
        return grad;
    };
    let coef = norm / (t * t);
    for k in 0..k_count {
        let mk = motifs.row(k);
        let row = grad.row_mut(k);
        for q in (0..k_count).filter(|&q| q != k) {
            let d = phi.phi.get(k, q);
            if d >= 2.0 * t {
                continue;
            }
            let mq = motifs.row(q);
            for ((g, a), b) in row.iter_mut().zip(mk).zip(mq) {
                *g += (d - 2.0 * t) * (a - b);
            }
        }
        for g in row.iter_mut() {
            *g *= coef;
        }
    }
    grad
}

pub fn grad_frequency(
    motifs: &MotifSet,
    segments: &SegmentMatrix,
    threshold: &Threshold,
    alpha: f64,
) -> Result<Matrix> {
    let profile = smooth_frequency(motifs, segments, threshold, alpha)?;
    Ok(grad_frequency_from(
        motifs,
        segments,
        &profile,
        threshold.value,
        alpha,
    ))
}

pub fn grad_violation(motifs: &MotifSet, threshold: &Threshold) -> Result<Matrix> {
    let t = threshold.positive()?;
    Ok(grad_violation_from(
        motifs,
        &pairwise_motif_distances(motifs),
        t,
    ))
}

/// Gradient of [`objective`].
pub fn grad_objective(
    motifs: &MotifSet,
    segments: &SegmentMatrix,
    threshold: &Threshold,
    alpha: f64,
) -> Result<Matrix> {
    let mut g = grad_frequency(motifs, segments, threshold, alpha)?;
    let v = grad_violation(motifs, threshold)?;
    for (a, b) in g.as_mut_slice().iter_mut().zip(v.as_slice()) {
        *a -= b;
    }
    Ok(g)
}
