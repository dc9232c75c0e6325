//! Sliding-window Z-normalized segments and percentile-derived thresholds.
//!
//! Thresholds live on the *squared* Euclidean scale: a segment matches a
//! motif when their squared distance is strictly below `T`. A percentile
//! threshold of `pct` therefore means that `pct` percent of segment pairs
//! would match each other under that same test.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};
use crate::series::TimeSeries;

/// Segments whose population standard deviation falls below this are
/// treated as constant and normalized to all zeros.
pub const DEGENERATE_STD: f64 = 1e-8;

/// Default number of segment pairs sampled when estimating a percentile.
pub const DEFAULT_SAMPLE_BUDGET: usize = 2_000_000;

/// Z-normalizes `segment` with the population standard deviation.
pub fn znormalize(segment: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; segment.len()];
    znormalize_into(segment, &mut out);
    out
}

pub fn znormalize_into(segment: &[f64], out: &mut [f64]) {
    debug_assert_eq!(segment.len(), out.len());
    let n = segment.len() as f64;
    if segment.is_empty() {
        return;
    }
    let mean = segment.iter().sum::<f64>() / n;
    let var = segment.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let std = libm::sqrt(var);
    if std < DEGENERATE_STD {
        out.fill(0.0);
        return;
    }
    for (o, x) in out.iter_mut().zip(segment) {
        *o = (x - mean) / std;
    }
}

/// `J x L` matrix of normalized segments plus where each came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentMatrix {
    data: Matrix,
    stride: usize,
    offsets: Vec<usize>,
}

impl SegmentMatrix {
    /// Wraps rows that are already in the desired space; no normalization
    /// is applied. Offsets are the row indices, stride is 1.
    pub fn from_rows(data: Matrix) -> Result<Self> {
        if data.cols() == 0 {
            return Err(Error::InvalidParameter("segment length must be positive"));
        }
        if let Some(index) = data.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        let offsets = (0..data.rows()).collect();
        Ok(Self {
            data,
            stride: 1,
            offsets,
        })
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn row(&self, j: usize) -> &[f64] {
        self.data.row(j)
    }

    /// Number of segments `J`.
    pub fn len(&self) -> usize {
        self.data.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.data.rows() == 0
    }

    /// Segment length `L`.
    pub fn segment_len(&self) -> usize {
        self.data.cols()
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }
}

/// Default window stride: half the window, at least 1.
pub fn default_stride(window: usize) -> usize {
    (window / 2).max(1)
}

/// Cuts `series` into windows of `window` points starting every `stride`
/// points and Z-normalizes each one.
pub fn extract_segments(series: &TimeSeries, window: usize, stride: usize) -> Result<SegmentMatrix> {
    if window == 0 {
        return Err(Error::InvalidParameter("segment length must be positive"));
    }
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be positive"));
    }
    let values = series.values();
    let n = values.len();
    if n < window {
        return Err(Error::SeriesTooShort { len: n, window });
    }
    let count = (n - window) / stride + 1;
    let mut data = Matrix::zeros(count, window);
    let mut offsets = Vec::with_capacity(count);
    for j in 0..count {
        let start = j * stride;
        znormalize_into(&values[start..start + window], data.row_mut(j));
        offsets.push(start);
    }
    Ok(SegmentMatrix {
        data,
        stride,
        offsets,
    })
}

/// Squared-distance match threshold `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub value: f64,
    /// Percentile it was derived from, in percent.
    pub percentile: Option<f64>,
    /// Number of segment pairs the percentile was computed over.
    pub sampled_pairs: usize,
}

impl Threshold {
    /// An explicitly chosen threshold.
    pub fn new(value: f64) -> Result<Self> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidThreshold(value));
        }
        Ok(Self {
            value,
            percentile: None,
            sampled_pairs: 0,
        })
    }

    /// The value, checked to be strictly positive as the smooth objective needs.
    pub fn positive(&self) -> Result<f64> {
        if self.value > 0.0 && self.value.is_finite() {
            Ok(self.value)
        } else {
            Err(Error::InvalidThreshold(self.value))
        }
    }
}

/// The `pct`-th percentile of squared distances between segment pairs.
///
/// All `J(J-1)/2` pairs are used when they fit in `sample_budget`; otherwise
/// `sample_budget` distinct pairs are drawn with a ChaCha8 stream seeded by
/// `seed`. Percentiles interpolate linearly between adjacent order statistics.
pub fn percentile_threshold(
    segments: &SegmentMatrix,
    pct: f64,
    sample_budget: usize,
    seed: u64,
) -> Result<Threshold> {
    if !(pct > 0.0 && pct < 100.0) {
        return Err(Error::InvalidParameter("percentile must lie in (0, 100)"));
    }
    if sample_budget == 0 {
        return Err(Error::InvalidParameter("sample budget must be positive"));
    }
    let j = segments.len();
    if j < 2 {
        return Err(Error::TooFewSegments {
            segments: j,
            required: 2,
        });
    }
    let total_pairs = (j as u64) * (j as u64 - 1) / 2;
    let mut distances = if total_pairs <= sample_budget as u64 {
        let mut d = Vec::with_capacity(total_pairs as usize);
        for a in 0..j {
            for b in a + 1..j {
                d.push(squared_distance(segments.row(a), segments.row(b)));
            }
        }
        d
    } else {
        let picks = sample_pair_ranks(total_pairs, sample_budget, seed);
        distances_for_ranks(segments, &picks)
    };
    let value = interpolated_percentile(&mut distances, pct);
    Ok(Threshold {
        value,
        percentile: Some(pct),
        sampled_pairs: distances.len(),
    })
}

/// Floyd's sampling of `amount` distinct values from `0..population`.
fn sample_pair_ranks(population: u64, amount: usize, seed: u64) -> BTreeSet<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = BTreeSet::new();
    for upper in population - amount as u64..population {
        let t = rng.random_range(0..=upper);
        if !chosen.insert(t) {
            chosen.insert(upper);
        }
    }
    chosen
}

/// Pair ranks enumerate `(a, b)`, `a < b`, row by row. `ranks` iterates in
/// ascending order so a single sweep maps them back.
fn distances_for_ranks(segments: &SegmentMatrix, ranks: &BTreeSet<u64>) -> Vec<f64> {
    let j = segments.len() as u64;
    let mut out = Vec::with_capacity(ranks.len());
    let mut row = 0u64;
    let mut row_start = 0u64;
    for &rank in ranks {
        while rank >= row_start + (j - 1 - row) {
            row_start += j - 1 - row;
            row += 1;
        }
        let col = row + 1 + (rank - row_start);
        out.push(squared_distance(
            segments.row(row as usize),
            segments.row(col as usize),
        ));
    }
    out
}

/// Linear interpolation between the order statistics bracketing rank
/// `pct/100 * (n-1)`. Reorders `values`.
pub fn interpolated_percentile(values: &mut [f64], pct: f64) -> f64 {
    assert!(!values.is_empty());
    let rank = pct / 100.0 * (values.len() - 1) as f64;
    let lo = rank as usize;
    let frac = rank - lo as f64;
    let (_, lo_val, upper) = values.select_nth_unstable_by(lo, f64::total_cmp);
    let lo_val = *lo_val;
    if frac == 0.0 || upper.is_empty() {
        return lo_val;
    }
    let hi_val = upper.iter().copied().fold(f64::INFINITY, f64::min);
    lo_val + frac * (hi_val - lo_val)
}
