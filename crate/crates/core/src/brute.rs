//! Exhaustive segment-search baseline: every segment is scored as a
//! candidate motif, then the top `K` are picked greedily under the
//! `2T` diversity constraint.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};
use crate::objective::{hard_frequency, HardFrequencyReport, MotifSet, TrivialMatchRule};
use crate::segmentation::{SegmentMatrix, Threshold};

/// Nontrivial match count of each segment against the whole matrix,
/// the segment itself included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentFrequencies {
    pub counts: Vec<usize>,
}

pub fn segment_frequencies(segments: &SegmentMatrix, threshold: &Threshold) -> SegmentFrequencies {
    segment_frequencies_with(segments, threshold, TrivialMatchRule::Exclude)
}

/// `O(J^2 L)` scan. `rule` exists for tests that need raw match counts.
pub fn segment_frequencies_with(
    segments: &SegmentMatrix,
    threshold: &Threshold,
    rule: TrivialMatchRule,
) -> SegmentFrequencies {
    let t = threshold.value;
    let j_count = segments.len();
    let mut counts = Vec::with_capacity(j_count);
    for j in 0..j_count {
        let candidate = segments.row(j);
        let mut count = 0;
        let mut last_match: Option<usize> = None;
        for r in 0..j_count {
            if squared_distance(candidate, segments.row(r)) < t {
                let nontrivial = last_match.is_none_or(|prev| r - prev > 1);
                if nontrivial || rule == TrivialMatchRule::Include {
                    count += 1;
                }
                last_match = Some(r);
            }
        }
        counts.push(count);
    }
    SegmentFrequencies { counts }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub motifs: MotifSet,
    /// Hard frequency of the selected motifs, recomputed against all segments.
    pub hard: HardFrequencyReport,
    /// Row of the segment matrix each motif was copied from.
    pub segment_indices: Vec<usize>,
    pub frequencies: SegmentFrequencies,
    /// Fewer than `K` diverse segments existed.
    pub short_selection: bool,
}

/// Greedy top-`K` selection by precomputed frequency among segments whose
/// squared distance to every earlier pick exceeds `2T`. Ties go to the
/// lowest segment index.
pub fn brute_force_search(
    segments: &SegmentMatrix,
    threshold: &Threshold,
    motif_count: usize,
) -> Result<BruteForceResult> {
    if motif_count == 0 {
        return Err(Error::InvalidParameter("motif count must be positive"));
    }
    if segments.is_empty() {
        return Err(Error::TooFewSegments {
            segments: 0,
            required: 1,
        });
    }
    let frequencies = segment_frequencies(segments, threshold);
    let selected = select_diverse(segments, threshold, &frequencies.counts, motif_count);
    let rows: Vec<&[f64]> = selected.iter().map(|&j| segments.row(j)).collect();
    let motifs = MotifSet::new(Matrix::from_rows(&rows)?)?;
    let hard = hard_frequency(&motifs, segments, threshold)?;
    Ok(BruteForceResult {
        short_selection: selected.len() < motif_count,
        motifs,
        hard,
        segment_indices: selected,
        frequencies,
    })
}

fn select_diverse(
    segments: &SegmentMatrix,
    threshold: &Threshold,
    counts: &[usize],
    motif_count: usize,
) -> Vec<usize> {
    let two_t = 2.0 * threshold.value;
    let mut selected: Vec<usize> = Vec::with_capacity(motif_count);
    while selected.len() < motif_count {
        let mut best: Option<usize> = None;
        for (j, &count) in counts.iter().enumerate() {
            let row = segments.row(j);
            let diverse = selected
                .iter()
                .all(|&p| squared_distance(row, segments.row(p)) > two_t);
            if diverse && best.is_none_or(|b| count > counts[b]) {
                best = Some(j);
            }
        }
        match best {
            Some(j) => selected.push(j),
            None => break,
        }
    }
    selected
}
