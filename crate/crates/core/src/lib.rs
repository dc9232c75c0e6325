//! Learning time-series motifs by gradient ascent.
//!
//! Motifs are real-valued length-`L` patterns scored by how many
//! Z-normalized series segments fall within squared distance `T` of them.
//! This crate holds the numerical pieces: segmentation and thresholds,
//! hard and smooth frequency with the pairwise diversity penalty and its
//! gradient, the AdaGrad learner with random restarts, and the exhaustive
//! segment-search baseline.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod brute;
pub mod error;
pub mod gradcheck;
pub mod learner;
pub mod matrix;
pub mod objective;
pub mod segmentation;
pub mod series;

pub use brute::{brute_force_search, segment_frequencies, BruteForceResult, SegmentFrequencies};
pub use error::{Error, Result};
pub use learner::{
    learn_motifs, learn_restart, learn_with_restarts, restart_seed, select_restart,
    GradAccumulator, LearnConfig, LearnResult, LearnTrace,
};
pub use matrix::{squared_distance, Matrix};
pub use objective::{
    grad_frequency, grad_objective, grad_violation, hard_frequency, hard_violation, is_diverse,
    objective, pairwise_motif_distances, smooth_frequency, smooth_violation, HardFrequencyReport,
    MatchProfile, MotifSet, PairDistances, TrivialMatchRule,
};
pub use segmentation::{
    default_stride, extract_segments, percentile_threshold, znormalize, SegmentMatrix, Threshold,
};
pub use series::TimeSeries;
