//! Random-walk series with a smooth pattern implanted at random offsets.

use motiflearn_core::TimeSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{MotifError, Result};

/// Implanted pattern standard deviation, in units of `sqrt(pattern_length)`.
/// A unit-step random walk wanders about `sqrt(n)` over `n` points, so this
/// keeps the pattern visible above the local walk.
pub const PATTERN_SCALE: f64 = 5.0;

const PLACEMENT_ATTEMPTS_PER_OCCURRENCE: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSeries {
    pub series: TimeSeries,
    /// The noise-free pattern that was added at every offset.
    pub pattern: Vec<f64>,
    /// Implant start positions, ascending.
    pub offsets: Vec<usize>,
}

fn smooth_pattern(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut p = vec![0.0; len];
    for _ in 0..3 {
        let cycles = rng.random_range(1.0..4.0);
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let amp = rng.random_range(0.5..1.5);
        for (i, v) in p.iter_mut().enumerate() {
            let x = i as f64 / len as f64;
            *v += amp * (std::f64::consts::TAU * cycles * x + phase).sin();
        }
    }
    // Hann taper so the implant starts and ends at zero
    if len > 1 {
        for (i, v) in p.iter_mut().enumerate() {
            let w = 0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / (len - 1) as f64).cos();
            *v *= w;
        }
    }
    let mean = p.iter().sum::<f64>() / len as f64;
    let sd = (p.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / len as f64).sqrt();
    let scale = if sd > 0.0 {
        PATTERN_SCALE * (len as f64).sqrt() / sd
    } else {
        0.0
    };
    p.iter().map(|v| (v - mean) * scale).collect()
}

/// Seeded unit-variance Gaussian random walk with `occurrences` copies of
/// one smooth pattern added at non-overlapping offsets, each copy with its
/// own Gaussian noise of standard deviation `noise_sd`.
pub fn generate_synthetic(
    length: usize,
    pattern_length: usize,
    occurrences: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<SyntheticSeries> {
    if length == 0 || pattern_length == 0 {
        return Err(MotifError::Config(
            "series and pattern length must be positive".into(),
        ));
    }
    if occurrences == 0 {
        return Err(MotifError::Config("occurrences must be positive".into()));
    }
    if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
        return Err(MotifError::Config("noise sd must be finite and non-negative".into()));
    }
    if occurrences * pattern_length > length / 2 {
        return Err(MotifError::Config(format!(
            "{occurrences} patterns of length {pattern_length} need at least {} points",
            2 * occurrences * pattern_length
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = Normal::new(0.0, 1.0).expect("unit normal");
    let mut values = Vec::with_capacity(length);
    let mut level = 0.0;
    for _ in 0..length {
        level += step.sample(&mut rng);
        values.push(level);
    }

    let pattern = smooth_pattern(&mut rng, pattern_length);

    let mut offsets: Vec<usize> = Vec::with_capacity(occurrences);
    let mut attempts = 0;
    while offsets.len() < occurrences {
        if attempts == PLACEMENT_ATTEMPTS_PER_OCCURRENCE * occurrences {
            return Err(MotifError::InfeasiblePacking {
                length,
                pattern_length,
                occurrences,
            });
        }
        attempts += 1;
        let start = rng.random_range(0..=length - pattern_length);
        let clear = offsets
            .iter()
            .all(|&o| start + pattern_length <= o || o + pattern_length <= start);
        if clear {
            offsets.push(start);
        }
    }
    offsets.sort_unstable();

    let noise = Normal::new(0.0, noise_sd).expect("finite sd");
    for &o in &offsets {
        for (v, p) in values[o..o + pattern_length].iter_mut().zip(&pattern) {
            *v += p + noise.sample(&mut rng);
        }
    }

    let series = TimeSeries::new(
        values,
        format!("synthetic(length={length},pattern={pattern_length},occurrences={occurrences},noise={noise_sd},seed={seed})"),
    )?;
    Ok(SyntheticSeries {
        series,
        pattern,
        offsets,
    })
}
