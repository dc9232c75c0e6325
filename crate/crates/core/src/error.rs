use core::fmt;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A series contained no values.
    EmptySeries,
    /// A series value at `index` was NaN or infinite.
    NonFiniteInput { index: usize },
    /// The series is shorter than the requested window.
    SeriesTooShort { len: usize, window: usize },
    /// Fewer segments than the operation needs.
    TooFewSegments { segments: usize, required: usize },
    /// Motif and segment lengths (or row widths) disagree.
    DimensionMismatch { expected: usize, found: usize },
    /// Threshold must be strictly positive and finite.
    InvalidThreshold(f64),
    /// A configuration value is out of its domain.
    InvalidParameter(&'static str),
    /// The learner produced a NaN/Inf motif value.
    NonFiniteValue {
        iteration: usize,
        motif: usize,
        point: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySeries => write!(f, "series is empty"),
            Error::NonFiniteInput { index } => {
                write!(f, "series value at index {index} is not finite")
            }
            Error::SeriesTooShort { len, window } => {
                write!(f, "series of length {len} is shorter than window length {window}")
            }
            Error::TooFewSegments { segments, required } => {
                write!(f, "need at least {required} segments, got {segments}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected length {expected}, found {found}")
            }
            Error::InvalidThreshold(t) => write!(f, "threshold must be positive and finite, got {t}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NonFiniteValue {
                iteration,
                motif,
                point,
            } => write!(
                f,
                "motif {motif} point {point} became non-finite at iteration {iteration}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
