//! Loading series, running motif discovery end to end, and writing and
//! comparing reports. The numerical work lives in `motiflearn-core`.

pub mod compare;
pub mod error;
pub mod harness;
pub mod io;
pub mod report;
pub mod synth;

pub use compare::{compare_table, ComparisonTable};
pub use error::{MotifError, Result};
pub use harness::{learn_with_restarts_parallel, run, run_on_series, InputSpec, RunSpec, ThresholdSource};
pub use io::{load_series, write_series, SeriesFormat};
pub use report::{write_report, DiscoveryReport, Method, MethodReport, ReportFormat};
pub use synth::{generate_synthetic, SyntheticSeries};
