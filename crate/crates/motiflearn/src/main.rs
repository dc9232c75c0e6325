use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use motiflearn::io::write_atomic;
use motiflearn::report::{DiscoveryReport, Method, ReportFormat};
use motiflearn::{
    compare_table, generate_synthetic, run, write_series, InputSpec, MotifError, RunSpec,
    SeriesFormat, ThresholdSource,
};
use motiflearn_core::gradcheck::{run_gradcheck, GradcheckConfig};
use motiflearn_core::segmentation::DEFAULT_SAMPLE_BUDGET;

const EXIT_CONFIG: u8 = 1;
const EXIT_GRADCHECK: u8 = 3;

#[derive(Parser)]
#[command(name = "motiflearn", version, about = "Learn time-series motifs by gradient ascent and compare against brute-force search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discover motifs in a series and write a report.
    Discover(DiscoverArgs),
    /// Generate a random-walk series with implanted patterns.
    Synth(SynthArgs),
    /// Tabulate learned vs brute-force frequencies from JSON reports.
    Compare(CompareArgs),
    /// Check analytic gradients against central finite differences.
    Gradcheck(GradcheckArgs),
}

#[derive(Args)]
struct DiscoverArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "plain")]
    format: SeriesFormat,
    /// Column index for csv input.
    #[arg(long)]
    column: Option<usize>,
    /// Field delimiter for csv input.
    #[arg(long)]
    delimiter: Option<char>,
    /// Motif length L.
    #[arg(long)]
    length: usize,
    /// Window stride; defaults to L/2.
    #[arg(long)]
    stride: Option<usize>,
    /// Number of motifs K.
    #[arg(long)]
    motifs: usize,
    /// Explicit squared-distance threshold T.
    #[arg(long, conflicts_with = "percentile", required_unless_present = "percentile")]
    threshold: Option<f64>,
    /// Threshold as a percentile (in percent) of pairwise squared segment distances.
    #[arg(long)]
    percentile: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_BUDGET)]
    sample_budget: usize,
    /// Smoothness values to search (repeatable).
    #[arg(long = "alpha", default_values_t = [1.0, 2.0, 3.0])]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Methods to run (repeatable).
    #[arg(long = "method", value_enum, default_values_t = [Method::Brute, Method::Learn])]
    methods: Vec<Method>,
    /// Include per-iteration traces of the selected learner run.
    #[arg(long)]
    trace: bool,
    /// Run restarts on one thread.
    #[arg(long)]
    sequential: bool,
    /// Record wall-clock seconds per method.
    #[arg(long)]
    timings: bool,
    /// Report path; printed to stdout as JSON when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    output_format: ReportFormat,
}

#[derive(Args)]
struct SynthArgs {
    /// Series length.
    #[arg(long)]
    points: usize,
    #[arg(long)]
    pattern_length: usize,
    #[arg(long)]
    occurrences: usize,
    #[arg(long, default_value_t = 0.0)]
    noise_sd: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Series output (plain format); offsets go to `<output>.offsets.json`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// JSON reports, each holding both methods.
    reports: Vec<PathBuf>,
    /// CSV output; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GradcheckArgs {
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn discover(a: DiscoverArgs) -> Result<(), MotifError> {
    let threshold = match (a.threshold, a.percentile) {
        (Some(t), None) => ThresholdSource::Explicit(t),
        (None, Some(pct)) => ThresholdSource::Percentile {
            pct,
            sample_budget: a.sample_budget,
        },
        _ => {
            return Err(MotifError::Config(
                "exactly one of --threshold and --percentile is required".into(),
            ))
        }
    };
    let mut methods = a.methods;
    methods.dedup();
    let mut spec = RunSpec::new(
        InputSpec {
            path: a.input,
            format: a.format,
            column: a.column,
            delimiter: a.delimiter,
        },
        a.length,
        a.motifs,
        threshold,
    );
    spec.stride = a.stride;
    spec.alphas = a.alphas;
    spec.eta = a.eta;
    spec.iters = a.iters;
    spec.restarts = a.restarts;
    spec.seed = a.seed;
    spec.methods = methods;
    spec.trace = a.trace;
    spec.parallel = !a.sequential;
    spec.record_timings = a.timings;
    spec.output = a.output.map(|p| (p, a.output_format));
    let report = run(&spec)?;
    if spec.output.is_none() {
        print!("{}", report.to_json());
    }
    Ok(())
}

fn synth(a: SynthArgs) -> Result<(), MotifError> {
    let s = generate_synthetic(a.points, a.pattern_length, a.occurrences, a.noise_sd, a.seed)?;
    write_series(&a.output, &s.series)?;
    let meta = serde_json::json!({
        "source": s.series.source(),
        "pattern_length": a.pattern_length,
        "offsets": s.offsets,
    });
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    text.push('\n');
    let mut meta_path = a.output.into_os_string();
    meta_path.push(".offsets.json");
    write_atomic(&PathBuf::from(meta_path), text.as_bytes())
}

fn compare(a: CompareArgs) -> Result<(), MotifError> {
    let reports = a
        .reports
        .iter()
        .map(|p| DiscoveryReport::read_json(p))
        .collect::<Result<Vec<_>, _>>()?;
    let csv = compare_table(&reports)?.to_csv();
    match a.output {
        Some(p) => write_atomic(&p, csv.as_bytes()),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn gradcheck(a: GradcheckArgs) -> Result<bool, MotifError> {
    let cfg = GradcheckConfig {
        instances: a.instances,
        seed: a.seed,
        ..GradcheckConfig::default()
    };
    let r = run_gradcheck(&cfg)?;
    for (name, e) in [
        ("frequency", r.frequency),
        ("violation", r.violation),
        ("objective", r.objective),
    ] {
        println!(
            "{name:<10} max_rel={:.3e} max_abs_small={:.3e} failures={}",
            e.max_rel, e.max_abs_small, e.failures
        );
    }
    let ok = r.passed();
    println!("{} instances: {}", r.instances, if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Discover(a) => discover(a),
        Command::Synth(a) => synth(a),
        Command::Compare(a) => compare(a),
        Command::Gradcheck(a) => match gradcheck(a) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(EXIT_GRADCHECK),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
