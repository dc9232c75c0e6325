//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use motiflearn::harness::{run_on_series, InputSpec, RunSpec, ThresholdSource};
use motiflearn::report::Method;
use motiflearn::{generate_synthetic, write_series, SeriesFormat};
use motiflearn_core::learner::learn_motifs;
use motiflearn_core::{
    brute_force_search, extract_segments, grad_frequency, grad_objective, grad_violation,
    hard_frequency, hard_violation, learn_with_restarts, objective, percentile_threshold,
    restart_seed, segment_frequencies, smooth_frequency, smooth_violation, znormalize,
    LearnConfig, Matrix, MotifSet, SegmentMatrix, Threshold,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs, || {
        format!("{what} took {:.1}s, limit {limit_secs}s", elapsed.as_secs_f64())
    })
}

// ---------------------------------------------------------------------------
// random instances and an independent finite-difference oracle

struct Problem {
    motifs: Vec<Vec<f64>>,
    segments: Vec<Vec<f64>>,
    t: f64,
    alpha: f64,
}

impl Problem {
    fn motif_set(&self) -> MotifSet {
        MotifSet::from_rows(&self.motifs).unwrap()
    }
    fn segment_matrix(&self) -> SegmentMatrix {
        SegmentMatrix::from_rows(Matrix::from_rows(&self.segments).unwrap()).unwrap()
    }
    fn threshold(&self) -> Threshold {
        Threshold::new(self.t).unwrap()
    }
}

fn random_problem(rng: &mut ChaCha8Rng) -> Problem {
    let k = rng.random_range(1..=4usize);
    let j = rng.random_range(1..=8usize);
    let l = rng.random_range(1..=16usize);
    let t: f64 = rng.random_range(0.1..=10.0);
    let alpha = [1.0, 2.0, 3.0][rng.random_range(0..3)];
    let segments: Vec<Vec<f64>> = (0..j)
        .map(|_| (0..l).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let spread = (t / l as f64).sqrt();
    let mut motifs: Vec<Vec<f64>> = Vec::new();
    for kk in 0..k {
        let anchor = if kk > 0 && rng.random_bool(0.5) {
            motifs[rng.random_range(0..kk)].clone()
        } else {
            segments[rng.random_range(0..j)].clone()
        };
        motifs.push(anchor.iter().map(|v| v + 0.8 * spread * rng.random_range(-1.0..1.0)).collect());
    }
    Problem {
        motifs,
        segments,
        t,
        alpha,
    }
}

fn finite_difference(motifs: &[Vec<f64>], f: impl Fn(&MotifSet) -> f64) -> Vec<Vec<f64>> {
    const H: f64 = 1e-5;
    let mut out = vec![vec![0.0; motifs[0].len()]; motifs.len()];
    for k in 0..motifs.len() {
        for l in 0..motifs[0].len() {
            let mut up = motifs.to_vec();
            up[k][l] += H;
            let mut down = motifs.to_vec();
            down[k][l] -= H;
            out[k][l] = (f(&MotifSet::from_rows(&up).unwrap())
                - f(&MotifSet::from_rows(&down).unwrap()))
                / (2.0 * H);
        }
    }
    out
}

/// Returns (max relative error, max absolute error on small entries).
fn gradient_error(analytic: &Matrix, numeric: &[Vec<f64>]) -> (f64, f64) {
    let mut rel: f64 = 0.0;
    let mut abs_small: f64 = 0.0;
    for (k, row) in numeric.iter().enumerate() {
        for (l, &n) in row.iter().enumerate() {
            let a = analytic.get(k, l);
            if a.abs() < 1e-6 {
                abs_small = abs_small.max((a - n).abs());
            } else {
                rel = rel.max((a - n).abs() / a.abs());
            }
        }
    }
    (rel, abs_small)
}

fn gradient_suite() -> Check {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = [(0.0f64, 0.0f64); 3];
    let mut active_violation = 0;
    for _ in 0..100 {
        let p = random_problem(&mut rng);
        let (m, s, th) = (p.motif_set(), p.segment_matrix(), p.threshold());
        let checks = [
            (
                grad_frequency(&m, &s, &th, p.alpha).unwrap(),
                finite_difference(&p.motifs, |x| {
                    smooth_frequency(x, &s, &th, p.alpha).unwrap().total_smooth
                }),
            ),
            (
                grad_violation(&m, &th).unwrap(),
                finite_difference(&p.motifs, |x| smooth_violation(x, &th).unwrap()),
            ),
            (
                grad_objective(&m, &s, &th, p.alpha).unwrap(),
                finite_difference(&p.motifs, |x| objective(x, &s, &th, p.alpha).unwrap()),
            ),
        ];
        if smooth_violation(&m, &th).unwrap() > 0.0 {
            active_violation += 1;
        }
        for (w, (a, n)) in worst.iter_mut().zip(&checks) {
            let (r, ab) = gradient_error(a, n);
            w.0 = w.0.max(r);
            w.1 = w.1.max(ab);
        }
    }
    for (name, (r, ab)) in ["frequency", "violation", "objective"].iter().zip(worst) {
        ensure(r < 1e-4 && ab < 1e-8, || {
            format!("{name} gradient: max rel {r:.2e}, max abs(small) {ab:.2e}")
        })?;
    }
    ensure(active_violation > 10, || {
        format!("only {active_violation} instances exercised the violation term")
    })?;
    within(started.elapsed(), 10.0, "gradient suite")?;
    Ok(format!(
        "max rel err F {:.1e} V {:.1e} O {:.1e}; {active_violation}/100 with active penalty",
        worst[0].0, worst[1].0, worst[2].0
    ))
}

fn range_suite() -> Check {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut zero_checks = 0;
    for i in 0..1000 {
        let p = random_problem(&mut rng);
        let (m, s, th) = (p.motif_set(), p.segment_matrix(), p.threshold());
        let f = smooth_frequency(&m, &s, &th, p.alpha).unwrap().total_smooth;
        let v = smooth_violation(&m, &th).unwrap();
        let o = objective(&m, &s, &th, p.alpha).unwrap();
        ensure(f > 0.0 && f <= 1.0, || format!("instance {i}: F = {f}"))?;
        ensure((0.0..=1.0).contains(&v), || format!("instance {i}: V = {v}"))?;
        ensure(o > -1.0 && o <= 1.0, || format!("instance {i}: O = {o}"))?;

        let all_far = (0..p.motifs.len()).all(|a| {
            (a + 1..p.motifs.len()).all(|b| {
                let d: f64 = p.motifs[a]
                    .iter()
                    .zip(&p.motifs[b])
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum();
                d >= 2.0 * p.t
            })
        });
        ensure((v == 0.0) == all_far, || {
            format!("instance {i}: V = {v} but all pairs >= 2T is {all_far}")
        })?;
        if all_far {
            zero_checks += 1;
        }

        if p.motifs.len() >= 2 {
            let same: Vec<Vec<f64>> = vec![p.motifs[0].clone(); p.motifs.len()];
            let same = MotifSet::from_rows(&same).unwrap();
            let v = smooth_violation(&same, &th).unwrap();
            ensure(v == 1.0, || format!("instance {i}: identical motifs give V = {v}"))?;
            ensure(hard_violation(&same, &th).unwrap() == 1.0, || "hard violation of identical motifs".into())?;
        }
    }
    within(started.elapsed(), 5.0, "range suite")?;
    Ok(format!("1000 instances, {zero_checks} with every pair >= 2T"))
}

// ---------------------------------------------------------------------------
// naive transcription of the nontrivial counting loop

fn naive_count(motif: &[f64], rows: &[Vec<f64>], t: f64) -> (usize, Vec<usize>) {
    let mut count = 0;
    let mut last = i64::MIN / 2;
    let mut idx = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let d: f64 = motif.iter().zip(row).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < t {
            if r as i64 - last > 1 {
                count += 1;
                idx.push(r);
            }
            last = r as i64;
        }
    }
    (count, idx)
}

fn clustered_rows(rng: &mut ChaCha8Rng, j: usize, l: usize) -> Vec<Vec<f64>> {
    let centers: Vec<Vec<f64>> = (0..4)
        .map(|_| (0..l).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    (0..j)
        .map(|_| {
            let c = &centers[rng.random_range(0..4)];
            c.iter().map(|v| v + 0.3 * rng.random_range(-1.0..1.0)).collect()
        })
        .collect()
}

fn oracle_equivalence() -> Check {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    for i in 0..50 {
        let j = rng.random_range(1..=64);
        let l = rng.random_range(1..=8);
        let k = rng.random_range(1..=4);
        let rows = clustered_rows(&mut rng, j, l);
        let motif_rows = clustered_rows(&mut rng, k, l);
        let t = rng.random_range(0.05..1.5);
        let th = Threshold::new(t).unwrap();
        let s = SegmentMatrix::from_rows(Matrix::from_rows(&rows).unwrap()).unwrap();
        let hard = hard_frequency(&MotifSet::from_rows(&motif_rows).unwrap(), &s, &th).unwrap();
        for (kk, m) in motif_rows.iter().enumerate() {
            let (c, idx) = naive_count(m, &rows, t);
            ensure(hard.per_motif[kk] == c && hard.matches[kk] == idx, || {
                format!("instance {i} motif {kk}: {} vs oracle {c}", hard.per_motif[kk])
            })?;
        }
        let f = segment_frequencies(&s, &th);
        for (jj, row) in rows.iter().enumerate() {
            let c = naive_count(row, &rows, t).0;
            ensure(f.counts[jj] == c, || {
                format!("instance {i} segment {jj}: {} vs oracle {c}", f.counts[jj])
            })?;
        }
    }
    for i in 0..20 {
        let j = rng.random_range(1..=200);
        let l = rng.random_range(1..=6);
        let rows = clustered_rows(&mut rng, j, l);
        let t = rng.random_range(0.05..1.0);
        let s = SegmentMatrix::from_rows(Matrix::from_rows(&rows).unwrap()).unwrap();
        let best = rows.iter().map(|r| naive_count(r, &rows, t).0).max().unwrap();
        let r = brute_force_search(&s, &Threshold::new(t).unwrap(), 3).unwrap();
        let first = naive_count(&rows[r.segment_indices[0]], &rows, t).0;
        ensure(first == best, || format!("search instance {i}: first pick {first}, max {best}"))?;
    }
    within(started.elapsed(), 30.0, "oracle equivalence")?;
    Ok("50 counting instances (J <= 64), 20 search instances (J <= 200)".into())
}

// ---------------------------------------------------------------------------
// learner behaviour on a fixed synthetic instance

fn convergence_instance() -> (SegmentMatrix, Threshold) {
    let s = generate_synthetic(100_000, 100, 10, 1.0, 11).unwrap();
    let segs = extract_segments(&s.series, 100, 50).unwrap();
    let t = percentile_threshold(&segs, 1.0, 2_000_000, 11).unwrap();
    (segs, t)
}

fn convergence_config(t: Threshold) -> LearnConfig {
    let mut cfg = LearnConfig::new(t, 3, 100);
    cfg.alpha = 2.0;
    cfg.eta = 0.1;
    cfg.iters = 300;
    cfg.restarts = 5;
    cfg.seed = 5;
    cfg.trace = true;
    cfg
}

fn convergence(segs: &SegmentMatrix, t: Threshold) -> Check {
    let cfg = convergence_config(t);
    let r = learn_with_restarts(segs, &cfg).unwrap();
    let trace = r.trace.as_ref().unwrap();
    let first = trace.objective[0];
    let last = *trace.objective.last().unwrap();
    ensure(r.hard_violation_final == 0.0 && r.diverse, || {
        format!("hard violation {} (diverse: {})", r.hard_violation_final, r.diverse)
    })?;
    ensure(r.smooth_violation_final < 0.01, || {
        format!("smooth violation {}", r.smooth_violation_final)
    })?;
    ensure(*trace.smooth_violation.last().unwrap() < 0.01, || "trace violation".into())?;
    ensure(last > first, || format!("objective {first} -> {last}"))?;
    Ok(format!(
        "J={} T={:.2}: restart {}, objective {first:.4} -> {last:.4}, V {:.2e}, F={}",
        segs.len(),
        t.value,
        r.restart_index,
        r.smooth_violation_final,
        r.hard.total
    ))
}

fn ablation(segs: &SegmentMatrix, t: Threshold) -> Check {
    let mut cfg = convergence_config(t);
    cfg.trace = false;
    let mut wins = 0;
    let mut pairs = Vec::new();
    for seed in 0..10u64 {
        let full = learn_motifs(segs, &cfg, restart_seed(seed, 0)).unwrap();
        let mut off = cfg.clone();
        off.diversity_gradient = false;
        let ablated = learn_motifs(segs, &off, restart_seed(seed, 0)).unwrap();
        if ablated.smooth_violation_final > full.smooth_violation_final {
            wins += 1;
        }
        pairs.push(format!(
            "{:.3}/{:.3}",
            ablated.smooth_violation_final, full.smooth_violation_final
        ));
    }
    ensure(wins >= 8, || format!("ablated violation higher in only {wins}/10: {pairs:?}"))?;
    Ok(format!("ablated > full in {wins}/10 runs"))
}

// ---------------------------------------------------------------------------

fn dominance() -> Check {
    let started = Instant::now();
    let mut at_least = 0;
    let mut total: usize = 0;
    let mut improvements = Vec::new();
    let mut lines = Vec::new();
    for series_seed in [1u64, 2] {
        let s = generate_synthetic(50_000, 150, 20, 1.0, series_seed).unwrap();
        for k in [3usize, 10] {
            for l in [100usize, 200] {
                for pct in [0.1, 1.0] {
                    let mut spec = RunSpec::new(
                        InputSpec {
                            path: format!("synthetic-{series_seed}").into(),
                            format: SeriesFormat::Plain,
                            column: None,
                            delimiter: None,
                        },
                        l,
                        k,
                        ThresholdSource::Percentile {
                            pct,
                            sample_budget: 2_000_000,
                        },
                    );
                    spec.iters = 300;
                    spec.restarts = 20;
                    spec.seed = series_seed;
                    let r = run_on_series(&s.series, &spec).unwrap();
                    let bfm = r.method(Method::Brute).unwrap();
                    let lm = r.method(Method::Learn).unwrap();
                    total += 1;
                    if lm.total_frequency >= bfm.total_frequency {
                        at_least += 1;
                    }
                    if bfm.total_frequency > 0 {
                        improvements.push(
                            (lm.total_frequency as f64 - bfm.total_frequency as f64)
                                / bfm.total_frequency as f64,
                        );
                    }
                    lines.push(format!(
                        "    series {series_seed} K={k:<2} L={l} pct={pct:<3}: BFM {:>4} LM {:>4}{}",
                        bfm.total_frequency,
                        lm.total_frequency,
                        if lm.flags.is_empty() { String::new() } else { format!(" {:?}", lm.flags) }
                    ));
                }
            }
        }
    }
    let mean = improvements.iter().sum::<f64>() / improvements.len() as f64;
    println!("{}", lines.join("\n"));
    // the ratio 10 of 12 applied to the 16 configurations of the grid
    let needed = (total * 10).div_ceil(12);
    ensure(at_least >= needed, || format!("LM >= BFM in {at_least}/{total}, need {needed}"))?;
    ensure(mean > 0.0, || format!("mean improvement {mean}"))?;
    within(started.elapsed(), 900.0, "dominance")?;
    Ok(format!(
        "LM >= BFM in {at_least}/{total} (need {needed}), mean improvement {:+.1}%",
        100.0 * mean
    ))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("series.txt");
    let s = generate_synthetic(6000, 60, 8, 0.5, 3).unwrap();
    write_series(&input, &s.series).map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_motiflearn");
    let run = |out: &Path, extra: &[&str]| -> Result<Vec<u8>, String> {
        let status = Command::new(bin)
            .args(["discover", "--input"])
            .arg(&input)
            .args([
                "--length", "60", "--motifs", "3", "--percentile", "1", "--iters", "60",
                "--restarts", "6", "--seed", "9", "--trace", "--output",
            ])
            .arg(out)
            .args(extra)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("discover exited with {status}"))?;
        std::fs::read(out).map_err(|e| e.to_string())
    };
    let a = run(&dir.path().join("a.json"), &[])?;
    let b = run(&dir.path().join("b.json"), &[])?;
    let c = run(&dir.path().join("c.json"), &["--sequential"])?;
    ensure(a == b, || "two parallel runs differ".into())?;
    ensure(a == c, || "parallel and sequential runs differ".into())?;
    Ok(format!("{} byte reports identical (parallel x2, sequential)", a.len()))
}

fn znormalization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..1000 {
        let n = rng.random_range(2..200);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-50.0..50.0)).collect();
        let z = znormalize(&x);
        let zz = znormalize(&z);
        let a = rng.random_range(0.01..100.0);
        let b = rng.random_range(-1000.0..1000.0);
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let zy = znormalize(&y);
        for l in 0..n {
            ensure((z[l] - zz[l]).abs() < 1e-9, || format!("segment {i}: not idempotent"))?;
            ensure((z[l] - zy[l]).abs() < 1e-9, || format!("segment {i}: not affine invariant"))?;
        }
        let c = rng.random_range(-1e6..1e6);
        ensure(znormalize(&vec![c; n]).iter().all(|v| *v == 0.0), || {
            format!("constant {c} not mapped to zeros")
        })?;
    }
    Ok("1000 random segments".into())
}

fn main() {
    let mut failed = 0;
    let mut report = |name: &str, outcome: Check, started: Instant| {
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name} ({secs:.1}s): {why}");
            }
        }
    };

    let now = Instant::now();
    report("gradient suite", gradient_suite(), now);
    let now = Instant::now();
    report("range/normalization suite", range_suite(), now);
    let now = Instant::now();
    report("oracle equivalence", oracle_equivalence(), now);

    let (segs, t) = convergence_instance();
    let now = Instant::now();
    report("convergence", convergence(&segs, t), now);
    let now = Instant::now();
    report("ablation", ablation(&segs, t), now);

    let now = Instant::now();
    report("desk-scale dominance", dominance(), now);
    let now = Instant::now();
    report("determinism", determinism(), now);
    let now = Instant::now();
    report("z-normalization", znormalization(), now);

    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
