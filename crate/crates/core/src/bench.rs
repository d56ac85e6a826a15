//! Scaling benchmark: runs the pipeline over a geometric range of input
//! sizes and fits the log-log slope of normalization time against size.
//!
//! Building the arena is timed separately and left out of the fit. It is
//! linear and unaffected by the scheduling mode, and at these sizes it costs
//! about as much as normalization itself, which would flatten the slope the
//! benchmark exists to measure.

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dag::{Arena, TermRef};
use crate::families::{diamond_chain, fig6, fig7, random_formula};
use crate::normalizer::{Scheduling, Session, Stats};
use crate::syntax::{to_internal, Formula};

/// Fewest sizes a slope is fitted over.
pub const MIN_POINTS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Fig6,
    Fig7,
    Random,
    NestedSharing,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Fig6 => "fig6",
            Family::Fig7 => "fig7",
            Family::Random => "random",
            Family::NestedSharing => "nested-sharing",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub family: Family,
    pub min_exp: u32,
    pub max_exp: u32,
    pub scheduling: Scheduling,
    pub reps: usize,
}

impl BenchConfig {
    pub fn new(family: Family, min_exp: u32, max_exp: u32) -> Self {
        BenchConfig { family, min_exp, max_exp, scheduling: Scheduling::SmallestFirst, reps: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("need at least {MIN_POINTS} sizes, got {0}")]
    TooFewSizes(usize),
    #[error("exponents must lie in 3..=30")]
    ExponentOutOfRange,
    #[error("need at least one repetition")]
    NoRepetitions,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub family: Family,
    pub scheduling: Scheduling,
    /// Input node counts, strictly increasing.
    pub sizes: Vec<u64>,
    /// Median wall-clock nanoseconds of normalization per size. Short runs
    /// are repeated within a sample and averaged.
    pub times: Vec<u64>,
    /// Median wall-clock nanoseconds of arena construction per size.
    pub build_times: Vec<u64>,
    /// Counters from the last repetition at each size.
    pub stats: Vec<Stats>,
    pub fitted_exponent: f64,
}

impl BenchReport {
    /// `# family=<name>` header, one `size\tnanos\tcodes_allocated` row per
    /// size, then the fitted slope as a trailing comment.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# family={}\n", self.family.name());
        if self.scheduling == Scheduling::StoredOrder {
            out.push_str("# scheduling=stored-order\n");
        }
        for ((size, nanos), stats) in self.sizes.iter().zip(&self.times).zip(&self.stats) {
            let _ = writeln!(out, "{size}\t{nanos}\t{}", stats.codes_allocated);
        }
        let _ = writeln!(out, "# fitted_exponent={:.4}", self.fitted_exponent);
        out
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_exponent(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn median(samples: &mut [u64]) -> u64 {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

enum Input {
    /// A formula and its node count.
    Formula(Formula, usize),
    Depth(usize),
}

/// Largest instance of `family` with at most `target` nodes (at least the
/// smallest instance).
fn instance(family: Family, target: u64) -> (Input, u64) {
    let t = target as usize;
    match family {
        Family::Fig6 => {
            let f = fig6(t.saturating_sub(3).max(2) / 2);
            let n = f.node_count();
            (Input::Formula(f, n), n as u64)
        }
        Family::Fig7 => {
            let f = fig7(t.saturating_sub(3).max(10) / 10);
            let n = f.node_count();
            (Input::Formula(f, n), n as u64)
        }
        Family::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(target);
            let f = random_formula(&mut rng, t, 16);
            (Input::Formula(f, t), target)
        }
        Family::NestedSharing => {
            let depth = t.saturating_sub(1).max(5) / 5;
            (Input::Depth(depth), 1 + 5 * depth as u64)
        }
    }
}

fn build(input: &Input) -> (Arena, TermRef) {
    match input {
        Input::Formula(f, nodes) => {
            let mut arena = Arena::with_capacity(*nodes);
            let root = to_internal(f, &mut arena);
            (arena, root)
        }
        Input::Depth(d) => {
            let mut arena = Arena::with_capacity(1 + 5 * d);
            let root = diamond_chain(&mut arena, *d);
            (arena, root)
        }
    }
}

/// Shortest span one timing sample should cover; quicker runs are repeated
/// and averaged.
const MIN_SAMPLE_NANOS: u64 = 2_000_000;

/// One sample: build and normalization nanoseconds, each averaged over
/// `batch` runs, and the counters of the last run.
fn sample(input: &Input, scheduling: Scheduling, batch: u64) -> (u64, u64, Stats) {
    let (mut build_total, mut norm_total) = (0u128, 0u128);
    let mut stats = Stats::default();
    for _ in 0..batch {
        let start = Instant::now();
        let (arena, root) = build(input);
        let built = Instant::now();
        let mut session = Session::with_scheduling(scheduling);
        session.normalize(&arena, root);
        let done = Instant::now();
        build_total += (built - start).as_nanos();
        norm_total += (done - built).as_nanos();
        stats = *session.stats();
    }
    let avg = |total: u128| ((total / batch as u128) as u64).max(1);
    (avg(build_total), avg(norm_total), stats)
}

/// Runs sizes `2^min_exp ..= 2^max_exp` sequentially. Deep inputs recurse
/// through `stacker`, but dropping a deep [`Formula`] does not, so call this
/// from a thread with a generous stack.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    if !(3..=30).contains(&config.min_exp) || !(3..=30).contains(&config.max_exp) {
        return Err(BenchError::ExponentOutOfRange);
    }
    let points = (config.max_exp + 1).saturating_sub(config.min_exp) as usize;
    if points < MIN_POINTS {
        return Err(BenchError::TooFewSizes(points));
    }
    if config.reps == 0 {
        return Err(BenchError::NoRepetitions);
    }
    let mut report = BenchReport {
        family: config.family,
        scheduling: config.scheduling,
        sizes: Vec::new(),
        times: Vec::new(),
        build_times: Vec::new(),
        stats: Vec::new(),
        fitted_exponent: f64::NAN,
    };
    for exp in config.min_exp..=config.max_exp {
        let (input, size) = instance(config.family, 1 << exp);
        // The first run also serves as warm-up.
        let (build, nanos, _) = sample(&input, config.scheduling, 1);
        let batch = (MIN_SAMPLE_NANOS / (build + nanos)).max(1);
        let mut builds = Vec::with_capacity(config.reps);
        let mut samples = Vec::with_capacity(config.reps);
        let mut last = Stats::default();
        for _ in 0..config.reps {
            let (build, nanos, stats) = sample(&input, config.scheduling, batch);
            builds.push(build);
            samples.push(nanos);
            last = stats;
        }
        report.sizes.push(size);
        report.times.push(median(&mut samples));
        report.build_times.push(median(&mut builds));
        report.stats.push(last);
    }
    let points: Vec<(f64, f64)> =
        report.sizes.iter().zip(&report.times).map(|(&s, &t)| (s as f64, t as f64)).collect();
    report.fitted_exponent = fit_exponent(&points);
    Ok(report)
}
