//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ocbsl::bench::{run_bench, BenchConfig, Family};
use ocbsl::boolean::boolean_equivalent;
use ocbsl::enumerate::terms_up_to;
use ocbsl::families::{diamond_chain, random_formula};
use ocbsl::rewrite::{applicable_steps, joinable, reduce, CanonicalTerm, Strategy};
use ocbsl::{parse, print_formula, to_internal, Arena, Code, Formula, Scheduling, Session, Tree};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

/// Runs `f` and also fails it when it overruns `limit`.
fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    let within = elapsed <= limit;
    o.detail = format!("{}; {} (limit {})", o.detail, secs(elapsed), secs(limit));
    o.pass &= within;
    o
}

fn small_terms() -> Vec<Tree> {
    terms_up_to(&["a", "b"], 7)
}

/// Normalizer codes (one shared session) against oracle normal forms: the
/// verdicts agree on every pair exactly when the two partitions coincide.
fn oracle_agreement(terms: &[Tree]) -> Outcome {
    let mut arena = Arena::new();
    let mut session = Session::new();
    let mut code_of_form: HashMap<CanonicalTerm, Code> = HashMap::new();
    let mut form_of_code: HashMap<Code, CanonicalTerm> = HashMap::new();
    let mut disagreements = 0usize;
    let mut example = None;
    for t in terms {
        let form = reduce(t, Strategy::LeftmostInnermost, t.size()).expect("within budget").normal_form;
        let r = arena.add_tree(t);
        let code = session.normalize(&arena, r);
        let a = *code_of_form.entry(form.clone()).or_insert(code);
        let b = form_of_code.entry(code).or_insert_with(|| form.clone()).clone();
        if a != code || b != form {
            disagreements += 1;
            example.get_or_insert_with(|| t.to_string());
        }
    }
    outcome(
        disagreements == 0,
        format!(
            "{} terms, {} classes, {} disagreements{}",
            terms.len(),
            code_of_form.len(),
            disagreements,
            example.map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
    )
}

const PAIRS: usize = 100_000;
const MAX_SURFACE_NODES: usize = 40;
const MAX_VARS: usize = 8;

fn boolean_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c65_1000);
    let names: Vec<String> = (1..=MAX_VARS).map(|i| format!("x{i}")).collect();
    let (mut claimed, mut violations, mut missed) = (0usize, 0usize, 0usize);
    let mut example = None;
    for i in 0..PAIRS {
        let vars = rng.gen_range(1..=MAX_VARS);
        let var_names: Vec<&str> = names[..vars].iter().map(String::as_str).collect();
        let nodes = rng.gen_range(1..=30);
        let f = random_formula(&mut rng, nodes, vars);
        let grow = |g: Formula, rng: &mut ChaCha8Rng, boolean: bool| {
            let next = if boolean {
                common::mutate_boolean(&g, &var_names, rng)
            } else {
                common::mutate_equal(&g, &var_names, rng)
            };
            if next.node_count() <= MAX_SURFACE_NODES {
                next
            } else {
                g
            }
        };
        // Thirds: unrelated pairs, equal by the theory's laws, and related by
        // a Boolean-only law (plus some theory laws on top).
        let kind = i % 3;
        let g = match kind {
            0 => {
                let nodes = rng.gen_range(1..=30);
                random_formula(&mut rng, nodes, vars)
            }
            1 => (0..rng.gen_range(1..=4)).fold(f.clone(), |g, _| grow(g, &mut rng, false)),
            _ => {
                let g = grow(f.clone(), &mut rng, true);
                (0..rng.gen_range(0..=2)).fold(g, |g, _| grow(g, &mut rng, false))
            }
        };
        assert!(f.node_count() <= MAX_SURFACE_NODES && g.node_count() <= MAX_SURFACE_NODES);

        let mut arena = Arena::new();
        let (a, b) = (to_internal(&f, &mut arena), to_internal(&g, &mut arena));
        let equivalent = Session::new().equivalent(&arena, a, b);
        if kind == 1 && !equivalent {
            missed += 1;
            example.get_or_insert_with(|| format!("missed {} == {}", print_formula(&f), print_formula(&g)));
        }
        if equivalent {
            claimed += 1;
            if !boolean_equivalent(&arena, a, b).expect("at most eight variables") {
                violations += 1;
                example.get_or_insert_with(|| format!("unsound {} == {}", print_formula(&f), print_formula(&g)));
            }
        }
    }
    outcome(
        violations == 0 && missed == 0,
        format!(
            "{PAIRS} pairs, {claimed} judged equivalent, {violations} truth-table violations, \
             {missed} law-derived pairs missed{}",
            example.map(|e| format!(" ({e})")).unwrap_or_default()
        ),
    )
}

fn regressions() -> Outcome {
    let equal = [
        ("(a & b) | !(a & b)", "1"),
        ("!0", "1"),
        ("!1", "0"),
        ("0 | !0", "1"),
        ("!x | !!x | y", "1"),
        ("x | (y1 | y2) | !(y1 | y2)", "1"),
        ("x1 | x2 | y1 | y2 | !(y1 | y2)", "1"),
        ("y | !(y)", "1"),
        ("p | q | r | !(q | r | q)", "1"),
        ("x | y", "y | x"),
        ("x & y", "y & x"),
        ("x | (y | z)", "(x | y) | z"),
        ("x & (y & z)", "(x & y) & z"),
        ("x | x", "x"),
        ("x & x", "x"),
        ("x | 1", "1"),
        ("x & 0", "0"),
        ("x | 0", "x"),
        ("x & 1", "x"),
        ("!!x", "x"),
        ("x | !x", "1"),
        ("x & !x", "0"),
        ("!(x | y)", "!x & !y"),
        ("!(x & y)", "!x | !y"),
        ("!(a | b | c)", "!c & !a & !b"),
    ];
    let unequal = [
        ("x | (x & y)", "x"),
        ("x & (x | y)", "x"),
        ("x | (y & z)", "(x | y) & (x | z)"),
        ("x & (y | z)", "(x & y) | (x & z)"),
        ("x", "y"),
        ("x | y", "x & y"),
    ];
    let mut failures = Vec::new();
    for (expected, cases) in [(true, &equal[..]), (false, &unequal[..])] {
        for &(l, r) in cases {
            let mut arena = Arena::new();
            let a = to_internal(&parse(l).unwrap(), &mut arena);
            let b = to_internal(&parse(r).unwrap(), &mut arena);
            if Session::new().equivalent(&arena, a, b) != expected {
                failures.push(format!("{l} vs {r}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} equal and {} unequal pairs, failures: [{}]", equal.len(), unequal.len(), failures.join("; ")),
    )
}

fn local_confluence(terms: &[Tree]) -> Outcome {
    let (mut pairs, mut failures) = (0usize, 0usize);
    let mut example = None;
    for t in terms {
        let steps = applicable_steps(t);
        for (i, s1) in steps.iter().enumerate() {
            for s2 in &steps[i + 1..] {
                if s1.after == s2.after {
                    continue;
                }
                pairs += 1;
                let budget = t.size();
                if !joinable(s1.after.as_tree(), s2.after.as_tree(), budget).unwrap_or(false) {
                    failures += 1;
                    example.get_or_insert_with(|| format!("{t}: {} / {}", s1.after, s2.after));
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!(
            "{} terms, {pairs} distinct reduct pairs, {failures} not joinable{}",
            terms.len(),
            example.map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
    )
}

fn termination(terms: &[Tree]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut inputs: Vec<Tree> = terms.to_vec();
    let mut arena = Arena::new();
    for _ in 0..5_000 {
        let nodes = rng.gen_range(1..=30);
        let f = random_formula(&mut rng, nodes, 4);
        let t = to_internal(&f, &mut arena);
        inputs.push(arena.to_tree(t));
    }
    let (mut failures, mut worst) = (0usize, 0.0f64);
    for t in &inputs {
        for strategy in [Strategy::LeftmostInnermost, Strategy::RightmostOutermost] {
            match reduce(t, strategy, t.size()) {
                Ok(r) => worst = worst.max(r.steps as f64 / t.size() as f64),
                Err(_) => failures += 1,
            }
        }
    }
    outcome(
        failures == 0,
        format!("{} inputs, both strategies, {failures} over budget, max steps/size {worst:.2}", inputs.len()),
    )
}

fn quasilinearity() -> Outcome {
    let runs = [
        (Family::Fig6, Scheduling::SmallestFirst, "fig6", true),
        (Family::Fig7, Scheduling::SmallestFirst, "fig7", true),
        (Family::Fig7, Scheduling::StoredOrder, "fig7 stored-order", false),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (family, scheduling, name, quasilinear) in runs {
        let mut config = BenchConfig::new(family, 10, 17);
        config.scheduling = scheduling;
        let report = run_bench(&config).expect("valid bench config");
        let e = report.fitted_exponent;
        let ok = if quasilinear { e <= 1.2 } else { e >= 1.7 };
        pass &= ok && e.is_finite();
        parts.push(format!("{name} {e:.3} ({} {})", if quasilinear { "<=" } else { ">=" }, if quasilinear { 1.2 } else { 1.7 }));
    }
    outcome(pass, format!("sizes 2^10..2^17, exponents: {}", parts.join(", ")))
}

fn dag_sharing() -> Outcome {
    const DEPTH: usize = 60;
    let mut arena = Arena::new();
    let root = diamond_chain(&mut arena, DEPTH);
    let expanded = arena.tree_size(root);
    let start = Instant::now();
    let mut session = Session::new();
    session.normalize(&arena, root);
    let elapsed = start.elapsed();
    let codes = session.stats().codes_allocated;
    let pass = expanded.get() > 1 << 60 && elapsed < Duration::from_secs(1) && codes <= 4 * DEPTH as u64 + 4;
    outcome(
        pass,
        format!(
            "depth {DEPTH}, expanded size {}{}, {} DAG nodes, {codes} codes (limit {}), {:.3} ms (limit 1 s)",
            expanded.get(),
            if expanded.is_saturated() { " (saturated)" } else { "" },
            arena.len(),
            4 * DEPTH + 4,
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut inputs = vec![
        "(a & b) | !(a & b) | c".to_owned(),
        print_formula(&ocbsl::families::fig7(6)),
        "x & (y | !z) & !(w | (x & !y))".to_owned(),
    ];
    inputs.extend((0..3).map(|_| print_formula(&random_formula(&mut rng, 40, 8))));
    let mut differing = 0;
    for f in &inputs {
        let run = || Command::new(env!("CARGO_BIN_EXE_ocbsl")).args(["normalize", f]).output().unwrap();
        let (first, second) = (run(), run());
        if !first.status.success() || first.stdout != second.stdout {
            differing += 1;
        }
    }
    outcome(differing == 0, format!("{} inputs normalized twice, {differing} differed", inputs.len()))
}

fn main() -> ExitCode {
    let worker = std::thread::Builder::new().stack_size(1 << 30).spawn(|| {
        let terms = small_terms();
        let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
            ("oracle agreement, all terms <= 7 nodes", Box::new(|| timed(Duration::from_secs(60), || oracle_agreement(&terms)))),
            ("boolean soundness, random pairs", Box::new(|| timed(Duration::from_secs(120), boolean_soundness))),
            ("worked-example regressions", Box::new(|| timed(Duration::from_secs(1), regressions))),
            ("local confluence, all terms <= 7 nodes", Box::new(|| timed(Duration::from_secs(120), || local_confluence(&terms)))),
            ("termination within size steps", Box::new(|| termination(&terms))),
            ("quasilinear scaling", Box::new(|| timed(Duration::from_secs(300), quasilinearity))),
            ("shared-diamond chain", Box::new(dag_sharing)),
            ("normalize output determinism", Box::new(determinism)),
        ];
        let mut all = true;
        for (i, (name, run)) in criteria.into_iter().enumerate() {
            let o = panic::catch_unwind(AssertUnwindSafe(run))
                .unwrap_or_else(|e| {
                    let msg = e
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    outcome(false, format!("panicked: {msg}"))
                });
            all &= o.pass;
            println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        }
        all
    });
    if worker.expect("spawn").join().unwrap_or(false) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
