//! Command-line front end. Exit codes: 0 equivalent (or success), 1 not
//! equivalent (or a violated batch expectation), 2 usage, parse or I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::batch::{run_batch, LineOutcome};
use crate::bench::{run_bench, BenchConfig, Family};
use crate::dag::Arena;
use crate::normalizer::{Scheduling, Session};
use crate::syntax::{parse, to_internal, Formula};

#[derive(Parser, Debug)]
#[command(name = "ocbsl", version, about = "Decide equality of terms in orthocomplemented bisemilattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report whether two formulas are equal.
    Check { f: String, g: String },
    /// Print the canonical internal form of a formula.
    Normalize { f: String },
    /// Check every `<f> == <g> [# expect: eq|neq]` line of a file.
    Batch { file: PathBuf },
    /// Time normalization over sizes 2^min-exp ..= 2^max-exp and print TSV.
    Bench {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        min_exp: u32,
        #[arg(long)]
        max_exp: u32,
        /// Code join children in stored order instead of smallest first.
        #[arg(long)]
        no_size_scheduling: bool,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Fig6,
    Fig7,
    Random,
    NestedSharing,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Fig6 => Family::Fig6,
            FamilyArg::Fig7 => Family::Fig7,
            FamilyArg::Random => Family::Random,
            FamilyArg::NestedSharing => Family::NestedSharing,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().ansi().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match cli.command {
        Command::Check { f, g } => check(&f, &g, out, err),
        Command::Normalize { f } => normalize(&f, out, err),
        Command::Batch { file } => batch(&file, out, err),
        Command::Bench { family, min_exp, max_exp, no_size_scheduling, reps } => {
            let mut config = BenchConfig::new(family.into(), min_exp, max_exp);
            config.reps = reps;
            if no_size_scheduling {
                config.scheduling = Scheduling::StoredOrder;
            }
            match run_bench(&config) {
                Ok(report) => {
                    let _ = out.write_all(report.to_tsv().as_bytes());
                    let _ = writeln!(
                        err,
                        "{}: {} sizes, fitted exponent {:.3}",
                        report.family.name(),
                        report.sizes.len(),
                        report.fitted_exponent
                    );
                    0
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    2
                }
            }
        }
    }
}

fn parse_arg(text: &str, err: &mut dyn Write) -> Option<Formula> {
    match parse(text) {
        Ok(f) => Some(f),
        Err(e) => {
            let _ = writeln!(err, "{}", e.render(text));
            None
        }
    }
}

fn check(f: &str, g: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (Some(f), Some(g)) = (parse_arg(f, err), parse_arg(g, err)) else {
        return 2;
    };
    let mut arena = Arena::new();
    let a = to_internal(&f, &mut arena);
    let b = to_internal(&g, &mut arena);
    if Session::new().equivalent(&arena, a, b) {
        let _ = writeln!(out, "equivalent");
        0
    } else {
        let _ = writeln!(out, "not-equivalent");
        1
    }
}

fn normalize(f: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(f) = parse_arg(f, err) else {
        return 2;
    };
    let mut arena = Arena::new();
    let t = to_internal(&f, &mut arena);
    let mut session = Session::new();
    let code = session.normalize(&arena, t);
    let nf = session.extract_normal_form(&mut arena, code).expect("code comes from this session");
    let _ = writeln!(out, "{}", arena.display(nf));
    0
}

fn batch(path: &PathBuf, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return 2;
        }
    };
    let summary = run_batch(&text);
    for (line, outcome) in &summary.lines {
        match outcome {
            LineOutcome::Checked { equivalent, .. } => {
                let verdict = if *equivalent { "equivalent" } else { "not-equivalent" };
                if outcome.violated() {
                    let _ = writeln!(out, "line {line}: {verdict} (expectation violated)");
                } else {
                    let _ = writeln!(out, "line {line}: {verdict}");
                }
            }
            LineOutcome::Error(e) => {
                let _ = writeln!(err, "line {line}: {e}");
            }
        }
    }
    let _ = writeln!(out, "{summary}");
    summary.exit_code()
}
