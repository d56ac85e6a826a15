//! Batch files: one `<formula> == <formula> [# expect: eq|neq]` check per
//! line, `#` comment lines and blank lines skipped.

use std::fmt;

use crate::dag::Arena;
use crate::normalizer::Session;
use crate::syntax::{parse, to_internal, Formula, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Equivalent,
    NotEquivalent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchLine {
    pub left: Formula,
    pub right: Formula,
    pub expect: Option<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineError {
    MissingSeparator,
    BadExpectation(String),
    /// Which side failed, the side's text and the error within it.
    Parse { side: &'static str, text: String, error: ParseError },
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineError::MissingSeparator => f.write_str("expected exactly one `==`"),
            LineError::BadExpectation(s) => write!(f, "unknown expectation `{s}`, use `eq` or `neq`"),
            LineError::Parse { side, text, error } => {
                write!(f, "in {side} formula: {}", error.render(text))
            }
        }
    }
}

/// Parses one non-comment line. Returns `Ok(None)` for blank and comment
/// lines.
pub fn parse_line(line: &str) -> Result<Option<BatchLine>, LineError> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let (body, comment) = match trimmed.split_once('#') {
        Some((b, c)) => (b, Some(c.trim())),
        None => (trimmed, None),
    };
    let expect = match comment.and_then(|c| c.strip_prefix("expect:")) {
        None => None,
        Some(v) => match v.trim() {
            "eq" => Some(Expectation::Equivalent),
            "neq" => Some(Expectation::NotEquivalent),
            other => return Err(LineError::BadExpectation(other.to_owned())),
        },
    };
    let mut sides = body.split("==");
    let (Some(l), Some(r), None) = (sides.next(), sides.next(), sides.next()) else {
        return Err(LineError::MissingSeparator);
    };
    let side = |name: &'static str, text: &str| {
        let text = text.trim();
        parse(text).map_err(|error| LineError::Parse { side: name, text: text.to_owned(), error })
    };
    Ok(Some(BatchLine { left: side("left", l)?, right: side("right", r)?, expect }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineOutcome {
    Checked { equivalent: bool, expect: Option<Expectation> },
    Error(LineError),
}

impl LineOutcome {
    pub fn violated(&self) -> bool {
        match self {
            LineOutcome::Checked { equivalent, expect: Some(e) } => {
                *equivalent != (*e == Expectation::Equivalent)
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatchSummary {
    /// 1-based line number and outcome, for every non-skipped line.
    pub lines: Vec<(usize, LineOutcome)>,
}

impl BatchSummary {
    pub fn checked(&self) -> usize {
        self.lines.iter().filter(|(_, o)| matches!(o, LineOutcome::Checked { .. })).count()
    }

    pub fn equivalent(&self) -> usize {
        self.lines
            .iter()
            .filter(|(_, o)| matches!(o, LineOutcome::Checked { equivalent: true, .. }))
            .count()
    }

    pub fn violations(&self) -> usize {
        self.lines.iter().filter(|(_, o)| o.violated()).count()
    }

    pub fn errors(&self) -> usize {
        self.lines.iter().filter(|(_, o)| matches!(o, LineOutcome::Error(_))).count()
    }

    /// 2 if any line failed to parse, else 1 if any expectation was
    /// violated, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.errors() > 0 {
            2
        } else if self.violations() > 0 {
            1
        } else {
            0
        }
    }
}

impl fmt::Display for BatchSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let checked = self.checked();
        let eq = self.equivalent();
        write!(
            f,
            "{checked} checked, {eq} equivalent, {} not-equivalent, {} violated, {} errors",
            checked - eq,
            self.violations(),
            self.errors()
        )
    }
}

/// Checks every line of `text` in one shared arena and session.
pub fn run_batch(text: &str) -> BatchSummary {
    let mut arena = Arena::new();
    let mut session = Session::new();
    let mut summary = BatchSummary::default();
    for (i, line) in text.lines().enumerate() {
        let outcome = match parse_line(line) {
            Ok(None) => continue,
            Ok(Some(b)) => {
                let l = to_internal(&b.left, &mut arena);
                let r = to_internal(&b.right, &mut arena);
                LineOutcome::Checked { equivalent: session.equivalent(&arena, l, r), expect: b.expect }
            }
            Err(e) => LineOutcome::Error(e),
        };
        summary.lines.push((i + 1, outcome));
    }
    summary
}
