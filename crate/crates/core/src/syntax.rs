//! Surface formulas: parsing, printing and translation to the internal
//! single-join language.
//!
//! Grammar, loosest to tightest:
//!
//! ```text
//! formula := disj ;
//! disj    := conj { "|" conj } ;
//! conj    := neg  { "&" neg } ;
//! neg     := { "!" | "~" } atom ;
//! atom    := ident | "0" | "1" | "(" formula ")" ;
//! ```
//!
//! Chains of the same operator are flattened into one n-ary node, including
//! through parentheses, and a parenthesized single operand is just that
//! operand.

use std::fmt;

use thiserror::Error;

use crate::dag::{Arena, TermRef};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Const(bool),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_owned())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            count += 1;
            match f {
                Formula::Not(c) => stack.push(c),
                Formula::And(cs) | Formula::Or(cs) => stack.extend(cs.iter()),
                Formula::Var(_) | Formula::Const(_) => {}
            }
        }
        count
    }

    /// The formula the parser would produce from this one's printed form:
    /// same-operator nesting merged, singleton operators dropped.
    pub fn flattened(&self) -> Formula {
        fn merge(op_is_and: bool, cs: &[Formula]) -> Formula {
            let mut out = Vec::with_capacity(cs.len());
            for c in cs {
                match (c.flattened(), op_is_and) {
                    (Formula::And(inner), true) | (Formula::Or(inner), false) => out.extend(inner),
                    (other, _) => out.push(other),
                }
            }
            match (out.len(), op_is_and) {
                (1, _) => out.pop().unwrap(),
                (_, true) => Formula::And(out),
                (_, false) => Formula::Or(out),
            }
        }
        match self {
            Formula::Var(_) | Formula::Const(_) => self.clone(),
            Formula::Not(c) => Formula::not(c.flattened()),
            Formula::And(cs) => merge(true, cs),
            Formula::Or(cs) => merge(false, cs),
        }
    }

    /// Variable names in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Formula::Const(_) => {}
                Formula::Not(c) => stack.push(c),
                Formula::And(cs) | Formula::Or(cs) => stack.extend(cs.iter().rev()),
            }
        }
        out
    }
}

/// Byte range into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at {}..{}", span.start, span.end)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError { span, message: message.into() }
    }

    /// Renders the error with the offending input underlined.
    pub fn render(&self, text: &str) -> String {
        let caret_start = text[..self.span.start.min(text.len())].chars().count();
        let width = text[self.span.start.min(text.len())..self.span.end.min(text.len())]
            .chars()
            .count()
            .max(1);
        format!(
            "error: {}\n  {}\n  {}{}",
            self.message,
            text,
            " ".repeat(caret_start),
            "^".repeat(width)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Const(bool),
    Not,
    And,
    Or,
    Open,
    Close,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Const(b) => format!("constant `{}`", *b as u8),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let single = |tok| Some((tok, SourceSpan::new(i, i + 1)));
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => None,
            b'!' | b'~' => single(Tok::Not),
            b'&' => single(Tok::And),
            b'|' => single(Tok::Or),
            b'(' => single(Tok::Open),
            b')' => single(Tok::Close),
            b'0'..=b'9' => {
                let start = i;
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_alphanumeric() {
                    i += 1;
                }
                let span = SourceSpan::new(start, i + 1);
                match &text[start..=i] {
                    "0" => Some((Tok::Const(false), span)),
                    "1" => Some((Tok::Const(true), span)),
                    other => {
                        return Err(ParseError::new(
                            span,
                            format!("invalid constant `{other}`, expected `0` or `1`"),
                        ))
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Some((Tok::Ident(text[start..=i].to_owned()), SourceSpan::new(start, i + 1)))
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(ParseError::new(
                    SourceSpan::new(i, i + ch.len_utf8()),
                    format!("unexpected character `{ch}`"),
                ));
            }
        };
        toks.extend(tok);
        i += 1;
    }
    toks.push((Tok::End, SourceSpan::new(text.len(), text.len())));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut items = Vec::new();
        push_flat(&mut items, self.conj()?, false);
        while *self.peek() == Tok::Or {
            self.bump();
            push_flat(&mut items, self.conj()?, false);
        }
        Ok(collapse(items, false))
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut items = Vec::new();
        push_flat(&mut items, self.neg()?, true);
        while *self.peek() == Tok::And {
            self.bump();
            push_flat(&mut items, self.neg()?, true);
        }
        Ok(collapse(items, true))
    }

    fn neg(&mut self) -> Result<Formula, ParseError> {
        let mut depth = 0usize;
        while *self.peek() == Tok::Not {
            self.bump();
            depth += 1;
        }
        let mut f = self.atom()?;
        for _ in 0..depth {
            f = Formula::not(f);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let span = self.span();
        match self.bump().0 {
            Tok::Ident(name) => Ok(Formula::Var(name)),
            Tok::Const(b) => Ok(Formula::Const(b)),
            Tok::Open => {
                let inner = stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.disj())?;
                match self.peek() {
                    Tok::Close => {
                        self.bump();
                        Ok(inner)
                    }
                    other => Err(ParseError::new(
                        self.span(),
                        format!("expected `)` to close `(` at {}, found {}", span.start, other.describe()),
                    )),
                }
            }
            Tok::End => Err(ParseError::new(span, "unexpected end of input, expected an operand")),
            other => Err(ParseError::new(
                span,
                format!("expected an operand, found {}", other.describe()),
            )),
        }
    }
}

fn push_flat(items: &mut Vec<Formula>, f: Formula, and: bool) {
    match (f, and) {
        (Formula::And(inner), true) | (Formula::Or(inner), false) => items.extend(inner),
        (other, _) => items.push(other),
    }
}

fn collapse(mut items: Vec<Formula>, and: bool) -> Formula {
    if items.len() == 1 {
        items.pop().unwrap()
    } else if and {
        Formula::And(items)
    } else {
        Formula::Or(items)
    }
}

/// Parses a surface formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let f = p.disj()?;
    match p.peek() {
        Tok::End => Ok(f),
        other => Err(ParseError::new(p.span(), format!("unexpected {}", other.describe()))),
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Or(cs) if cs.len() > 1 => 0,
        Formula::And(cs) if cs.len() > 1 => 1,
        Formula::Or(cs) | Formula::And(cs) => precedence(&cs[0]),
        _ => 2,
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    // Compound operands are always parenthesized, even where precedence
    // would make it unnecessary.
    let child = |out: &mut String, c: &Formula| {
        if precedence(c) < 2 {
            out.push('(');
            write_formula(out, c);
            out.push(')');
        } else {
            write_formula(out, c);
        }
    };
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || match f {
        Formula::Var(v) => out.push_str(v),
        Formula::Const(b) => out.push(if *b { '1' } else { '0' }),
        Formula::Not(c) => {
            out.push('!');
            child(out, c);
        }
        Formula::And(cs) | Formula::Or(cs) if cs.len() == 1 => write_formula(out, &cs[0]),
        Formula::And(cs) | Formula::Or(cs) => {
            let sep = if matches!(f, Formula::And(_)) { " & " } else { " | " };
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                child(out, c);
            }
        }
    })
}

/// Prints a formula so that [`parse`] reads it back (modulo flattening).
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

/// Translates to the internal language by rewriting every conjunction as a
/// negated join of negations. Nothing else is simplified.
pub fn to_internal(f: &Formula, arena: &mut Arena) -> TermRef {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || match f {
        Formula::Var(v) => arena.var(v),
        Formula::Const(false) => arena.zero(),
        Formula::Const(true) => arena.one(),
        Formula::Not(c) => {
            let c = to_internal(c, arena);
            arena.neg(c)
        }
        Formula::Or(cs) => {
            let cs: Vec<TermRef> = cs.iter().map(|c| to_internal(c, arena)).collect();
            arena.join(cs)
        }
        Formula::And(cs) => {
            let negated: Vec<TermRef> = cs
                .iter()
                .map(|c| {
                    let c = to_internal(c, arena);
                    arena.neg(c)
                })
                .collect();
            let j = arena.join(negated);
            arena.neg(j)
        }
    })
}
