//! Decision procedure for equality of terms over orthocomplemented
//! bisemilattices: the theory of `|`, `&`, `!`, `0`, `1` obeying every
//! Boolean law except absorption and distributivity.
//!
//! The pipeline is [`syntax::parse`] → [`syntax::to_internal`] (conjunctions
//! become negated joins) → [`normalizer::Session::normalize`], which assigns
//! each term a [`normalizer::Code`] naming its equivalence class. Two
//! independent oracles back the tests: a naive rewriting engine
//! ([`rewrite`]) and a truth-table evaluator ([`boolean`]).

pub mod batch;
pub mod bench;
pub mod boolean;
pub mod cli;
pub mod dag;
pub mod enumerate;
pub mod families;
pub mod normalizer;
pub mod rewrite;
pub mod syntax;
pub mod tree;

pub use dag::{Arena, Node, TermRef, TreeSize};
pub use normalizer::{equivalent, Code, Scheduling, Session, Stats};
pub use syntax::{parse, print_formula, to_internal, Formula, ParseError};
pub use tree::Tree;
