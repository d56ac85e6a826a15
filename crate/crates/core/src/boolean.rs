//! Brute-force truth tables. Boolean algebras satisfy every law the
//! normalizer uses, so any pair it calls equivalent must agree here.

use std::collections::HashMap;

use thiserror::Error;

use crate::dag::{Arena, Node, TermRef};
use crate::syntax::Formula;

/// Most variables [`boolean_equivalent`] will enumerate over.
pub const MAX_VARIABLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BooleanError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("{0} variables exceed the enumeration limit of {MAX_VARIABLES}")]
    TooManyVariables(usize),
}

/// Truth values for variables, by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(HashMap<String, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: &str, value: bool) -> &mut Self {
        self.0.insert(name.to_owned(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.0.get(name).copied()
    }
}

impl<'a> FromIterator<(&'a str, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (&'a str, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.to_owned(), v)).collect())
    }
}

enum Op {
    Const(u64),
    Var(usize),
    Neg(usize),
    Join(Vec<usize>),
}

/// Straight-line program over the nodes in `order` (children first), with
/// variables numbered by `var_index`. Each value is a 64-lane bitset, so
/// one pass evaluates 64 assignments.
struct Program {
    ops: Vec<Op>,
    slot: HashMap<TermRef, usize>,
}

impl Program {
    fn compile(
        arena: &Arena,
        order: &[TermRef],
        mut var_index: impl FnMut(&str) -> Result<usize, BooleanError>,
    ) -> Result<Program, BooleanError> {
        let mut slot = HashMap::with_capacity(order.len());
        let mut ops = Vec::with_capacity(order.len());
        for (i, &t) in order.iter().enumerate() {
            ops.push(match arena.node(t) {
                Node::Zero => Op::Const(0),
                Node::One => Op::Const(!0),
                Node::Var(s) => Op::Var(var_index(arena.symbol_name(*s))?),
                Node::Neg(c) => Op::Neg(slot[c]),
                Node::Join(cs) => Op::Join(cs.iter().map(|c| slot[c]).collect()),
            });
            slot.insert(t, i);
        }
        Ok(Program { ops, slot })
    }

    fn run(&self, vars: &[u64], values: &mut Vec<u64>) {
        values.clear();
        for op in &self.ops {
            let v = match op {
                Op::Const(c) => *c,
                Op::Var(i) => vars[*i],
                Op::Neg(c) => !values[*c],
                Op::Join(cs) => cs.iter().fold(0, |acc, &c| acc | values[c]),
            };
            values.push(v);
        }
    }
}

/// Value of `t` under `assignment`: join is max, negation is `1 - x`.
pub fn eval(arena: &Arena, t: TermRef, assignment: &Assignment) -> Result<bool, BooleanError> {
    let order = arena.reverse_topological_order(&[t]);
    let mut vars = Vec::new();
    let program = Program::compile(arena, &order, |name| {
        let value = assignment.get(name).ok_or_else(|| BooleanError::UnboundVariable(name.to_owned()))?;
        vars.push(if value { !0 } else { 0 });
        Ok(vars.len() - 1)
    })?;
    let mut values = Vec::new();
    program.run(&vars, &mut values);
    Ok(values[program.slot[&t]] & 1 == 1)
}

/// Standard semantics of a surface formula.
pub fn eval_formula(f: &Formula, assignment: &Assignment) -> Result<bool, BooleanError> {
    Ok(match f {
        Formula::Var(v) => assignment.get(v).ok_or_else(|| BooleanError::UnboundVariable(v.clone()))?,
        Formula::Const(b) => *b,
        Formula::Not(c) => !eval_formula(c, assignment)?,
        Formula::And(cs) => {
            let mut all = true;
            for c in cs {
                all &= eval_formula(c, assignment)?;
            }
            all
        }
        Formula::Or(cs) => {
            let mut any = false;
            for c in cs {
                any |= eval_formula(c, assignment)?;
            }
            any
        }
    })
}

/// True iff `a` and `b` agree under all assignments to their variables.
pub fn boolean_equivalent(arena: &Arena, a: TermRef, b: TermRef) -> Result<bool, BooleanError> {
    let order = arena.reverse_topological_order(&[a, b]);
    let mut names: Vec<&str> = order
        .iter()
        .filter_map(|&t| match arena.node(t) {
            Node::Var(s) => Some(arena.symbol_name(*s)),
            _ => None,
        })
        .collect();
    names.sort_unstable();
    names.dedup();
    if names.len() > MAX_VARIABLES {
        return Err(BooleanError::TooManyVariables(names.len()));
    }
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let program = Program::compile(arena, &order, |name| Ok(index[name]))?;
    let (sa, sb) = (program.slot[&a], program.slot[&b]);

    // The low six variables vary across the 64 lanes; the rest are fixed
    // per block.
    let n = names.len();
    let lanes = n.min(6);
    let lane_mask: u64 = if lanes == 6 { !0 } else { (1u64 << (1 << lanes)) - 1 };
    let mut vars = vec![0u64; n];
    let mut values = Vec::with_capacity(order.len());
    for block in 0u64..(1u64 << (n - lanes)) {
        for (i, v) in vars.iter_mut().enumerate() {
            *v = if i < lanes {
                (0..64u64).filter(|lane| lane >> i & 1 == 1).fold(0, |acc, lane| acc | 1 << lane)
            } else if block >> (i - lanes) & 1 == 1 {
                !0
            } else {
                0
            };
        }
        program.run(&vars, &mut values);
        if (values[sa] ^ values[sb]) & lane_mask != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
