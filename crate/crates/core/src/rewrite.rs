//! Naive term rewriting over [`Tree`]s, modulo commutativity of join.
//!
//! This is the reference the normalizer is checked against, so it favours
//! obviousness over speed: terms are kept in canonical form (join children
//! sorted by the [`Tree`] order), every rule is matched at every position,
//! and a normal form is reached by applying one step at a time. Not meant
//! for terms beyond a few dozen nodes.

use std::fmt;

use thiserror::Error;

use crate::tree::Tree;

/// The rewrite rules, all oriented to shrink the term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `|(xs, |(ys))  ->  |(xs, ys)`
    Flatten,
    /// `|(x)  ->  x`
    Unwrap,
    /// `|(x, x, ys)  ->  |(x, ys)`
    Idempotence,
    /// `|(1, xs)  ->  1`
    OneAbsorbs,
    /// `|(0, xs)  ->  |(xs)` for nonempty `xs`
    ZeroIdentity,
    /// `!!x  ->  x`
    DoubleNegation,
    /// `|(x, !x, ys)  ->  1`
    Complement,
    /// `|(xs, ys, !|(ys))  ->  1`
    JoinComplement,
    /// `!0  ->  1`
    NegateZero,
    /// `!1  ->  0`
    NegateOne,
}

impl Rule {
    pub const ALL: [Rule; 10] = [
        Rule::Flatten,
        Rule::Unwrap,
        Rule::Idempotence,
        Rule::OneAbsorbs,
        Rule::ZeroIdentity,
        Rule::DoubleNegation,
        Rule::Complement,
        Rule::JoinComplement,
        Rule::NegateZero,
        Rule::NegateOne,
    ];
}

/// A term with every join's children recursively sorted. Terms equal up to
/// commutativity have equal canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalTerm(Tree);

impl CanonicalTerm {
    pub fn new(t: &Tree) -> Self {
        CanonicalTerm(canonicalize(t.clone()))
    }

    pub fn as_tree(&self) -> &Tree {
        &self.0
    }

    pub fn into_tree(self) -> Tree {
        self.0
    }
}

impl fmt::Display for CanonicalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn canonicalize(t: Tree) -> Tree {
    match t {
        Tree::Neg(c) => Tree::Neg(Box::new(canonicalize(*c))),
        Tree::Join(cs) => {
            let mut cs: Vec<Tree> = cs.into_iter().map(canonicalize).collect();
            cs.sort();
            Tree::Join(cs)
        }
        leaf => leaf,
    }
}

/// One rewrite of a canonical term. `position` indexes into `before`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    pub position: Vec<usize>,
    pub before: CanonicalTerm,
    pub after: CanonicalTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no normal form within {0} rewrite steps")]
    StepBudgetExceeded(usize),
}

/// Which redex to contract next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftmostInnermost,
    RightmostOutermost,
}

/// Result of driving a term to its normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub normal_form: CanonicalTerm,
    pub steps: usize,
}

fn without(cs: &[Tree], skip: &[usize]) -> Vec<Tree> {
    cs.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, c)| c.clone())
        .collect()
}

/// Whether `needles` is a sub-multiset of `hay` (both sorted).
fn sub_multiset(needles: &[Tree], hay: &[Tree]) -> bool {
    let mut it = hay.iter();
    needles.iter().all(|n| it.by_ref().any(|h| h == n))
}

/// Reducts obtainable by one rule application at the root of `t`.
/// `t` must be canonical; each reduct is returned canonical.
fn root_reducts(t: &Tree) -> Vec<(Rule, Tree)> {
    let mut out = Vec::new();
    match t {
        Tree::Neg(inner) => match inner.as_ref() {
            Tree::Neg(x) => out.push((Rule::DoubleNegation, (**x).clone())),
            Tree::Zero => out.push((Rule::NegateZero, Tree::One)),
            Tree::One => out.push((Rule::NegateOne, Tree::Zero)),
            _ => {}
        },
        Tree::Join(cs) => {
            if cs.len() == 1 {
                out.push((Rule::Unwrap, cs[0].clone()));
            }
            for (i, c) in cs.iter().enumerate() {
                if let Tree::Join(inner) = c {
                    let mut merged = without(cs, &[i]);
                    merged.extend(inner.iter().cloned());
                    out.push((Rule::Flatten, canonicalize(Tree::Join(merged))));
                }
            }
            for i in 1..cs.len() {
                if cs[i] == cs[i - 1] {
                    out.push((Rule::Idempotence, Tree::Join(without(cs, &[i]))));
                }
            }
            if cs.contains(&Tree::One) {
                out.push((Rule::OneAbsorbs, Tree::One));
            }
            if cs.len() >= 2 {
                if let Some(i) = cs.iter().position(|c| *c == Tree::Zero) {
                    out.push((Rule::ZeroIdentity, Tree::Join(without(cs, &[i]))));
                }
            }
            let complement = cs.iter().any(|c| match c {
                Tree::Neg(x) => cs.contains(x.as_ref()),
                _ => false,
            });
            if complement {
                out.push((Rule::Complement, Tree::One));
            }
            for (i, c) in cs.iter().enumerate() {
                if let Tree::Neg(x) = c {
                    if let Tree::Join(ys) = x.as_ref() {
                        if sub_multiset(ys, &without(cs, &[i])) {
                            out.push((Rule::JoinComplement, Tree::One));
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out
}

fn replace_at(t: &Tree, path: &[usize], replacement: &Tree) -> Tree {
    let Some((&head, rest)) = path.split_first() else {
        return replacement.clone();
    };
    match t {
        Tree::Neg(c) => Tree::Neg(Box::new(replace_at(c, rest, replacement))),
        Tree::Join(cs) => {
            let mut cs = cs.clone();
            cs[head] = replace_at(&cs[head], rest, replacement);
            canonicalize(Tree::Join(cs))
        }
        _ => unreachable!("path runs through a leaf"),
    }
}

/// Collects steps in post-order: children left to right, then the node.
fn collect(root: &Tree, t: &Tree, path: &mut Vec<usize>, out: &mut Vec<RewriteStep>) {
    for (i, c) in t.children().iter().enumerate() {
        path.push(i);
        collect(root, c, path, out);
        path.pop();
    }
    let before = CanonicalTerm(root.clone());
    for (rule, reduct) in root_reducts(t) {
        let after = CanonicalTerm(replace_at(root, path, &reduct));
        let step = RewriteStep { rule, position: path.clone(), before: before.clone(), after };
        if !out.iter().any(|s| s.rule == step.rule && s.position == step.position && s.after == step.after) {
            out.push(step);
        }
    }
}

/// Every rule application available anywhere in `t`, with positions
/// relative to the canonical form of `t`. Ordered leftmost-innermost first.
pub fn applicable_steps(t: &Tree) -> Vec<RewriteStep> {
    let root = canonicalize(t.clone());
    let mut out = Vec::new();
    collect(&root, &root, &mut Vec::new(), &mut out);
    out
}

fn pick(steps: Vec<RewriteStep>, strategy: Strategy) -> Option<RewriteStep> {
    match strategy {
        Strategy::LeftmostInnermost => steps.into_iter().next(),
        Strategy::RightmostOutermost => steps
            .into_iter()
            .min_by(|a, b| a.position.len().cmp(&b.position.len()).then_with(|| b.position.cmp(&a.position))),
    }
}

/// Rewrites `t` one step at a time until no rule applies. Fails if more
/// than `budget` steps are needed.
pub fn reduce(t: &Tree, strategy: Strategy, budget: usize) -> Result<Reduction, OracleError> {
    let mut current = canonicalize(t.clone());
    let mut steps = 0;
    while let Some(step) = pick(applicable_steps(&current), strategy) {
        if steps == budget {
            return Err(OracleError::StepBudgetExceeded(budget));
        }
        steps += 1;
        current = step.after.0;
    }
    Ok(Reduction { normal_form: CanonicalTerm(current), steps })
}

/// Normal form under leftmost-innermost rewriting. Every rule removes at
/// least one node, so the node count of `t` is a sufficient budget.
pub fn normal_form(t: &Tree) -> Result<CanonicalTerm, OracleError> {
    Ok(reduce(t, Strategy::LeftmostInnermost, t.size())?.normal_form)
}

/// Whether both terms reach the same normal form within `budget` steps each.
pub fn joinable(a: &Tree, b: &Tree, budget: usize) -> Result<bool, OracleError> {
    let na = reduce(a, Strategy::LeftmostInnermost, budget)?;
    let nb = reduce(b, Strategy::LeftmostInnermost, budget)?;
    Ok(na.normal_form == nb.normal_form)
}

/// Equality in the theory, decided by comparing normal forms.
pub fn oracle_equivalent(a: &Tree, b: &Tree) -> Result<bool, OracleError> {
    Ok(normal_form(a)? == normal_form(b)?)
}
