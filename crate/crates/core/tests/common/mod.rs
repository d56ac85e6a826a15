//! Helpers shared by the integration tests: random mutations that preserve
//! equality in the theory (so the normalizer must still say "equivalent"),
//! and ones that are only valid in Boolean algebra.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use ocbsl::{Formula, Tree};

fn tree_positions(t: &Tree, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    for (i, c) in t.children().iter().enumerate() {
        path.push(i);
        tree_positions(c, path, out);
        path.pop();
    }
}

fn tree_at_mut<'a>(t: &'a mut Tree, path: &[usize]) -> &'a mut Tree {
    path.iter().fold(t, |t, &i| match t {
        Tree::Neg(c) => c.as_mut(),
        Tree::Join(cs) => &mut cs[i],
        _ => unreachable!("path runs through a leaf"),
    })
}

fn excluded_middle(v: &str) -> Tree {
    Tree::join(vec![Tree::var(v), Tree::neg(Tree::var(v))])
}

/// Rewrites one random subterm of `t` into an equal but larger term.
pub fn grow_equal<R: Rng>(t: &Tree, vars: &[&str], rng: &mut R) -> Tree {
    let mut positions = Vec::new();
    tree_positions(t, &mut Vec::new(), &mut positions);
    let path = positions.choose(rng).unwrap().clone();
    let mut out = t.clone();
    let slot = tree_at_mut(&mut out, &path);
    let s = slot.clone();
    let v = *vars.choose(rng).unwrap();
    *slot = match rng.gen_range(0..10) {
        0 => Tree::neg(Tree::neg(s)),
        1 => Tree::join(vec![s.clone(), s]),
        2 => Tree::join(vec![Tree::Zero, s]),
        3 => Tree::join(vec![s]),
        4 => Tree::join(vec![s, Tree::neg(excluded_middle(v))]),
        5 => match s {
            Tree::Join(mut cs) => {
                cs.shuffle(rng);
                if cs.len() >= 3 {
                    let rest = cs.split_off(1);
                    cs.push(Tree::Join(rest));
                }
                Tree::Join(cs)
            }
            other => Tree::neg(Tree::neg(other)),
        },
        6 => match s {
            Tree::One => excluded_middle(v),
            Tree::Zero => Tree::neg(excluded_middle(v)),
            other => Tree::join(vec![other, Tree::Zero]),
        },
        7 => match s {
            Tree::One => {
                let y = Tree::join(vec![Tree::var(v), Tree::Zero]);
                Tree::join(vec![Tree::var(v), Tree::neg(y)])
            }
            other => Tree::join(vec![other.clone(), other]),
        },
        8 => Tree::join(vec![s, Tree::neg(Tree::One)]),
        _ => match s {
            // 1 absorbs any sibling.
            Tree::One => Tree::join(vec![Tree::One, Tree::var(v)]),
            other => Tree::neg(Tree::neg(other)),
        },
    };
    out
}

fn formula_positions(f: &Formula, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    let children: &[Formula] = match f {
        Formula::Not(c) => std::slice::from_ref(c),
        Formula::And(cs) | Formula::Or(cs) => cs,
        _ => &[],
    };
    for (i, c) in children.iter().enumerate() {
        path.push(i);
        formula_positions(c, path, out);
        path.pop();
    }
}

fn formula_at_mut<'a>(f: &'a mut Formula, path: &[usize]) -> &'a mut Formula {
    path.iter().fold(f, |f, &i| match f {
        Formula::Not(c) => c.as_mut(),
        Formula::And(cs) | Formula::Or(cs) => &mut cs[i],
        _ => unreachable!("path runs through a leaf"),
    })
}

fn random_subformula<'a, R: Rng>(f: &'a mut Formula, rng: &mut R) -> &'a mut Formula {
    let mut positions = Vec::new();
    formula_positions(f, &mut Vec::new(), &mut positions);
    let path = positions.choose(rng).unwrap().clone();
    formula_at_mut(f, &path)
}

fn not(f: Formula) -> Formula {
    Formula::not(f)
}

/// Rewrites one random subformula by a law of the theory: double negation,
/// idempotence, units, commutativity, de Morgan, complements.
pub fn mutate_equal<R: Rng>(f: &Formula, vars: &[&str], rng: &mut R) -> Formula {
    let mut out = f.clone();
    let slot = random_subformula(&mut out, rng);
    let s = slot.clone();
    let v = Formula::var(vars.choose(rng).unwrap());
    *slot = match rng.gen_range(0..8) {
        0 => not(not(s)),
        1 => Formula::Or(vec![s.clone(), s]),
        2 => Formula::And(vec![s.clone(), s]),
        3 => Formula::Or(vec![s, Formula::Const(false)]),
        4 => Formula::And(vec![Formula::Const(true), s]),
        5 => match s {
            Formula::And(mut cs) => {
                cs.shuffle(rng);
                not(Formula::Or(cs.into_iter().map(not).collect()))
            }
            Formula::Or(mut cs) => {
                cs.shuffle(rng);
                not(Formula::And(cs.into_iter().map(not).collect()))
            }
            other => not(not(other)),
        },
        6 => match s {
            Formula::Const(true) => Formula::Or(vec![v.clone(), not(v)]),
            Formula::Const(false) => Formula::And(vec![not(v.clone()), v]),
            other => Formula::And(vec![other, Formula::Or(vec![not(v.clone()), v])]),
        },
        _ => Formula::Or(vec![s, Formula::And(vec![v.clone(), not(v)])]),
    };
    out
}

/// Rewrites one random subformula by absorption or distributivity, which
/// hold in Boolean algebra but not in the theory.
pub fn mutate_boolean<R: Rng>(f: &Formula, vars: &[&str], rng: &mut R) -> Formula {
    let mut out = f.clone();
    let slot = random_subformula(&mut out, rng);
    let s = slot.clone();
    let v = Formula::var(vars.choose(rng).unwrap());
    *slot = match rng.gen_range(0..3) {
        0 => Formula::Or(vec![s.clone(), Formula::And(vec![s, v])]),
        1 => Formula::And(vec![s.clone(), Formula::Or(vec![v, s])]),
        _ => Formula::Or(vec![
            Formula::And(vec![s.clone(), v.clone()]),
            Formula::And(vec![s, not(v)]),
        ]),
    };
    out
}
