//! Generated inputs: the quadratic-pitfall chains, random formulas and the
//! shared-diamond chain.

use rand::seq::index::sample;
use rand::Rng;

use crate::dag::{Arena, TermRef};
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainFamily {
    /// Right-nested joins of fresh variables.
    Fig6,
    /// Alternating negated joins with zero-equivalent fillers.
    Fig7,
}

/// `x1 | (x2 | (... | (x{n+1} | x{n+2})))`: `n + 1` joins, `2n + 3` nodes.
pub fn fig6(n: usize) -> Formula {
    assert!(n >= 1, "fig6 needs n >= 1");
    let mut f = Formula::Or(vec![var("x", n + 1), var("x", n + 2)]);
    for i in (1..=n).rev() {
        f = Formula::Or(vec![var("x", i), f]);
    }
    f
}

/// The chain `J1 = x1 | !J2`, `J2 = z1 | !J3`, `J3 = x2 | !J4`, ...,
/// ending in `J{2n+1} = x{n+1} | x{n+2}`, where `z_i = !(v_i | !v_i)`
/// with a fresh `v_i` per level. Every `z_i` is equivalent to 0, so the
/// whole term is the flat join of `x1..x{n+2}`. Size is `10n + 3`.
pub fn fig7(n: usize) -> Formula {
    assert!(n >= 1, "fig7 needs n >= 1");
    let mut f = Formula::Or(vec![var("x", n + 1), var("x", n + 2)]);
    for i in (1..=n).rev() {
        let z = Formula::not(Formula::Or(vec![var("v", i), Formula::not(var("v", i))]));
        let even = Formula::Or(vec![z, Formula::not(f)]);
        f = Formula::Or(vec![var("x", i), Formula::not(even)]);
    }
    f
}

pub fn gen_family(family: ChainFamily, n: usize) -> Formula {
    match family {
        ChainFamily::Fig6 => fig6(n),
        ChainFamily::Fig7 => fig7(n),
    }
}

fn var(prefix: &str, i: usize) -> Formula {
    Formula::Var(format!("{prefix}{i}"))
}

/// A random formula with exactly `nodes` nodes over `x1..x{vars}`.
/// Leaves are variables with probability 7/8, else constants.
pub fn random_formula<R: Rng>(rng: &mut R, nodes: usize, vars: usize) -> Formula {
    assert!(nodes >= 1 && vars >= 1);
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || {
        if nodes == 1 {
            return if rng.gen_ratio(7, 8) {
                var("x", rng.gen_range(1..=vars))
            } else {
                Formula::Const(rng.gen())
            };
        }
        let inner = nodes - 1;
        if inner == 1 || rng.gen_ratio(1, 4) {
            return Formula::not(random_formula(rng, inner, vars));
        }
        let arity = rng.gen_range(2..=inner.min(4));
        let mut cuts = sample(rng, inner - 1, arity - 1).into_vec();
        cuts.sort_unstable();
        let mut children = Vec::with_capacity(arity);
        let mut start = 0;
        for cut in cuts.into_iter().map(|c| c + 1).chain([inner]) {
            children.push(random_formula(rng, cut - start, vars));
            start = cut;
        }
        if rng.gen() {
            Formula::And(children)
        } else {
            Formula::Or(children)
        }
    })
}

/// `t0 = u`, `t{k+1} = !t_k | !(t_k | v_k)`. Each level reuses `t_k`
/// twice, so the expanded tree roughly doubles per level while the DAG
/// grows by five nodes. Returns the root.
pub fn diamond_chain(arena: &mut Arena, depth: usize) -> TermRef {
    let mut t = arena.var("u");
    for k in 0..depth {
        let v = arena.var(&format!("v{k}"));
        let nt = arena.neg(t);
        let inner = arena.join(vec![t, v]);
        let ninner = arena.neg(inner);
        t = arena.join(vec![nt, ninner]);
    }
    t
}
