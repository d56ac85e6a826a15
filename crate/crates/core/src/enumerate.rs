//! Exhaustive enumeration of small internal terms.

use crate::tree::Tree;

/// Every ordered term with at most `max_nodes` nodes over `vars`, `0` and
/// `1`, grouped by size: element `s - 1` holds the terms of size `s`.
/// Joins take one or more children; child order matters.
pub fn terms_by_size(vars: &[&str], max_nodes: usize) -> Vec<Vec<Tree>> {
    let mut leaves = vec![Tree::Zero, Tree::One];
    leaves.extend(vars.iter().map(|v| Tree::var(v)));

    // by_size[s] for s >= 1; index 0 unused.
    let mut by_size: Vec<Vec<Tree>> = vec![Vec::new(), leaves];
    // lists[m]: nonempty child lists whose sizes sum to m.
    let mut lists: Vec<Vec<Vec<Tree>>> = vec![Vec::new()];
    for size in 2..=max_nodes {
        let m = size - 1;
        let mut current = Vec::new();
        for first in 1..=m {
            for t in &by_size[first] {
                if first == m {
                    current.push(vec![t.clone()]);
                } else {
                    for rest in &lists[m - first] {
                        let mut list = Vec::with_capacity(rest.len() + 1);
                        list.push(t.clone());
                        list.extend(rest.iter().cloned());
                        current.push(list);
                    }
                }
            }
        }
        lists.push(current);

        let mut terms: Vec<Tree> = by_size[m].iter().cloned().map(Tree::neg).collect();
        terms.extend(lists[m].iter().cloned().map(Tree::Join));
        by_size.push(terms);
    }
    by_size.into_iter().skip(1).take(max_nodes).collect()
}

/// All terms from [`terms_by_size`], smallest first.
pub fn terms_up_to(vars: &[&str], max_nodes: usize) -> Vec<Tree> {
    terms_by_size(vars, max_nodes).into_iter().flatten().collect()
}
