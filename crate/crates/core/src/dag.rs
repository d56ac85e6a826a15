//! Hash-consed term arena for the internal single-join language.
//!
//! Terms are built from `0`, `1`, variables, negation and an n-ary join.
//! Every node is interned: structurally identical nodes (same shape, same
//! children in the same order) share one [`TermRef`]. Children stay ordered
//! here; commutativity is the normalizer's business.

use std::collections::VecDeque;
use std::fmt;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;
use thiserror::Error;

use crate::tree::Tree;

/// Interned variable name, scoped to one [`Arena`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Handle to an interned node. Only meaningful for the arena that issued it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermRef(u32);

impl TermRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One node of the DAG. Children of `Join` are ordered and nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Zero,
    One,
    Var(Symbol),
    Neg(TermRef),
    Join(Box<[TermRef]>),
}

impl Node {
    pub fn children(&self) -> &[TermRef] {
        match self {
            Node::Neg(c) => std::slice::from_ref(c),
            Node::Join(cs) => cs,
            _ => &[],
        }
    }
}

/// Node count of the fully expanded tree below a term.
///
/// Shared subterms are counted once per occurrence, so this can be
/// exponentially larger than the DAG. Arithmetic saturates at `u64::MAX`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeSize(pub u64);

impl TreeSize {
    pub const LEAF: TreeSize = TreeSize(1);

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_saturated(self) -> bool {
        self.0 == u64::MAX
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("term arena capacity exhausted ({0} nodes)")]
    CapacityExhausted(usize),
}

const MAX_NODES: usize = u32::MAX as usize;

/// Interning store for terms. One arena per session; never global.
#[derive(Default, Clone)]
pub struct Arena {
    nodes: IndexSet<Node, FxBuildHasher>,
    sizes: Vec<TreeSize>,
    symbols: IndexSet<String, FxBuildHasher>,
}

impl Arena {
    pub fn new() -> Self {
        Self::default()
    }

    /// An arena with room for `nodes` nodes before rehashing.
    pub fn with_capacity(nodes: usize) -> Self {
        Arena {
            nodes: IndexSet::with_capacity_and_hasher(nodes, FxBuildHasher),
            sizes: Vec::with_capacity(nodes),
            symbols: IndexSet::default(),
        }
    }

    /// Number of distinct nodes interned so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Interns `node`, returning the existing handle if an identical node is
    /// already present. Children must come from this arena.
    pub fn intern(&mut self, node: Node) -> Result<TermRef, ArenaError> {
        assert!(
            node.children().iter().all(|c| c.index() < self.nodes.len()),
            "child handle does not belong to this arena"
        );
        if let Node::Join(cs) = &node {
            assert!(!cs.is_empty(), "join nodes need at least one child");
        }
        let full = self.nodes.len() >= MAX_NODES;
        if full && !self.nodes.contains(&node) {
            return Err(ArenaError::CapacityExhausted(self.nodes.len()));
        }
        let size = node
            .children()
            .iter()
            .fold(TreeSize::LEAF.0, |acc, c| acc.saturating_add(self.sizes[c.index()].0));
        let (index, fresh) = self.nodes.insert_full(node);
        if fresh {
            self.sizes.push(TreeSize(size));
        }
        Ok(TermRef(index as u32))
    }

    fn must(&mut self, node: Node) -> TermRef {
        self.intern(node).expect("term arena capacity exhausted")
    }

    pub fn zero(&mut self) -> TermRef {
        self.must(Node::Zero)
    }

    pub fn one(&mut self) -> TermRef {
        self.must(Node::One)
    }

    pub fn symbol(&mut self, name: &str) -> Symbol {
        if let Some(index) = self.symbols.get_index_of(name) {
            return Symbol(index as u32);
        }
        let (index, _) = self.symbols.insert_full(name.to_owned());
        Symbol(index as u32)
    }

    pub fn symbol_name(&self, symbol: Symbol) -> &str {
        &self.symbols[symbol.index()]
    }

    pub fn var(&mut self, name: &str) -> TermRef {
        let symbol = self.symbol(name);
        self.must(Node::Var(symbol))
    }

    pub fn neg(&mut self, child: TermRef) -> TermRef {
        self.must(Node::Neg(child))
    }

    pub fn join(&mut self, children: impl Into<Box<[TermRef]>>) -> TermRef {
        self.must(Node::Join(children.into()))
    }

    pub fn node(&self, t: TermRef) -> &Node {
        &self.nodes[t.index()]
    }

    pub fn tree_size(&self, t: TermRef) -> TreeSize {
        self.sizes[t.index()]
    }

    /// Kahn-style ordering of everything reachable from `roots` where every
    /// node comes after all of its children. Each node appears once.
    pub fn reverse_topological_order(&self, roots: &[TermRef]) -> Vec<TermRef> {
        // Discover the reachable subgraph.
        let mut seen = vec![false; self.len()];
        let mut reachable = Vec::new();
        let mut stack: Vec<TermRef> = roots.to_vec();
        while let Some(t) = stack.pop() {
            if std::mem::replace(&mut seen[t.index()], true) {
                continue;
            }
            reachable.push(t);
            stack.extend(self.node(t).children().iter().copied());
        }
        reachable.sort_unstable();

        // Each node waits on its outgoing edges; a node becomes ready once
        // every child edge has been released.
        let mut waiting = vec![0usize; self.len()];
        let mut parents: Vec<Vec<TermRef>> = vec![Vec::new(); self.len()];
        let mut ready = VecDeque::new();
        for &t in &reachable {
            let children = self.node(t).children();
            waiting[t.index()] = children.len();
            for &c in children {
                parents[c.index()].push(t);
            }
            if children.is_empty() {
                ready.push_back(t);
            }
        }

        let mut order = Vec::with_capacity(reachable.len());
        while let Some(t) = ready.pop_front() {
            order.push(t);
            for &p in &parents[t.index()] {
                waiting[p.index()] -= 1;
                if waiting[p.index()] == 0 {
                    ready.push_back(p);
                }
            }
        }
        debug_assert_eq!(order.len(), reachable.len(), "arena contains a cycle");
        order
    }

    /// Interns an owned tree, sharing identical subterms.
    pub fn add_tree(&mut self, tree: &Tree) -> TermRef {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || match tree {
            Tree::Zero => self.zero(),
            Tree::One => self.one(),
            Tree::Var(name) => self.var(name),
            Tree::Neg(child) => {
                let c = self.add_tree(child);
                self.neg(c)
            }
            Tree::Join(children) => {
                let cs: Vec<TermRef> = children.iter().map(|c| self.add_tree(c)).collect();
                self.join(cs)
            }
        })
    }

    /// Expands a term into an owned tree. Only sensible for terms whose
    /// [`TreeSize`] is small.
    pub fn to_tree(&self, t: TermRef) -> Tree {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || match self.node(t) {
            Node::Zero => Tree::Zero,
            Node::One => Tree::One,
            Node::Var(s) => Tree::Var(self.symbol_name(*s).to_owned()),
            Node::Neg(c) => Tree::Neg(Box::new(self.to_tree(*c))),
            Node::Join(cs) => Tree::Join(cs.iter().map(|c| self.to_tree(*c)).collect()),
        })
    }

    /// Renders `t` in the internal syntax: `|` for joins, `!` for negation.
    pub fn display(&self, t: TermRef) -> DisplayTerm<'_> {
        DisplayTerm { arena: self, term: t }
    }
}

pub struct DisplayTerm<'a> {
    arena: &'a Arena,
    term: TermRef,
}

impl DisplayTerm<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, t: TermRef, nested: bool) -> fmt::Result {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || match self.arena.node(t) {
            Node::Zero => f.write_str("0"),
            Node::One => f.write_str("1"),
            Node::Var(s) => f.write_str(self.arena.symbol_name(*s)),
            Node::Neg(c) => {
                f.write_str("!")?;
                self.write(f, *c, true)
            }
            Node::Join(cs) if cs.len() == 1 => {
                // A singleton join has no infix operator to show.
                f.write_str("(")?;
                self.write(f, cs[0], false)?;
                f.write_str(")")
            }
            Node::Join(cs) => {
                if nested {
                    f.write_str("(")?;
                }
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    self.write(f, *c, true)?;
                }
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        })
    }
}

impl fmt::Display for DisplayTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.term, false)
    }
}
