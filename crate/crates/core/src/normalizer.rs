//! One-pass normal-form coding of internal terms.
//!
//! Every processed term receives a [`Code`]; two terms normalized in the same
//! [`Session`] get the same code exactly when they are equal in the theory of
//! orthocomplemented bisemilattices. Codes are assigned bottom-up in the
//! style of tree-isomorphism coding: a variable or a join is keyed by its
//! [`Signature`] (a join by the sorted, deduplicated codes of its flattened
//! children), and every plain code `2k` has its negation at `2k + 1`.
//!
//! The rewrite rules are applied while coding:
//!
//! * nested joins are spliced into their parent and singleton joins unwrapped,
//! * duplicates are dropped, `0` children vanish and a `1` child absorbs,
//! * double negations cancel and `!0`, `!1` fall out of the reserved pair,
//! * a join containing some `x` and `!x`, or some `!(y..)` together with all
//!   of `y..`, becomes `1`.
//!
//! Children of a join are visited smallest first and the largest child is
//! processed in place, so a chain of joins that only collapses once its
//! small `0`-valued siblings are known never materializes the intermediate
//! joins. That keeps the whole pass quasilinear.

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;
use thiserror::Error;

use crate::dag::{Arena, Node, Symbol, TermRef};

const RED_ZONE: usize = 128 * 1024;
const STACK_CHUNK: usize = 8 * 1024 * 1024;

/// Name of one equivalence class within a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code(u32);

impl Code {
    pub const ZERO: Code = Code(0);
    pub const ONE: Code = Code(1);

    pub fn value(self) -> u32 {
        self.0
    }

    /// Code of the negation. An involution; swaps `ZERO` and `ONE`.
    pub fn negated(self) -> Code {
        Code(self.0 ^ 1)
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    fn plain(index: usize) -> Code {
        Code(2 * (index as u32 + 1))
    }

    /// Index into the signature table, for plain non-constant codes.
    fn signature_index(self) -> Option<usize> {
        match self.0 {
            0 | 1 => None,
            v => Some((v / 2 - 1) as usize),
        }
    }
}

/// Key under which a plain class is allocated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Signature {
    Var(Symbol),
    /// Strictly increasing member codes; never contains `ZERO`, `ONE` or
    /// the code of another join.
    Join(Box<[Code]>),
}

/// Order in which join children are coded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scheduling {
    /// Smallest children first, the largest processed in place.
    #[default]
    SmallestFirst,
    /// Every child coded independently in stored order, then merged. Correct
    /// but quadratic on join chains whose collapse depends on small siblings.
    StoredOrder,
}

/// Rule-application and work counters for one session.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Nested joins merged into a parent.
    pub flatten: u64,
    /// Joins reduced to their only remaining child.
    pub unwrap: u64,
    /// Duplicate children removed.
    pub idempotence: u64,
    /// Joins absorbed by a `1` child.
    pub one_absorbs: u64,
    /// `0` children removed.
    pub zero_identity: u64,
    /// Double negations cancelled.
    pub double_negation: u64,
    /// Joins holding both `x` and `!x`.
    pub complement: u64,
    /// Joins holding `!(y..)` and every `y`.
    pub join_complement: u64,
    /// `!0` turned into `1`.
    pub negate_zero: u64,
    /// `!1` turned into `0`.
    pub negate_one: u64,
    /// Joins that turned out to equal their largest child before it was
    /// visited.
    pub early_collapses: u64,
    pub nodes_visited: u64,
    /// Fresh (plain, negated) code pairs.
    pub codes_allocated: u64,
}

impl Stats {
    pub fn rule_counts(&self) -> [(&'static str, u64); 10] {
        [
            ("flatten", self.flatten),
            ("unwrap", self.unwrap),
            ("idempotence", self.idempotence),
            ("one-absorbs", self.one_absorbs),
            ("zero-identity", self.zero_identity),
            ("double-negation", self.double_negation),
            ("complement", self.complement),
            ("join-complement", self.join_complement),
            ("negate-zero", self.negate_zero),
            ("negate-one", self.negate_one),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("code {0} was not assigned in this session")]
    UnknownCode(u32),
}

const UNSET: u32 = u32::MAX;

/// Mutable state of one normalization run over one arena.
#[derive(Clone, Debug, Default)]
pub struct Session {
    signatures: IndexSet<Signature, FxBuildHasher>,
    node_codes: Vec<u32>,
    scheduling: Scheduling,
    stats: Stats,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_scheduling(scheduling: Scheduling) -> Self {
        Session { scheduling, ..Self::default() }
    }

    pub fn scheduling(&self) -> Scheduling {
        self.scheduling
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    /// Number of plain classes allocated (each has a negated twin).
    pub fn class_count(&self) -> usize {
        self.signatures.len()
    }

    /// Code previously assigned to `t`, if any.
    pub fn code_of(&self, t: TermRef) -> Option<Code> {
        match self.node_codes.get(t.index()) {
            Some(&c) if c != UNSET => Some(Code(c)),
            _ => None,
        }
    }

    fn remember(&mut self, t: TermRef, code: Code) {
        if self.node_codes.len() <= t.index() {
            self.node_codes.resize(t.index() + 1, UNSET);
        }
        self.node_codes[t.index()] = code.0;
    }

    fn allocate(&mut self, signature: Signature) -> Code {
        let (index, fresh) = self.signatures.insert_full(signature);
        if fresh {
            self.stats.codes_allocated += 1;
        }
        Code::plain(index)
    }

    /// Whether `code` has been handed out by this session.
    pub fn is_assigned(&self, code: Code) -> bool {
        match code.signature_index() {
            None => true,
            Some(i) => i < self.signatures.len(),
        }
    }

    /// Member codes of the join class `code`, or `None` for constants,
    /// variables and negated classes.
    pub fn join_class_members(&self, code: Code) -> Result<Option<&[Code]>, NormalizeError> {
        if !self.is_assigned(code) {
            return Err(NormalizeError::UnknownCode(code.0));
        }
        Ok(members(&self.signatures, code))
    }

    /// Normal-form code of `t`. Results are memoized per node, so shared
    /// subterms are coded once.
    pub fn normalize(&mut self, arena: &Arena, t: TermRef) -> Code {
        if let Some(code) = self.code_of(t) {
            return code;
        }
        let code = stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || self.compute(arena, t));
        self.remember(t, code);
        code
    }

    /// True when both terms have the same code in this session.
    pub fn equivalent(&mut self, arena: &Arena, a: TermRef, b: TermRef) -> bool {
        self.normalize(arena, a) == self.normalize(arena, b)
    }

    fn compute(&mut self, arena: &Arena, t: TermRef) -> Code {
        self.stats.nodes_visited += 1;
        match arena.node(t) {
            Node::Zero => Code::ZERO,
            Node::One => Code::ONE,
            Node::Var(s) => self.allocate(Signature::Var(*s)),
            Node::Neg(x) => {
                if let Node::Neg(y) = arena.node(*x) {
                    self.stats.double_negation += 1;
                    return self.normalize(arena, *y);
                }
                let inner = self.normalize(arena, *x);
                self.negate(inner)
            }
            Node::Join(children) => self.process_join(arena, children),
        }
    }

    fn negate(&mut self, code: Code) -> Code {
        match code {
            Code::ZERO => self.stats.negate_zero += 1,
            Code::ONE => self.stats.negate_one += 1,
            _ => {}
        }
        code.negated()
    }

    fn signed(&mut self, code: Code, negated: bool) -> Code {
        if negated {
            self.negate(code)
        } else {
            code
        }
    }

    /// Code of the join of `children`, without memoizing the join node.
    pub fn process_join(&mut self, arena: &Arena, children: &[TermRef]) -> Code {
        assert!(!children.is_empty(), "join needs at least one child");
        let mut codes = Vec::with_capacity(children.len());
        match self.scheduling {
            Scheduling::StoredOrder => {
                for &c in children {
                    let code = self.normalize(arena, c);
                    codes.push(code);
                }
            }
            Scheduling::SmallestFirst => {
                self.run_frame(arena, children.to_vec(), &mut codes, false);
            }
        }
        self.merge(codes)
    }

    /// Works through the children of one (virtual) join. Each round codes
    /// every pending child except the largest, then processes the largest in
    /// place, which may splice its own children back into `pending`.
    ///
    /// When `collapsible` and the first round leaves only `0` codes, stops and
    /// returns the unvisited largest child: the join equals it.
    fn run_frame(
        &mut self,
        arena: &Arena,
        mut pending: Vec<TermRef>,
        codes: &mut Vec<Code>,
        collapsible: bool,
    ) -> Option<TermRef> {
        let mut first_round = true;
        while !pending.is_empty() {
            // Stable sort: among equally large children the last one in
            // stored order is deferred.
            pending.sort_by_key(|&c| arena.tree_size(c));
            let largest = pending.pop().unwrap();
            for c in pending.drain(..) {
                let code = self.normalize(arena, c);
                codes.push(code);
            }
            if first_round && codes.iter().all(|&c| c == Code::ZERO) {
                self.stats.early_collapses += 1;
                if collapsible {
                    self.stats.zero_identity += codes.len() as u64;
                    self.stats.unwrap += 1;
                    return Some(largest);
                }
            }
            first_round = false;
            self.expand(arena, largest, &mut pending, codes);
        }
        None
    }

    /// Processes `child` as a member of the join being built: joins are
    /// spliced, double negations stripped, and a negated join whose small
    /// children all vanish is replaced by the negation of its largest child.
    fn expand(&mut self, arena: &Arena, child: TermRef, pending: &mut Vec<TermRef>, codes: &mut Vec<Code>) {
        let mut child = child;
        let mut negated = false;
        loop {
            if let Some(code) = self.code_of(child) {
                let code = self.signed(code, negated);
                codes.push(code);
                return;
            }
            match arena.node(child) {
                Node::Neg(x) => {
                    if negated {
                        self.stats.double_negation += 1;
                    }
                    negated = !negated;
                    child = *x;
                }
                Node::Join(cs) if !negated => {
                    self.stats.nodes_visited += 1;
                    self.stats.flatten += 1;
                    pending.extend(cs.iter().copied());
                    return;
                }
                Node::Join(cs) => {
                    self.stats.nodes_visited += 1;
                    let mut inner = Vec::with_capacity(cs.len());
                    let collapsed = stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || {
                        self.run_frame(arena, cs.to_vec(), &mut inner, true)
                    });
                    match collapsed {
                        Some(largest) => child = largest,
                        None => {
                            let code = self.merge(inner);
                            self.remember(child, code);
                            let code = self.negate(code);
                            codes.push(code);
                            return;
                        }
                    }
                }
                Node::Zero | Node::One | Node::Var(_) => {
                    let code = self.normalize(arena, child);
                    let code = self.signed(code, negated);
                    codes.push(code);
                    return;
                }
            }
        }
    }

    /// Turns the codes of a join's children into the join's code.
    fn merge(&mut self, codes: Vec<Code>) -> Code {
        let stats = &mut self.stats;
        let mut flat = Vec::with_capacity(codes.len());
        for c in codes {
            match c {
                Code::ZERO => stats.zero_identity += 1,
                Code::ONE => {
                    stats.one_absorbs += 1;
                    return Code::ONE;
                }
                _ => match members(&self.signatures, c) {
                    Some(ms) => {
                        stats.flatten += 1;
                        flat.extend_from_slice(ms);
                    }
                    None => flat.push(c),
                },
            }
        }
        flat.sort_unstable();
        let before = flat.len();
        flat.dedup();
        stats.idempotence += (before - flat.len()) as u64;

        // Negation pairs are adjacent integers, so x and !x sit side by side.
        if flat.windows(2).any(|w| !w[0].is_negated() && w[1].0 == w[0].0 + 1) {
            stats.complement += 1;
            return Code::ONE;
        }
        for &c in &flat {
            if !c.is_negated() {
                continue;
            }
            if let Some(ms) = members(&self.signatures, c.negated()) {
                if ms.iter().all(|m| flat.binary_search(m).is_ok()) {
                    stats.join_complement += 1;
                    return Code::ONE;
                }
            }
        }

        match flat.len() {
            0 => Code::ZERO,
            1 => {
                stats.unwrap += 1;
                flat[0]
            }
            _ => self.allocate(Signature::Join(flat.into_boxed_slice())),
        }
    }

    /// Builds a canonical representative of `code` in `arena`: joins list
    /// their members in ascending code order.
    pub fn extract_normal_form(&self, arena: &mut Arena, code: Code) -> Result<TermRef, NormalizeError> {
        if !self.is_assigned(code) {
            return Err(NormalizeError::UnknownCode(code.0));
        }
        Ok(self.extract(arena, code))
    }

    fn extract(&self, arena: &mut Arena, code: Code) -> TermRef {
        stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || {
            if code == Code::ZERO {
                return arena.zero();
            }
            if code == Code::ONE {
                return arena.one();
            }
            if code.is_negated() {
                let inner = self.extract(arena, code.negated());
                return arena.neg(inner);
            }
            let index = code.signature_index().expect("plain non-constant code");
            match &self.signatures[index] {
                Signature::Var(s) => arena.intern(Node::Var(*s)).expect("term arena capacity exhausted"),
                Signature::Join(ms) => {
                    let children: Vec<TermRef> = ms.iter().map(|&m| self.extract(arena, m)).collect();
                    arena.join(children)
                }
            }
        })
    }
}

fn members(signatures: &IndexSet<Signature, FxBuildHasher>, code: Code) -> Option<&[Code]> {
    if code.is_negated() {
        return None;
    }
    match signatures.get_index(code.signature_index()?)? {
        Signature::Join(ms) => Some(ms),
        Signature::Var(_) => None,
    }
}

/// Decides equality of two terms of one arena in a fresh session.
pub fn equivalent(arena: &Arena, a: TermRef, b: TermRef) -> bool {
    Session::new().equivalent(arena, a, b)
}
