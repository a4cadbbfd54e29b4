//! Synchronous products and the bounded asynchronous (queued) composition.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{max_states, NodeId, ReachGraph};
use crate::model::{
    async_composable, composable, product_alphabet, rename_outputs, ActionName, Alphabet, Iots,
    SharedProfile,
};

/// A state `(s_A, s_B)` of a synchronous product, as state indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SyncState {
    pub left: usize,
    pub right: usize,
}

/// Reachable part of `A ⊗ B`.
#[derive(Debug, Clone)]
pub struct SyncGraph {
    left: Iots,
    right: Iots,
    profile: SharedProfile,
    alphabet: Alphabet,
    graph: ReachGraph<SyncState>,
}

impl SyncGraph {
    pub fn left(&self) -> &Iots {
        &self.left
    }

    pub fn right(&self) -> &Iots {
        &self.right
    }

    pub fn profile(&self) -> &SharedProfile {
        &self.profile
    }

    /// Product alphabet; shared actions are internal.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn graph(&self) -> &ReachGraph<SyncState> {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn state(&self, id: NodeId) -> SyncState {
        *self.graph.node(id)
    }

    pub fn find(&self, left: &str, right: &str) -> Option<NodeId> {
        let l = self.left.state_index(left)?;
        let r = self.right.state_index(right)?;
        self.graph.find(&SyncState { left: l, right: r })
    }

    pub fn contains(&self, left: &str, right: &str) -> bool {
        self.find(left, right).is_some()
    }

    /// `(s_A,s_B)` with state names.
    pub fn label(&self, id: NodeId) -> String {
        let s = self.state(id);
        format!("({},{})", self.left.state(s.left), self.right.state(s.right))
    }

    pub fn edges(&self, id: NodeId) -> &[(ActionName, NodeId)] {
        self.graph.edges(id)
    }

    pub fn trace_to(&self, id: NodeId) -> Vec<ActionName> {
        self.graph.trace_to(id)
    }

    /// Nodes without outgoing edges, in BFS order.
    pub fn deadlocks(&self) -> Vec<NodeId> {
        (0..self.len()).filter(|id| self.edges(*id).is_empty()).collect()
    }

    /// Left-component states occurring in some reachable node.
    pub fn locally_reachable_left(&self) -> BTreeSet<usize> {
        self.graph.nodes().map(|(_, s)| s.left).collect()
    }

    pub fn locally_reachable_right(&self) -> BTreeSet<usize> {
        self.graph.nodes().map(|(_, s)| s.right).collect()
    }
}

/// Reachable fragment of `A ⊗ B`: shared actions synchronize, free actions interleave.
pub fn sync_product(a: &Iots, b: &Iots) -> Result<SyncGraph> {
    let profile = composable(a, b)?;
    let shared = &profile.shared;
    let initial = SyncState {
        left: a.initial(),
        right: b.initial(),
    };
    let graph = ReachGraph::explore(initial, max_states(), |s, out| {
        for (x, l2) in a.successors(s.left) {
            if shared.contains(x) {
                for (y, r2) in b.successors(s.right) {
                    if y == x {
                        out.push((x.clone(), SyncState { left: *l2, right: *r2 }));
                    }
                }
            } else {
                out.push((x.clone(), SyncState { left: *l2, right: s.right }));
            }
        }
        for (y, r2) in b.successors(s.right) {
            if !shared.contains(y) {
                out.push((y.clone(), SyncState { left: s.left, right: *r2 }));
            }
        }
        false
    })?;
    Ok(SyncGraph {
        alphabet: product_alphabet(a.alphabet(), b.alphabet(), shared),
        left: a.clone(),
        right: b.clone(),
        profile,
        graph,
    })
}

/// `A ⊗ B▷` with the right component's messages to the left renamed to
/// decorated (free) outputs. Only `out_AB` stays shared.
pub fn criterion_product_left(a: &Iots, b: &Iots) -> Result<SyncGraph> {
    let profile = async_composable(a, b)?;
    let renamed = rename_outputs(b, &profile.out_ba)?;
    sync_product(a, &renamed)
}

/// `A▷ ⊗ B`, the mirror of [`criterion_product_left`].
pub fn criterion_product_right(a: &Iots, b: &Iots) -> Result<SyncGraph> {
    let profile = async_composable(a, b)?;
    let renamed = rename_outputs(a, &profile.out_ab)?;
    sync_product(&renamed, b)
}

/// Configuration `((s_A,q_A),(s_B,q_B))` of `Ω(A) ⊗ Ω(B)`. Queue heads are at index 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AsyncConfig {
    pub left_state: usize,
    pub left_queue: Vec<ActionName>,
    pub right_state: usize,
    pub right_queue: Vec<ActionName>,
}

/// Renders a queue word head-first, `ε` when empty.
pub struct QueueWord<'a>(pub &'a [ActionName]);

impl fmt::Display for QueueWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Bounded reachable fragment of `Ω(A) ⊗ Ω(B)`.
#[derive(Debug, Clone)]
pub struct AsyncGraph {
    left: Iots,
    right: Iots,
    profile: SharedProfile,
    bound: usize,
    graph: ReachGraph<AsyncConfig>,
}

impl AsyncGraph {
    pub fn left(&self) -> &Iots {
        &self.left
    }

    pub fn right(&self) -> &Iots {
        &self.right
    }

    pub fn profile(&self) -> &SharedProfile {
        &self.profile
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn graph(&self) -> &ReachGraph<AsyncConfig> {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn config(&self, id: NodeId) -> &AsyncConfig {
        self.graph.node(id)
    }

    pub fn configs(&self) -> impl Iterator<Item = (NodeId, &AsyncConfig)> {
        self.graph.nodes()
    }

    pub fn edges(&self, id: NodeId) -> &[(ActionName, NodeId)] {
        self.graph.edges(id)
    }

    pub fn trace_to(&self, id: NodeId) -> Vec<ActionName> {
        self.graph.trace_to(id)
    }

    /// Configs where an enqueue was applicable but suppressed by the bound.
    pub fn horizon(&self) -> Vec<NodeId> {
        (0..self.len()).filter(|id| self.graph.is_flagged(*id)).collect()
    }

    pub fn in_horizon(&self, id: NodeId) -> bool {
        self.graph.is_flagged(id)
    }

    /// True when no enqueue was ever suppressed, i.e. the graph is the whole
    /// reachable state space.
    pub fn is_exhaustive(&self) -> bool {
        self.horizon().is_empty()
    }

    /// Looks up a config given by state names and queue words.
    pub fn find(
        &self,
        left: &str,
        left_queue: &[&str],
        right: &str,
        right_queue: &[&str],
    ) -> Option<NodeId> {
        let parse = |w: &[&str]| -> Option<Vec<ActionName>> {
            w.iter().map(|a| a.parse().ok()).collect()
        };
        let config = AsyncConfig {
            left_state: self.left.state_index(left)?,
            left_queue: parse(left_queue)?,
            right_state: self.right.state_index(right)?,
            right_queue: parse(right_queue)?,
        };
        self.graph.find(&config)
    }

    pub fn label(&self, id: NodeId) -> String {
        self.render(self.config(id))
    }

    pub fn render(&self, c: &AsyncConfig) -> String {
        format!(
            "(({},{}),({},{}))",
            self.left.state(c.left_state),
            QueueWord(&c.left_queue),
            self.right.state(c.right_state),
            QueueWord(&c.right_queue)
        )
    }
}

/// Explores `Ω(A) ⊗ Ω(B)` breadth-first with each queue capped at `k` messages.
///
/// Moves per configuration:
/// - free actions of either side (internal, non-shared input/output) change the local state;
/// - a shared output `a` of one side is an enqueue `a>` appending `a` to its own queue,
///   suppressed (and the config put on the horizon) when the queue already holds `k`;
/// - a shared input `a` of one side consumes the head of the partner's queue if it is `a`.
pub fn async_explore(a: &Iots, b: &Iots, k: usize) -> Result<AsyncGraph> {
    if k < 1 {
        return Err(Error::BoundTooSmall(k));
    }
    let profile = async_composable(a, b)?;
    let (out_ab, out_ba) = (&profile.out_ab, &profile.out_ba);
    let initial = AsyncConfig {
        left_state: a.initial(),
        left_queue: Vec::new(),
        right_state: b.initial(),
        right_queue: Vec::new(),
    };
    let graph = ReachGraph::explore(initial, max_states(), |c, out| {
        let mut suppressed = false;
        for (x, s2) in a.successors(c.left_state) {
            if out_ab.contains(x) {
                if c.left_queue.len() < k {
                    let mut next = c.clone();
                    next.left_state = *s2;
                    next.left_queue.push(x.clone());
                    out.push((x.decorate(), next));
                } else {
                    suppressed = true;
                }
            } else if out_ba.contains(x) {
                if c.right_queue.first() == Some(x) {
                    let mut next = c.clone();
                    next.left_state = *s2;
                    next.right_queue.remove(0);
                    out.push((x.clone(), next));
                }
            } else {
                let mut next = c.clone();
                next.left_state = *s2;
                out.push((x.clone(), next));
            }
        }
        for (y, t2) in b.successors(c.right_state) {
            if out_ba.contains(y) {
                if c.right_queue.len() < k {
                    let mut next = c.clone();
                    next.right_state = *t2;
                    next.right_queue.push(y.clone());
                    out.push((y.decorate(), next));
                } else {
                    suppressed = true;
                }
            } else if out_ab.contains(y) {
                if c.left_queue.first() == Some(y) {
                    let mut next = c.clone();
                    next.right_state = *t2;
                    next.left_queue.remove(0);
                    out.push((y.clone(), next));
                }
            } else {
                let mut next = c.clone();
                next.right_state = *t2;
                out.push((y.clone(), next));
            }
        }
        suppressed
    })?;
    Ok(AsyncGraph {
        left: a.clone(),
        right: b.clone(),
        profile,
        bound: k,
        graph,
    })
}
