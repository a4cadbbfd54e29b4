//! Breadth-first reachable-fragment construction shared by all products.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::model::ActionName;

pub type NodeId = usize;

/// Environment variable capping the number of nodes of any explored graph.
pub const MAX_STATES_ENV: &str = "IOTS_COMPAT_MAX_STATES";
pub const DEFAULT_MAX_STATES: usize = 1_000_000;

/// Current node cap: `IOTS_COMPAT_MAX_STATES` if set to a positive integer,
/// otherwise one million.
pub fn max_states() -> usize {
    std::env::var(MAX_STATES_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or(DEFAULT_MAX_STATES)
}

/// Reachable fragment of a transition system. Node 0 is the initial node and
/// nodes are numbered in BFS discovery order, so `parent` pointers yield
/// shortest traces.
#[derive(Debug, Clone)]
pub struct ReachGraph<N> {
    nodes: Vec<N>,
    index: HashMap<N, NodeId>,
    edges: Vec<Vec<(ActionName, NodeId)>>,
    parent: Vec<Option<(NodeId, ActionName)>>,
    depth: Vec<usize>,
    flagged: Vec<bool>,
}

impl<N: Clone + Eq + Hash> ReachGraph<N> {
    /// Explores from `initial`. `expand` pushes the labeled successors of a node
    /// and returns `true` to flag the node (used for bound-suppressed moves).
    pub(crate) fn explore<F>(initial: N, limit: usize, mut expand: F) -> Result<Self>
    where
        F: FnMut(&N, &mut Vec<(ActionName, N)>) -> bool,
    {
        let mut g = ReachGraph {
            nodes: vec![initial.clone()],
            index: HashMap::from([(initial, 0)]),
            edges: Vec::new(),
            parent: vec![None],
            depth: vec![0],
            flagged: Vec::new(),
        };
        let mut buf = Vec::new();
        let mut next = 0;
        while next < g.nodes.len() {
            buf.clear();
            let node = g.nodes[next].clone();
            let flag = expand(&node, &mut buf);
            let mut out = Vec::with_capacity(buf.len());
            for (action, succ) in buf.drain(..) {
                let id = match g.index.get(&succ) {
                    Some(id) => *id,
                    None => {
                        let id = g.nodes.len();
                        if id >= limit {
                            return Err(Error::StateLimitExceeded(limit));
                        }
                        g.nodes.push(succ.clone());
                        g.index.insert(succ, id);
                        g.parent.push(Some((next, action.clone())));
                        g.depth.push(g.depth[next] + 1);
                        id
                    }
                };
                out.push((action, id));
            }
            out.sort();
            out.dedup();
            g.edges.push(out);
            g.flagged.push(flag);
            next += 1;
        }
        Ok(g)
    }

    pub fn find(&self, node: &N) -> Option<NodeId> {
        self.index.get(node).copied()
    }
}

impl<N> ReachGraph<N> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &N {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &N)> {
        self.nodes.iter().enumerate()
    }

    /// Outgoing edges of `id`, sorted by `(action, target)`.
    pub fn edges(&self, id: NodeId) -> &[(ActionName, NodeId)] {
        &self.edges[id]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.depth[id]
    }

    pub fn is_flagged(&self, id: NodeId) -> bool {
        self.flagged[id]
    }

    /// A shortest action sequence from the initial node to `id`.
    pub fn trace_to(&self, id: NodeId) -> Vec<ActionName> {
        let mut trace = Vec::with_capacity(self.depth[id]);
        let mut cur = id;
        while let Some((p, a)) = &self.parent[cur] {
            trace.push(a.clone());
            cur = *p;
        }
        trace.reverse();
        trace
    }
}
