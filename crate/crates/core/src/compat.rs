//! Synchronous and asynchronous compatibility checks, the WAC criterion and
//! the completeness properties X_A / X_B.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::{closure_indices, Side};
use crate::compose::{
    async_explore, criterion_product_left, criterion_product_right, sync_product, AsyncGraph,
    SyncGraph,
};
use crate::error::Result;
use crate::graph::NodeId;
use crate::model::{async_composable, composable, ActionName, ActionSet, Iots};
use crate::verdict::{BoundedDeadlockReport, Citation, DeadlockEntry, DeadlockReport, Verdict, Witness};

/// Strong: the receiver must accept immediately. Weak: after internal moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strong,
    Weak,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strong" => Ok(Mode::Strong),
            "weak" => Ok(Mode::Weak),
            other => Err(format!("unknown mode `{other}` (expected strong or weak)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strong => "strong",
            Mode::Weak => "weak",
        })
    }
}

/// An enabled message the partner cannot take.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatViolation {
    pub location: String,
    /// The component that sends the message.
    pub sender: Side,
    pub action: ActionName,
    pub kind: Mode,
}

/// Acceptance test for one receiving component, with a per-state cache of
/// weak closures.
struct Receiver<'a> {
    iots: &'a Iots,
    /// `None` for strong acceptance.
    allowed: Option<ActionSet>,
    cache: HashMap<usize, Vec<usize>>,
}

impl<'a> Receiver<'a> {
    fn new(iots: &'a Iots, allowed: Option<ActionSet>) -> Self {
        Receiver {
            iots,
            allowed,
            cache: HashMap::new(),
        }
    }

    fn accepts(&mut self, state: usize, action: &ActionName) -> bool {
        match &self.allowed {
            None => self.iots.enables(state, action),
            Some(allowed) => {
                let iots = self.iots;
                self.cache
                    .entry(state)
                    .or_insert_with(|| closure_indices(iots, state, allowed))
                    .iter()
                    .any(|s| iots.enables(*s, action))
            }
        }
    }

    fn kind(&self) -> Mode {
        if self.allowed.is_some() {
            Mode::Weak
        } else {
            Mode::Strong
        }
    }
}

/// One direction of message flow inside a synchronous product.
struct Direction<'a> {
    sender: Side,
    messages: &'a ActionSet,
    receiver: Receiver<'a>,
}

/// All violations in BFS order, grouped by node.
fn product_violations(g: &SyncGraph, dirs: &mut [Direction<'_>]) -> Vec<(NodeId, CompatViolation)> {
    let mut found = Vec::new();
    for id in 0..g.len() {
        let st = g.state(id);
        for d in dirs.iter_mut() {
            let (sender, s, r) = match d.sender {
                Side::Left => (g.left(), st.left, st.right),
                Side::Right => (g.right(), st.right, st.left),
            };
            let enabled: BTreeSet<&ActionName> = sender
                .successors(s)
                .iter()
                .map(|(x, _)| x)
                .filter(|x| d.messages.contains(*x))
                .collect();
            for x in enabled {
                if !d.receiver.accepts(r, x) {
                    found.push((
                        id,
                        CompatViolation {
                            location: g.label(id),
                            sender: d.sender,
                            action: x.clone(),
                            kind: d.receiver.kind(),
                        },
                    ));
                }
            }
        }
    }
    found
}

fn verdict_from(
    g: &SyncGraph,
    violations: &[(NodeId, CompatViolation)],
    justification: Vec<Citation>,
) -> Verdict {
    match violations.first() {
        None => Verdict::holds(justification),
        Some((id, _)) => {
            let mut actions: Vec<ActionName> = violations
                .iter()
                .filter(|(n, _)| n == id)
                .map(|(_, v)| v.action.clone())
                .collect();
            actions.sort();
            actions.dedup();
            Verdict::fails(
                Witness {
                    location: g.label(*id),
                    actions,
                    trace: g.trace_to(*id),
                },
                justification,
            )
        }
    }
}

fn sync_check(a: &Iots, b: &Iots, mode: Mode) -> Result<(SyncGraph, Vec<(NodeId, CompatViolation)>)> {
    let profile = composable(a, b)?;
    let g = sync_product(a, b)?;
    let allowed = |x: &Iots| match mode {
        Mode::Strong => None,
        Mode::Weak => Some(x.alphabet().internals().clone()),
    };
    let mut dirs = [
        Direction {
            sender: Side::Left,
            messages: &profile.out_ab,
            receiver: Receiver::new(b, allowed(b)),
        },
        Direction {
            sender: Side::Right,
            messages: &profile.out_ba,
            receiver: Receiver::new(a, allowed(a)),
        },
    ];
    let v = product_violations(&g, &mut dirs);
    Ok((g, v))
}

/// Every violation of strong or weak synchronous compatibility, in BFS order.
pub fn sync_violations(a: &Iots, b: &Iots, mode: Mode) -> Result<Vec<CompatViolation>> {
    Ok(sync_check(a, b, mode)?.1.into_iter().map(|(_, v)| v).collect())
}

/// Every enabled shared output is immediately matched by the partner.
pub fn strong_sync(a: &Iots, b: &Iots) -> Result<Verdict> {
    let (g, v) = sync_check(a, b, Mode::Strong)?;
    Ok(verdict_from(&g, &v, vec![Citation::DefStrongSync]))
}

/// Every enabled shared output is matched after internal moves of the partner.
pub fn weak_sync(a: &Iots, b: &Iots) -> Result<Verdict> {
    let (g, v) = sync_check(a, b, Mode::Weak)?;
    Ok(verdict_from(&g, &v, vec![Citation::DefWeakSync]))
}

fn decorated_union(internals: &ActionSet, messages: &ActionSet) -> ActionSet {
    internals
        .iter()
        .cloned()
        .chain(messages.iter().map(ActionName::decorate))
        .collect()
}

/// Condition (a): in every reachable state of `A ⊗ B▷`, each message `A` can
/// send is accepted by `B▷` after internal moves and enqueues of its own.
pub fn wac_left(a: &Iots, b: &Iots) -> Result<Verdict> {
    let profile = async_composable(a, b)?;
    let g = criterion_product_left(a, b)?;
    let allowed = decorated_union(b.alphabet().internals(), &profile.out_ba);
    let mut dirs = [Direction {
        sender: Side::Left,
        messages: &profile.out_ab,
        receiver: Receiver::new(g.right(), Some(allowed)),
    }];
    let v = product_violations(&g, &mut dirs);
    Ok(verdict_from(&g, &v, vec![Citation::ThmWac]))
}

/// Condition (b), the mirror of [`wac_left`] over `A▷ ⊗ B`.
pub fn wac_right(a: &Iots, b: &Iots) -> Result<Verdict> {
    let profile = async_composable(a, b)?;
    let g = criterion_product_right(a, b)?;
    let allowed = decorated_union(a.alphabet().internals(), &profile.out_ab);
    let mut dirs = [Direction {
        sender: Side::Right,
        messages: &profile.out_ba,
        receiver: Receiver::new(g.left(), Some(allowed)),
    }];
    let v = product_violations(&g, &mut dirs);
    Ok(verdict_from(&g, &v, vec![Citation::ThmWac]))
}

/// Both WAC conditions; `Holds` proves weak asynchronous compatibility.
pub fn wac(a: &Iots, b: &Iots) -> Result<Verdict> {
    let left = wac_left(a, b)?;
    if left.is_fails() {
        return Ok(left);
    }
    wac_right(a, b)
}

/// Result of the X_A / X_B search, per candidate state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalWitness {
    pub side: Side,
    pub state: String,
    /// A reachable config `((s,ε),·)` (or `(·,(s,ε))`), if found.
    pub config: Option<String>,
}

fn side_tag(side: Side) -> &'static str {
    match side {
        Side::Left => "A",
        Side::Right => "B",
    }
}

/// Per-state outcome of the completeness search. States reachable in `A ⊗ B`
/// are confirmed through empty-queue embedding; others are searched for in
/// the bounded asynchronous exploration.
pub fn completeness_witnesses(a: &Iots, b: &Iots, k: usize) -> Result<Vec<LocalWitness>> {
    let profile = async_composable(a, b)?;
    let left = criterion_product_left(a, b)?;
    let right = criterion_product_right(a, b)?;
    let sync = sync_product(a, b)?;

    let candidates_a: Vec<usize> = left
        .locally_reachable_left()
        .into_iter()
        .filter(|s| a.enables_any(*s, &profile.out_ab))
        .collect();
    let candidates_b: Vec<usize> = right
        .locally_reachable_right()
        .into_iter()
        .filter(|s| b.enables_any(*s, &profile.out_ba))
        .collect();

    // first sync node per local state, in BFS order
    let mut sync_left: BTreeMap<usize, String> = BTreeMap::new();
    let mut sync_right: BTreeMap<usize, String> = BTreeMap::new();
    for id in 0..sync.len() {
        let s = sync.state(id);
        sync_left.entry(s.left).or_insert_with(|| {
            format!("(({},ε),({},ε))", a.state(s.left), b.state(s.right))
        });
        sync_right.entry(s.right).or_insert_with(|| {
            format!("(({},ε),({},ε))", a.state(s.left), b.state(s.right))
        });
    }

    let mut out: Vec<LocalWitness> = candidates_a
        .iter()
        .map(|s| LocalWitness {
            side: Side::Left,
            state: a.state(*s).to_string(),
            config: sync_left.get(s).cloned(),
        })
        .chain(candidates_b.iter().map(|s| LocalWitness {
            side: Side::Right,
            state: b.state(*s).to_string(),
            config: sync_right.get(s).cloned(),
        }))
        .collect();

    if out.iter().any(|w| w.config.is_none()) {
        let g = async_explore(a, b, k)?;
        for w in out.iter_mut().filter(|w| w.config.is_none()) {
            w.config = match w.side {
                Side::Left => {
                    let s = a.state_index(&w.state).expect("own state");
                    g.configs()
                        .find(|(_, c)| c.left_state == s && c.left_queue.is_empty())
                        .map(|(id, _)| g.label(id))
                }
                Side::Right => {
                    let s = b.state_index(&w.state).expect("own state");
                    g.configs()
                        .find(|(_, c)| c.right_state == s && c.right_queue.is_empty())
                        .map(|(id, _)| g.label(id))
                }
            };
        }
    }
    Ok(out)
}

/// Properties X_A and X_B. `Holds` when every candidate state is witnessed
/// with an empty own queue; otherwise `InconclusiveAtBound(k)`, never `Fails`.
pub fn completeness_x(a: &Iots, b: &Iots, k: usize) -> Result<Verdict> {
    if k < 1 {
        return Err(crate::error::Error::BoundTooSmall(k));
    }
    let witnesses = completeness_witnesses(a, b, k)?;
    let details: Vec<String> = witnesses
        .iter()
        .map(|w| match &w.config {
            Some(c) => format!("{}:{} witnessed by {}", side_tag(w.side), w.state, c),
            None => format!("{}:{} not witnessed within bound {}", side_tag(w.side), w.state, k),
        })
        .collect();
    let missing: Vec<&LocalWitness> = witnesses.iter().filter(|w| w.config.is_none()).collect();
    let Some(first) = missing.first() else {
        return Ok(
            Verdict::holds(vec![Citation::ThmCompleteness, Citation::LemEmptyQueue])
                .with_details(details),
        );
    };

    // Point the witness at where the unconfirmed state shows up in the criterion product.
    let (g, profile) = match first.side {
        Side::Left => (criterion_product_left(a, b)?, async_composable(a, b)?),
        Side::Right => (criterion_product_right(a, b)?, async_composable(a, b)?),
    };
    let (comp, messages) = match first.side {
        Side::Left => (a, &profile.out_ab),
        Side::Right => (b, &profile.out_ba),
    };
    let s = comp.state_index(&first.state).expect("own state");
    let node = (0..g.len())
        .find(|id| {
            let st = g.state(*id);
            match first.side {
                Side::Left => st.left == s,
                Side::Right => st.right == s,
            }
        })
        .expect("candidate is locally reachable");
    let mut actions: Vec<ActionName> = comp
        .successors(s)
        .iter()
        .map(|(x, _)| x.clone())
        .filter(|x| messages.contains(x))
        .collect();
    actions.dedup();
    let mut v = Verdict::inconclusive(
        k,
        vec![Citation::ThmCompleteness, Citation::BoundedExploration],
    )
    .with_details(details);
    v.witness = Some(Witness {
        location: format!("{}:{}", side_tag(first.side), first.state),
        actions,
        trace: g.trace_to(node),
    });
    Ok(v)
}

/// Queue-head violations of a bounded exploration, in BFS order.
pub fn async_violations(g: &AsyncGraph, mode: Mode) -> Vec<(NodeId, CompatViolation)> {
    let (a, b) = (g.left(), g.right());
    let profile = g.profile();
    let allowed = |x: &Iots, own: &ActionSet| match mode {
        Mode::Strong => None,
        // enqueues of the receiver's own messages are internal in Ω
        Mode::Weak => Some(x.alphabet().internals().union(own).cloned().collect()),
    };
    let mut recv_b = Receiver::new(b, allowed(b, &profile.out_ba));
    let mut recv_a = Receiver::new(a, allowed(a, &profile.out_ab));
    let mut found = Vec::new();
    for (id, c) in g.configs() {
        if let Some(x) = c.left_queue.first() {
            if !recv_b.accepts(c.right_state, x) {
                found.push((
                    id,
                    CompatViolation {
                        location: g.label(id),
                        sender: Side::Left,
                        action: x.clone(),
                        kind: mode,
                    },
                ));
            }
        }
        if let Some(y) = c.right_queue.first() {
            if !recv_a.accepts(c.left_state, y) {
                found.push((
                    id,
                    CompatViolation {
                        location: g.label(id),
                        sender: Side::Right,
                        action: y.clone(),
                        kind: mode,
                    },
                ));
            }
        }
    }
    found
}

/// Checks asynchronous compatibility on the exploration bounded by `k`.
///
/// Acceptance in `Ω(B)` depends only on `B`'s local state, because enqueues
/// are never blocked; so a violation at an explored config is a confirmed
/// failure. Without violations the result is `Holds` only if the exploration
/// was exhaustive.
pub fn async_compat_bounded(a: &Iots, b: &Iots, k: usize, mode: Mode) -> Result<Verdict> {
    let g = async_explore(a, b, k)?;
    Ok(async_compat_on(&g, mode))
}

/// [`async_compat_bounded`] on an already explored graph.
pub fn async_compat_on(g: &AsyncGraph, mode: Mode) -> Verdict {
    let violations = async_violations(g, mode);
    let exhaustive = g.is_exhaustive();
    match violations.first() {
        Some((id, _)) => {
            let mut actions: Vec<ActionName> = violations
                .iter()
                .filter(|(n, _)| n == id)
                .map(|(_, v)| v.action.clone())
                .collect();
            actions.sort();
            actions.dedup();
            Verdict::fails(
                Witness {
                    location: g.label(*id),
                    actions,
                    trace: g.trace_to(*id),
                },
                vec![Citation::DefAsyncCompat, Citation::BoundedExploration],
            )
            .with_exhaustive(exhaustive)
        }
        None if exhaustive => Verdict::holds(vec![
            Citation::DefAsyncCompat,
            Citation::ExhaustiveExploration,
        ])
        .with_exhaustive(true),
        None => Verdict::inconclusive(
            g.bound(),
            vec![Citation::DefAsyncCompat, Citation::BoundedExploration],
        ),
    }
}

/// Deadlocked configs of the bounded exploration. Horizon configs are never
/// deadlocks: their suppressed enqueue is an available move.
pub fn async_deadlock_bounded(a: &Iots, b: &Iots, k: usize) -> Result<BoundedDeadlockReport> {
    let g = async_explore(a, b, k)?;
    Ok(async_deadlocks_on(&g))
}

pub fn async_deadlocks_on(g: &AsyncGraph) -> BoundedDeadlockReport {
    let deadlocked = g
        .configs()
        .filter(|(id, _)| g.edges(*id).is_empty() && !g.in_horizon(*id))
        .map(|(id, _)| DeadlockEntry {
            location: g.label(id),
            trace: g.trace_to(id),
        })
        .collect();
    BoundedDeadlockReport {
        report: DeadlockReport { deadlocked },
        bound: g.bound(),
        exhaustive: g.is_exhaustive(),
    }
}
