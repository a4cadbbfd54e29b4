//! Invariant audits over explored graphs. Each returns `Err` with a
//! description of the first offending node.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::compose::{
    async_explore, criterion_product_left, criterion_product_right, sync_product, AsyncConfig,
    AsyncGraph, SyncGraph, SyncState,
};
use crate::error::Result;
use crate::model::{ActionName, ActionSet, Iots};

pub type AuditResult = std::result::Result<(), String>;

/// A move of one queued component `Ω(X)` from a local `(state, queue)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
enum LocalMove {
    /// Free action or enqueue; the label is already the product label.
    Free(ActionName, usize, Vec<ActionName>),
    /// Dequeue of the head, offered as output `a`.
    Emit(ActionName, Vec<ActionName>),
    /// Input of a partner message.
    Accept(ActionName, usize),
}

/// Transitions of `Ω(X)` at `(s, q)`, given the messages `x` sends and receives.
fn omega_moves(
    x: &Iots,
    s: usize,
    q: &[ActionName],
    sends: &ActionSet,
    receives: &ActionSet,
    k: usize,
    suppressed: &mut bool,
) -> Vec<LocalMove> {
    let mut moves = Vec::new();
    for (act, t) in x.successors(s) {
        if sends.contains(act) {
            if q.len() < k {
                let mut q2 = q.to_vec();
                q2.push(act.clone());
                moves.push(LocalMove::Free(act.decorate(), *t, q2));
            } else {
                *suppressed = true;
            }
        } else if receives.contains(act) {
            moves.push(LocalMove::Accept(act.clone(), *t));
        } else {
            moves.push(LocalMove::Free(act.clone(), *t, q.to_vec()));
        }
    }
    if let Some((head, tail)) = q.split_first() {
        moves.push(LocalMove::Emit(head.clone(), tail.to_vec()));
    }
    moves
}

/// Expected successors of a config, built by synchronizing the two queued
/// components on their shared labels.
fn expected_successors(g: &AsyncGraph, c: &AsyncConfig) -> (BTreeSet<(ActionName, AsyncConfig)>, bool) {
    let (a, b, p, k) = (g.left(), g.right(), g.profile(), g.bound());
    let mut suppressed = false;
    let ma = omega_moves(a, c.left_state, &c.left_queue, &p.out_ab, &p.out_ba, k, &mut suppressed);
    let mb = omega_moves(b, c.right_state, &c.right_queue, &p.out_ba, &p.out_ab, k, &mut suppressed);
    let mut out = BTreeSet::new();
    for m in &ma {
        if let LocalMove::Free(x, s2, q2) = m {
            let mut n = c.clone();
            n.left_state = *s2;
            n.left_queue = q2.clone();
            out.insert((x.clone(), n));
        }
    }
    for m in &mb {
        if let LocalMove::Free(x, s2, q2) = m {
            let mut n = c.clone();
            n.right_state = *s2;
            n.right_queue = q2.clone();
            out.insert((x.clone(), n));
        }
    }
    for m in &ma {
        for n in &mb {
            match (m, n) {
                (LocalMove::Emit(x, qa), LocalMove::Accept(y, t2)) if x == y => {
                    let mut c2 = c.clone();
                    c2.left_queue = qa.clone();
                    c2.right_state = *t2;
                    out.insert((x.clone(), c2));
                }
                (LocalMove::Accept(x, s2), LocalMove::Emit(y, qb)) if x == y => {
                    let mut c2 = c.clone();
                    c2.left_state = *s2;
                    c2.right_queue = qb.clone();
                    out.insert((x.clone(), c2));
                }
                _ => {}
            }
        }
    }
    (out, suppressed)
}

/// Replays every explored config against an independent construction of
/// `Ω(A) ⊗ Ω(B)`: edges, horizon flags and queue bounds must all agree.
pub fn replay_async(g: &AsyncGraph) -> AuditResult {
    for (id, c) in g.configs() {
        if c.left_queue.len() > g.bound() || c.right_queue.len() > g.bound() {
            return Err(format!("{} exceeds the bound", g.label(id)));
        }
        if c.left_queue.iter().any(|x| !g.profile().out_ab.contains(x))
            || c.right_queue.iter().any(|x| !g.profile().out_ba.contains(x))
        {
            return Err(format!("{} holds a foreign message", g.label(id)));
        }
        let (expected, suppressed) = expected_successors(g, c);
        let actual: BTreeSet<(ActionName, AsyncConfig)> = g
            .edges(id)
            .iter()
            .map(|(x, t)| (x.clone(), g.config(*t).clone()))
            .collect();
        if expected != actual {
            return Err(format!("edges of {} differ from the queue semantics", g.label(id)));
        }
        if suppressed != g.in_horizon(id) {
            return Err(format!("horizon flag of {} is wrong", g.label(id)));
        }
    }
    Ok(())
}

/// Every node `(s_A,s_B)` of `A ⊗ B` occurs as `((s_A,ε),(s_B,ε))` in `g`.
pub fn empty_queue_embedding(sync: &SyncGraph, g: &AsyncGraph) -> AuditResult {
    for id in 0..sync.len() {
        let s = sync.state(id);
        let c = AsyncConfig {
            left_state: s.left,
            left_queue: Vec::new(),
            right_state: s.right,
            right_queue: Vec::new(),
        };
        if g.graph().find(&c).is_none() {
            return Err(format!("{} has no empty-queue config", sync.label(id)));
        }
    }
    Ok(())
}

/// Whether `x` can go from some state in `from` to `target` along a path
/// whose message labels (those in `messages`) spell exactly `word`, and whose
/// other labels all satisfy `filler`.
pub fn spells_word(
    x: &Iots,
    from: &BTreeSet<usize>,
    word: &[ActionName],
    target: usize,
    messages: &ActionSet,
    filler: impl Fn(&ActionName) -> bool,
) -> bool {
    let mut seen: HashSet<(usize, usize)> = from.iter().map(|s| (*s, 0)).collect();
    let mut queue: VecDeque<(usize, usize)> = seen.iter().copied().collect();
    while let Some((s, i)) = queue.pop_front() {
        if s == target && i == word.len() {
            return true;
        }
        for (act, t) in x.successors(s) {
            let next = if messages.contains(act) {
                (word.get(i) == Some(act)).then_some(i + 1)
            } else {
                filler(act).then_some(i)
            };
            if let Some(j) = next {
                if seen.insert((*t, j)) {
                    queue.push_back((*t, j));
                }
            }
        }
    }
    false
}

fn partners_left(p: &SyncGraph, right: usize) -> BTreeSet<usize> {
    (0..p.len())
        .map(|id| p.state(id))
        .filter(|s| s.right == right)
        .map(|s| s.left)
        .collect()
}

fn partners_right(p: &SyncGraph, left: usize) -> BTreeSet<usize> {
    (0..p.len())
        .map(|id| p.state(id))
        .filter(|s| s.left == left)
        .map(|s| s.right)
        .collect()
}

/// Properties Q_A and Q_B: each config is explained by a criterion-product
/// state plus one message-sending step per queued letter.
pub fn check_q(a: &Iots, b: &Iots, g: &AsyncGraph) -> Result<AuditResult> {
    let left = criterion_product_left(a, b)?;
    let right = criterion_product_right(a, b)?;
    let p = g.profile();
    for (id, c) in g.configs() {
        let ok_a = if c.left_queue.is_empty() {
            left.graph()
                .find(&SyncState { left: c.left_state, right: c.right_state })
                .is_some()
        } else {
            spells_word(
                a,
                &partners_left(&left, c.right_state),
                &c.left_queue,
                c.left_state,
                &p.out_ab,
                |_| true,
            )
        };
        if !ok_a {
            return Ok(Err(format!("Q_A fails at {}", g.label(id))));
        }
        let ok_b = if c.right_queue.is_empty() {
            right.graph()
                .find(&SyncState { left: c.left_state, right: c.right_state })
                .is_some()
        } else {
            spells_word(
                b,
                &partners_right(&right, c.left_state),
                &c.right_queue,
                c.right_state,
                &p.out_ba,
                |_| true,
            )
        };
        if !ok_b {
            return Ok(Err(format!("Q_B fails at {}", g.label(id))));
        }
    }
    Ok(Ok(()))
}

/// Property P: at least one queue is empty, and the loaded side is reachable
/// from a synchronous state by sending its queue with only free actions in
/// between. Meaningful for half-duplex pairs.
pub fn check_p(a: &Iots, b: &Iots, g: &AsyncGraph) -> Result<AuditResult> {
    let sync = sync_product(a, b)?;
    let p = g.profile();
    for (id, c) in g.configs() {
        let at = |l: usize, r: usize| sync.graph().find(&SyncState { left: l, right: r });
        let ok = match (c.left_queue.is_empty(), c.right_queue.is_empty()) {
            (true, true) => at(c.left_state, c.right_state).is_some(),
            (false, true) => spells_word(
                a,
                &partners_left(&sync, c.right_state),
                &c.left_queue,
                c.left_state,
                &p.out_ab,
                |x| p.free_a.contains(x),
            ),
            (true, false) => spells_word(
                b,
                &partners_right(&sync, c.left_state),
                &c.right_queue,
                c.right_state,
                &p.out_ba,
                |x| p.free_b.contains(x),
            ),
            (false, false) => false,
        };
        if !ok {
            return Ok(Err(format!("property P fails at {}", g.label(id))));
        }
    }
    Ok(Ok(()))
}

/// Nodes at bound `k` are nodes at `k + 1`; horizon nodes at `k` are either
/// interior or still on the horizon there.
pub fn check_monotone(a: &Iots, b: &Iots, k: usize) -> Result<AuditResult> {
    let small = async_explore(a, b, k)?;
    let big = async_explore(a, b, k + 1)?;
    for (id, c) in small.configs() {
        let Some(j) = big.graph().find(c) else {
            return Ok(Err(format!("{} lost at bound {}", small.label(id), k + 1)));
        };
        if !small.in_horizon(id) && small.edges(id).len() != big.edges(j).len() {
            return Ok(Err(format!("{} changes its moves at bound {}", small.label(id), k + 1)));
        }
    }
    Ok(Ok(()))
}

/// Whether some config has both queues loaded.
pub fn both_queues_loaded(g: &AsyncGraph) -> bool {
    g.configs()
        .any(|(_, c)| !c.left_queue.is_empty() && !c.right_queue.is_empty())
}
