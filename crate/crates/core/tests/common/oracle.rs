//! Brute-force reference semantics, written against the public component API
//! only: reachable sets are computed by naive fixpoint iteration.

use std::collections::BTreeSet;

use iots_compat::{ActionName, ActionSet, Iots};

type Trans = Vec<(usize, ActionName, usize)>;

fn transitions(x: &Iots) -> Trans {
    (0..x.state_count())
        .flat_map(|s| x.successors(s).iter().map(move |(a, t)| (s, a.clone(), *t)))
        .collect()
}

fn shared(a: &Iots, b: &Iots) -> ActionSet {
    a.alphabet().all().intersection(&b.alphabet().all()).cloned().collect()
}

/// Reachable pairs of the synchronous product, by fixpoint.
pub fn sync_reach(a: &Iots, b: &Iots) -> BTreeSet<(usize, usize)> {
    let (ta, tb, sh) = (transitions(a), transitions(b), shared(a, b));
    let mut reach = BTreeSet::from([(a.initial(), b.initial())]);
    loop {
        let mut next = reach.clone();
        for &(s, r) in &reach {
            for (p, x, q) in &ta {
                if *p != s {
                    continue;
                }
                if !sh.contains(x) {
                    next.insert((*q, r));
                }
                for (p2, y, q2) in &tb {
                    if *p2 == r && y == x {
                        next.insert((*q, *q2));
                    }
                }
            }
            for (p2, y, q2) in &tb {
                if *p2 == r && !sh.contains(y) {
                    next.insert((s, *q2));
                }
            }
        }
        if next == reach {
            return reach;
        }
        reach = next;
    }
}

/// Successor labels of the synchronous product at a pair.
pub fn sync_labels(a: &Iots, b: &Iots, s: usize, r: usize) -> Vec<ActionName> {
    let sh = shared(a, b);
    let mut out = Vec::new();
    for (x, _) in a.successors(s) {
        if !sh.contains(x) || b.successors(r).iter().any(|(y, _)| y == x) {
            out.push(x.clone());
        }
    }
    for (y, _) in b.successors(r) {
        if !sh.contains(y) {
            out.push(y.clone());
        }
    }
    out
}

/// States reachable from `s` through labels in `allowed`, by fixpoint.
pub fn closure(x: &Iots, s: usize, allowed: &ActionSet) -> BTreeSet<usize> {
    let t = transitions(x);
    let mut set = BTreeSet::from([s]);
    loop {
        let before = set.len();
        for (p, a, q) in &t {
            if set.contains(p) && allowed.contains(a) {
                set.insert(*q);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

pub fn accepts_after(x: &Iots, s: usize, allowed: &ActionSet, msg: &ActionName) -> bool {
    closure(x, s, allowed)
        .into_iter()
        .any(|t| x.successors(t).iter().any(|(a, _)| a == msg))
}

pub type Config = (usize, Vec<ActionName>, usize, Vec<ActionName>);

/// Reachable configurations of the queued composition with queues capped at
/// `k`, by fixpoint.
pub fn async_reach(a: &Iots, b: &Iots, k: usize) -> BTreeSet<Config> {
    let ab: ActionSet = a.alphabet().outputs().intersection(b.alphabet().inputs()).cloned().collect();
    let ba: ActionSet = b.alphabet().outputs().intersection(a.alphabet().inputs()).cloned().collect();
    let (ta, tb) = (transitions(a), transitions(b));
    let mut reach = BTreeSet::from([(a.initial(), vec![], b.initial(), vec![])]);
    loop {
        let mut next = reach.clone();
        for (s, qa, r, qb) in &reach {
            for (p, x, q) in ta.iter().filter(|t| t.0 == *s) {
                let _ = p;
                if ab.contains(x) {
                    if qa.len() < k {
                        let mut qa2 = qa.clone();
                        qa2.push(x.clone());
                        next.insert((*q, qa2, *r, qb.clone()));
                    }
                } else if ba.contains(x) {
                    if qb.first() == Some(x) {
                        next.insert((*q, qa.clone(), *r, qb[1..].to_vec()));
                    }
                } else {
                    next.insert((*q, qa.clone(), *r, qb.clone()));
                }
            }
            for (_, y, q) in tb.iter().filter(|t| t.0 == *r) {
                if ba.contains(y) {
                    if qb.len() < k {
                        let mut qb2 = qb.clone();
                        qb2.push(y.clone());
                        next.insert((*s, qa.clone(), *q, qb2));
                    }
                } else if ab.contains(y) {
                    if qa.first() == Some(y) {
                        next.insert((*s, qa[1..].to_vec(), *q, qb.clone()));
                    }
                } else {
                    next.insert((*s, qa.clone(), *q, qb.clone()));
                }
            }
        }
        if next == reach {
            return reach;
        }
        reach = next;
    }
}

/// Whether some reachable config has a queue head the receiver cannot take,
/// immediately (`weak = false`) or after internal moves and own enqueues.
pub fn async_violation_exists(a: &Iots, b: &Iots, k: usize, weak: bool) -> bool {
    let ab: ActionSet = a.alphabet().outputs().intersection(b.alphabet().inputs()).cloned().collect();
    let ba: ActionSet = b.alphabet().outputs().intersection(a.alphabet().inputs()).cloned().collect();
    let allow = |x: &Iots, own: &ActionSet| -> ActionSet {
        if weak {
            x.alphabet().internals().union(own).cloned().collect()
        } else {
            ActionSet::new()
        }
    };
    let (allow_a, allow_b) = (allow(a, &ab), allow(b, &ba));
    async_reach(a, b, k).into_iter().any(|(s, qa, r, qb)| {
        qa.first().is_some_and(|m| !accepts_after(b, r, &allow_b, m))
            || qb.first().is_some_and(|m| !accepts_after(a, s, &allow_a, m))
    })
}
