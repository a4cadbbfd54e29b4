//! Structural analyses: closures, I/O-separation, half-duplex detection and deadlocks.

use crate::compose::{criterion_product_left, criterion_product_right, sync_product};
use crate::error::{Error, Result};
use crate::model::{async_composable, ActionName, ActionSet, Iots, StateId};
use crate::verdict::{Citation, DeadlockEntry, DeadlockReport, Verdict, Witness};

/// States reachable from `origin` using only `allowed` labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSet {
    pub origin: StateId,
    pub allowed: ActionSet,
    pub members: Vec<StateId>,
}

impl ClosureSet {
    pub fn contains(&self, state: &str) -> bool {
        self.members.iter().any(|s| s.as_str() == state)
    }
}

/// Which criterion product a check refers to: `A ⊗ B▷` (left) or `A▷ ⊗ B` (right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `s ⟶*_X s'` for every member `s'`, as a sorted list of state indices.
pub fn closure_indices(a: &Iots, origin: usize, allowed: &ActionSet) -> Vec<usize> {
    let mut seen = vec![false; a.state_count()];
    seen[origin] = true;
    let mut stack = vec![origin];
    while let Some(s) = stack.pop() {
        for (x, t) in a.successors(s) {
            if !seen[*t] && allowed.contains(x) {
                seen[*t] = true;
                stack.push(*t);
            }
        }
    }
    (0..seen.len()).filter(|i| seen[*i]).collect()
}

pub fn closure(a: &Iots, state: &str, allowed: &ActionSet) -> Result<ClosureSet> {
    let origin = a
        .state_index(state)
        .ok_or_else(|| Error::UnknownState(state.to_string()))?;
    Ok(ClosureSet {
        origin: a.state(origin).clone(),
        allowed: allowed.clone(),
        members: closure_indices(a, origin, allowed)
            .into_iter()
            .map(|i| a.state(i).clone())
            .collect(),
    })
}

fn first_enabled<'a>(a: &'a Iots, state: usize, set: &ActionSet) -> Option<&'a ActionName> {
    a.successors(state)
        .iter()
        .map(|(x, _)| x)
        .find(|x| set.contains(*x))
}

/// No reachable state enables both an output and an input.
pub fn io_separated(a: &Iots) -> Verdict {
    let al = a.alphabet();
    for s in a.reachable() {
        if let (Some(o), Some(i)) = (
            first_enabled(a, s, al.outputs()),
            first_enabled(a, s, al.inputs()),
        ) {
            return Verdict::fails(
                Witness {
                    location: a.state(s).to_string(),
                    actions: vec![o.clone(), i.clone()],
                    trace: a.trace_to(s).unwrap_or_default(),
                },
                vec![Citation::DefIoSeparated],
            );
        }
    }
    Verdict::holds(vec![Citation::DefIoSeparated])
}

/// No reachable state enabling an output can reach, through internal moves,
/// a state enabling an input.
pub fn obs_io_separated(a: &Iots) -> Verdict {
    let al = a.alphabet();
    for s in a.reachable() {
        let Some(o) = first_enabled(a, s, al.outputs()) else {
            continue;
        };
        for t in closure_indices(a, s, al.internals()) {
            if let Some(i) = first_enabled(a, t, al.inputs()) {
                return Verdict::fails(
                    Witness {
                        location: a.state(s).to_string(),
                        actions: vec![o.clone(), i.clone()],
                        trace: a.trace_to(s).unwrap_or_default(),
                    },
                    vec![Citation::DefObsIoSeparated],
                );
            }
        }
    }
    Verdict::holds(vec![Citation::DefObsIoSeparated])
}

/// Decides the half-duplex property through the synchronous product: it fails
/// iff some reachable `(s_A,s_B)` enables a message to the right in `A` and a
/// message to the left in `B` at the same time.
pub fn half_duplex_check(a: &Iots, b: &Iots) -> Result<Verdict> {
    let profile = async_composable(a, b)?;
    let g = sync_product(a, b)?;
    for id in 0..g.len() {
        let s = g.state(id);
        let to_right = first_enabled(a, s.left, &profile.out_ab);
        let to_left = first_enabled(b, s.right, &profile.out_ba);
        if let (Some(x), Some(y)) = (to_right, to_left) {
            return Ok(Verdict::fails(
                Witness {
                    location: g.label(id),
                    actions: vec![x.clone(), y.clone()],
                    trace: g.trace_to(id),
                },
                vec![Citation::LemCrucial],
            ));
        }
    }
    Ok(Verdict::holds(vec![Citation::LemCrucial]))
}

/// Reachable states of `A ⊗ B` without outgoing transitions.
pub fn sync_deadlocks(a: &Iots, b: &Iots) -> Result<DeadlockReport> {
    let g = sync_product(a, b)?;
    Ok(DeadlockReport {
        deadlocked: g
            .deadlocks()
            .into_iter()
            .map(|id| DeadlockEntry {
                location: g.label(id),
                trace: g.trace_to(id),
            })
            .collect(),
    })
}

/// Every reachable state of the chosen criterion product has a move whose
/// label is not a message the component would have to receive from its
/// partner (`in_A ∩ out_B` on the left, `in_B ∩ out_A` on the right).
pub fn autonomous_df(a: &Iots, b: &Iots, side: Side) -> Result<Verdict> {
    let profile = async_composable(a, b)?;
    let (g, excluded) = match side {
        Side::Left => (criterion_product_left(a, b)?, &profile.out_ba),
        Side::Right => (criterion_product_right(a, b)?, &profile.out_ab),
    };
    for id in 0..g.len() {
        if !g.edges(id).iter().any(|(x, _)| !excluded.contains(x)) {
            return Ok(Verdict::fails(
                Witness {
                    location: g.label(id),
                    actions: g.edges(id).iter().map(|(x, _)| x.clone()).collect(),
                    trace: g.trace_to(id),
                },
                vec![Citation::DefAutonomousDf],
            ));
        }
    }
    Ok(Verdict::holds(vec![Citation::DefAutonomousDf]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RawIots;

    fn set(names: &[&str]) -> ActionSet {
        names.iter().map(|n| n.parse().unwrap()).collect()
    }

    fn user() -> Iots {
        RawIots::new("USER")
            .states(["0", "1"])
            .initial("0")
            .inputs(["ready", "fail"])
            .internals(["use"])
            .transition("0", "ready", "1")
            .transition("1", "use", "0")
            .transition("0", "fail", "0")
            .build()
            .unwrap()
    }

    #[test]
    fn closure_over_internal_use() {
        let c = closure(&user(), "1", &set(&["use"])).unwrap();
        assert_eq!(c.members.len(), 2);
        assert!(c.contains("0") && c.contains("1"));
    }

    #[test]
    fn closure_with_no_labels_is_origin() {
        let c = closure(&user(), "1", &ActionSet::new()).unwrap();
        assert_eq!(c.members, vec![c.origin.clone()]);
    }

    #[test]
    fn closure_unknown_state() {
        assert_eq!(
            closure(&user(), "7", &ActionSet::new()).unwrap_err(),
            Error::UnknownState("7".into())
        );
    }

    #[test]
    fn separation_without_internals_coincide() {
        let x = RawIots::new("X")
            .states(["0", "1"])
            .initial("0")
            .inputs(["i"])
            .outputs(["o"])
            .transition("0", "o", "1")
            .transition("1", "i", "0")
            .build()
            .unwrap();
        assert_eq!(io_separated(&x).status, obs_io_separated(&x).status);
        assert!(io_separated(&x).is_holds());
    }

    #[test]
    fn unreachable_mixed_state_is_ignored() {
        let x = RawIots::new("X")
            .states(["0", "9"])
            .initial("0")
            .inputs(["i"])
            .outputs(["o"])
            .transition("9", "o", "9")
            .transition("9", "i", "9")
            .build()
            .unwrap();
        assert!(io_separated(&x).is_holds());
    }
}
