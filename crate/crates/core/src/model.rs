//! I/O-transition systems, their alphabets, and the output-renaming construction.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Conflict, Error, Result, Violation};

/// Marker appended to an action name to denote its enqueue variant.
pub const DECORATION: char = '>';

fn is_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Name of an action, optionally decorated as an enqueue action (`ready>`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionName {
    name: Arc<str>,
    decorated: bool,
}

impl ActionName {
    /// Creates an undecorated action. Fails unless `name` matches `[A-Za-z0-9_]+`.
    pub fn new(name: &str) -> Result<Self> {
        if !is_token(name) {
            return Err(Error::Invalid {
                component: String::new(),
                violations: vec![Violation::InvalidName(name.to_string())],
            });
        }
        Ok(ActionName {
            name: Arc::from(name),
            decorated: false,
        })
    }

    pub fn base(&self) -> &str {
        &self.name
    }

    pub fn is_decorated(&self) -> bool {
        self.decorated
    }

    pub fn decorate(&self) -> ActionName {
        ActionName {
            name: self.name.clone(),
            decorated: true,
        }
    }

    pub fn undecorate(&self) -> ActionName {
        ActionName {
            name: self.name.clone(),
            decorated: false,
        }
    }
}

impl FromStr for ActionName {
    type Err = Error;

    /// Parses `name` or `name>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.strip_suffix(DECORATION) {
            Some(base) => ActionName::new(base).map(|a| a.decorate()),
            None => ActionName::new(s),
        }
    }
}

impl fmt::Display for ActionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.decorated {
            write!(f, "{}{}", self.name, DECORATION)
        } else {
            f.write_str(&self.name)
        }
    }
}

impl fmt::Debug for ActionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ActionName {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Opaque state identifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(Arc<str>);

impl StateId {
    pub fn new(name: &str) -> Result<Self> {
        if !is_token(name) {
            return Err(Error::Invalid {
                component: String::new(),
                violations: vec![Violation::InvalidName(name.to_string())],
            });
        }
        Ok(StateId(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ActionKind {
    Input,
    Output,
    Internal,
}

impl ActionKind {
    /// Suffix used in the text format: `?`, `!` or `~`.
    pub fn suffix(self) -> char {
        match self {
            ActionKind::Input => '?',
            ActionKind::Output => '!',
            ActionKind::Internal => '~',
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionKind::Input => "input",
            ActionKind::Output => "output",
            ActionKind::Internal => "internal",
        })
    }
}

pub type ActionSet = BTreeSet<ActionName>;

/// Input, output and internal actions of a component. The three sets are disjoint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    inputs: ActionSet,
    outputs: ActionSet,
    internals: ActionSet,
}

impl Alphabet {
    pub fn new(inputs: ActionSet, outputs: ActionSet, internals: ActionSet) -> Result<Self> {
        let mut overlaps: ActionSet = inputs.intersection(&outputs).cloned().collect();
        overlaps.extend(inputs.intersection(&internals).cloned());
        overlaps.extend(outputs.intersection(&internals).cloned());
        if !overlaps.is_empty() {
            return Err(Error::Invalid {
                component: String::new(),
                violations: overlaps.into_iter().map(Violation::AlphabetOverlap).collect(),
            });
        }
        Ok(Alphabet {
            inputs,
            outputs,
            internals,
        })
    }

    pub fn inputs(&self) -> &ActionSet {
        &self.inputs
    }

    pub fn outputs(&self) -> &ActionSet {
        &self.outputs
    }

    pub fn internals(&self) -> &ActionSet {
        &self.internals
    }

    pub fn kind_of(&self, action: &ActionName) -> Option<ActionKind> {
        if self.inputs.contains(action) {
            Some(ActionKind::Input)
        } else if self.outputs.contains(action) {
            Some(ActionKind::Output)
        } else if self.internals.contains(action) {
            Some(ActionKind::Internal)
        } else {
            None
        }
    }

    pub fn contains(&self, action: &ActionName) -> bool {
        self.kind_of(action).is_some()
    }

    /// All actions, `act = in ∪ out ∪ int`.
    pub fn all(&self) -> ActionSet {
        self.inputs
            .iter()
            .chain(&self.outputs)
            .chain(&self.internals)
            .cloned()
            .collect()
    }
}

/// Unvalidated component description. Feed it to [`validate`].
#[derive(Debug, Clone, Default)]
pub struct RawIots {
    pub name: String,
    pub states: Vec<String>,
    pub initial: Option<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub internals: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
}

impl RawIots {
    pub fn new(name: &str) -> Self {
        RawIots {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn states<I, S>(mut self, states: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states.extend(states.into_iter().map(Into::into));
        self
    }

    pub fn initial(mut self, state: &str) -> Self {
        self.initial = Some(state.to_string());
        self
    }

    pub fn inputs<I, S>(mut self, actions: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.inputs.extend(actions.into_iter().map(Into::into));
        self
    }

    pub fn outputs<I, S>(mut self, actions: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.outputs.extend(actions.into_iter().map(Into::into));
        self
    }

    pub fn internals<I, S>(mut self, actions: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.internals.extend(actions.into_iter().map(Into::into));
        self
    }

    pub fn transition(mut self, source: &str, action: &str, target: &str) -> Self {
        self.transitions
            .push((source.to_string(), action.to_string(), target.to_string()));
        self
    }

    /// Shorthand for [`validate`].
    pub fn build(&self) -> Result<Iots> {
        validate(self)
    }
}

/// A finite I/O-transition system.
///
/// States are kept in sorted order and addressed by index; successor lists are
/// sorted by `(action, target)`. Duplicate transitions collapse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iots {
    name: String,
    states: Vec<StateId>,
    initial: usize,
    alphabet: Alphabet,
    succ: Vec<Vec<(ActionName, usize)>>,
}

/// Checks a raw description and builds the component. All violations are
/// reported together.
pub fn validate(raw: &RawIots) -> Result<Iots> {
    let mut violations = Vec::new();

    let mut parse_set = |names: &[String]| -> ActionSet {
        let mut set = ActionSet::new();
        for n in names {
            match n.parse::<ActionName>() {
                Ok(a) => {
                    set.insert(a);
                }
                Err(_) => violations.push(Violation::InvalidName(n.clone())),
            }
        }
        set
    };
    let inputs = parse_set(&raw.inputs);
    let outputs = parse_set(&raw.outputs);
    let internals = parse_set(&raw.internals);

    let alphabet = match Alphabet::new(inputs.clone(), outputs.clone(), internals.clone()) {
        Ok(a) => a,
        Err(Error::Invalid { violations: v, .. }) => {
            violations.extend(v);
            // keep going with a first-wins alphabet to collect further violations
            let outputs: ActionSet = outputs.difference(&inputs).cloned().collect();
            let internals: ActionSet = internals
                .iter()
                .filter(|a| !inputs.contains(*a) && !outputs.contains(*a))
                .cloned()
                .collect();
            Alphabet {
                inputs,
                outputs,
                internals,
            }
        }
        Err(e) => return Err(e),
    };

    let mut states = BTreeSet::new();
    for s in &raw.states {
        match StateId::new(s) {
            Ok(id) => {
                states.insert(id);
            }
            Err(_) => violations.push(Violation::InvalidName(s.clone())),
        }
    }
    let states: Vec<StateId> = states.into_iter().collect();
    let index = |s: &str| states.binary_search_by(|p| p.as_str().cmp(s)).ok();

    let initial = match &raw.initial {
        None => {
            violations.push(Violation::MissingInitial);
            None
        }
        Some(s) => {
            let i = index(s);
            if i.is_none() {
                violations.push(Violation::UnknownState(s.clone()));
            }
            i
        }
    };

    let mut edges = BTreeSet::new();
    for (src, act, tgt) in &raw.transitions {
        let action = match act.parse::<ActionName>() {
            Ok(a) => a,
            Err(_) => {
                violations.push(Violation::InvalidName(act.clone()));
                continue;
            }
        };
        if !alphabet.contains(&action) {
            violations.push(Violation::UnknownAction(action.clone()));
        }
        let (Some(s), Some(t)) = (index(src), index(tgt)) else {
            for st in [src, tgt] {
                if index(st).is_none() {
                    violations.push(Violation::UnknownState(st.clone()));
                }
            }
            continue;
        };
        edges.insert((s, action, t));
    }

    if !violations.is_empty() {
        violations.dedup();
        return Err(Error::Invalid {
            component: raw.name.clone(),
            violations,
        });
    }

    let mut succ = vec![Vec::new(); states.len()];
    for (s, a, t) in edges {
        succ[s].push((a, t));
    }
    for list in &mut succ {
        list.sort();
    }
    Ok(Iots {
        name: raw.name.clone(),
        states,
        initial: initial.expect("checked above"),
        alphabet,
        succ,
    })
}

impl Iots {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, index: usize) -> &StateId {
        &self.states[index]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn initial_state(&self) -> &StateId {
        &self.states[self.initial]
    }

    /// Outgoing transitions of state `index`, sorted by `(action, target)`.
    pub fn successors(&self, index: usize) -> &[(ActionName, usize)] {
        &self.succ[index]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&StateId, &ActionName, &StateId)> + '_ {
        self.succ.iter().enumerate().flat_map(move |(s, list)| {
            list.iter()
                .map(move |(a, t)| (&self.states[s], a, &self.states[*t]))
        })
    }

    pub fn transition_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Whether some transition from `index` is labeled with an action in `set`.
    pub fn enables_any(&self, index: usize, set: &ActionSet) -> bool {
        self.succ[index].iter().any(|(a, _)| set.contains(a))
    }

    pub fn enables(&self, index: usize, action: &ActionName) -> bool {
        self.succ[index].iter().any(|(a, _)| a == action)
    }

    /// Reachable states in breadth-first order.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for (_, t) in &self.succ[s] {
                if !seen[*t] {
                    seen[*t] = true;
                    order.push(*t);
                }
            }
        }
        order
    }

    /// Shortest trace from the initial state to `target`, if reachable.
    pub fn trace_to(&self, target: usize) -> Option<Vec<ActionName>> {
        let mut parent: Vec<Option<(usize, ActionName)>> = vec![None; self.states.len()];
        let mut seen = vec![false; self.states.len()];
        seen[self.initial] = true;
        let mut queue = std::collections::VecDeque::from([self.initial]);
        while let Some(s) = queue.pop_front() {
            if s == target {
                let mut trace = Vec::new();
                let mut cur = s;
                while let Some((p, a)) = &parent[cur] {
                    trace.push(a.clone());
                    cur = *p;
                }
                trace.reverse();
                return Some(trace);
            }
            for (a, t) in &self.succ[s] {
                if !seen[*t] {
                    seen[*t] = true;
                    parent[*t] = Some((s, a.clone()));
                    queue.push_back(*t);
                }
            }
        }
        None
    }

    /// Converts back into a raw description (used by the text emitter).
    pub fn to_raw(&self) -> RawIots {
        RawIots {
            name: self.name.clone(),
            states: self.states.iter().map(|s| s.to_string()).collect(),
            initial: Some(self.initial_state().to_string()),
            inputs: self.alphabet.inputs.iter().map(|a| a.to_string()).collect(),
            outputs: self.alphabet.outputs.iter().map(|a| a.to_string()).collect(),
            internals: self.alphabet.internals.iter().map(|a| a.to_string()).collect(),
            transitions: self
                .transitions()
                .map(|(s, a, t)| (s.to_string(), a.to_string(), t.to_string()))
                .collect(),
        }
    }
}

/// How two composable components share their actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedProfile {
    pub shared: ActionSet,
    /// `out_A ∩ in_B`: messages from left to right.
    pub out_ab: ActionSet,
    /// `out_B ∩ in_A`: messages from right to left.
    pub out_ba: ActionSet,
    pub free_a: ActionSet,
    pub free_b: ActionSet,
}

impl SharedProfile {
    /// Profile of the pair with the roles of left and right swapped.
    pub fn mirrored(&self) -> SharedProfile {
        SharedProfile {
            shared: self.shared.clone(),
            out_ab: self.out_ba.clone(),
            out_ba: self.out_ab.clone(),
            free_a: self.free_b.clone(),
            free_b: self.free_a.clone(),
        }
    }
}

/// Syntactic composability: actions may only overlap on complementary types.
pub fn composable(a: &Iots, b: &Iots) -> Result<SharedProfile> {
    let (al, bl) = (a.alphabet(), b.alphabet());
    let act_a = al.all();
    let act_b = bl.all();
    let mut conflicts = Vec::new();
    for x in act_a.intersection(&act_b) {
        let (ka, kb) = (al.kind_of(x).unwrap(), bl.kind_of(x).unwrap());
        let ok = matches!(
            (ka, kb),
            (ActionKind::Output, ActionKind::Input)
                | (ActionKind::Input, ActionKind::Output)
        );
        if !ok {
            conflicts.push(Conflict {
                action: x.clone(),
                left: ka,
                right: kb,
            });
        }
    }
    if !conflicts.is_empty() {
        return Err(Error::NotComposable(conflicts));
    }
    let out_ab: ActionSet = al.outputs().intersection(bl.inputs()).cloned().collect();
    let out_ba: ActionSet = bl.outputs().intersection(al.inputs()).cloned().collect();
    let shared: ActionSet = out_ab.union(&out_ba).cloned().collect();
    Ok(SharedProfile {
        free_a: act_a.difference(&shared).cloned().collect(),
        free_b: act_b.difference(&shared).cloned().collect(),
        shared,
        out_ab,
        out_ba,
    })
}

/// Composability plus freshness of the decorated variants of shared actions.
pub fn async_composable(a: &Iots, b: &Iots) -> Result<SharedProfile> {
    let profile = composable(a, b)?;
    let mut clashes: Vec<ActionName> = profile
        .shared
        .iter()
        .map(ActionName::decorate)
        .filter(|d| a.alphabet().contains(d) || b.alphabet().contains(d))
        .collect();
    if !clashes.is_empty() {
        clashes.sort();
        return Err(Error::DecorationClash(clashes));
    }
    Ok(profile)
}

/// Builds `A▷_M`: every transition labeled `a ∈ M` is relabeled `a>`, and the
/// decorated names replace the originals as outputs.
pub fn rename_outputs(a: &Iots, m: &ActionSet) -> Result<Iots> {
    if let Some(x) = m.iter().find(|x| !a.alphabet().outputs().contains(*x)) {
        return Err(Error::NotAnOutput(x.clone()));
    }
    let clashes: Vec<ActionName> = m
        .iter()
        .map(ActionName::decorate)
        .filter(|d| a.alphabet().contains(d))
        .collect();
    if !clashes.is_empty() {
        return Err(Error::DecorationClash(clashes));
    }
    let rename = |x: &ActionName| if m.contains(x) { x.decorate() } else { x.clone() };
    let alphabet = Alphabet {
        inputs: a.alphabet.inputs.clone(),
        outputs: a.alphabet.outputs.iter().map(rename).collect(),
        internals: a.alphabet.internals.clone(),
    };
    let succ = a
        .succ
        .iter()
        .map(|list| {
            let mut l: Vec<_> = list.iter().map(|(x, t)| (rename(x), *t)).collect();
            l.sort();
            l
        })
        .collect();
    Ok(Iots {
        name: format!("{}>", a.name),
        states: a.states.clone(),
        initial: a.initial,
        alphabet,
        succ,
    })
}

/// Alphabet of the synchronous product: shared actions become internal.
pub(crate) fn product_alphabet(a: &Alphabet, b: &Alphabet, shared: &ActionSet) -> Alphabet {
    let minus = |x: &ActionSet, y: &ActionSet| -> ActionSet {
        x.union(y).filter(|v| !shared.contains(*v)).cloned().collect()
    };
    let mut internals: ActionSet = a.internals.union(&b.internals).cloned().collect();
    internals.extend(shared.iter().cloned());
    Alphabet {
        inputs: minus(&a.inputs, &b.inputs),
        outputs: minus(&a.outputs, &b.outputs),
        internals,
    }
}
