//! The `.iots` text format, DOT export and JSON reports.
//!
//! ```text
//! iots MAKER
//! inputs material
//! outputs ready fail
//! internals make
//! init 0
//! 0 material? 1
//! 1 make~ 2
//! 2 ready! 0
//! ```
//!
//! Class keywords may share a line (`inputs a outputs b`). An optional
//! `states` line declares states that appear in no transition. `#` starts a
//! comment.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde_json::json;

use crate::compose::{AsyncGraph, SyncGraph};
use crate::error::{Error, ParseError, Result};
use crate::model::{ActionKind, Iots, RawIots};
use crate::pipeline::Report;

fn syntax(line: usize, message: impl Into<String>) -> Error {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
    .into()
}

fn class_keyword(word: &str) -> Option<ActionKind> {
    match word {
        "inputs" => Some(ActionKind::Input),
        "outputs" => Some(ActionKind::Output),
        "internals" => Some(ActionKind::Internal),
        _ => None,
    }
}

fn suffix_kind(c: char) -> Option<ActionKind> {
    match c {
        '?' => Some(ActionKind::Input),
        '!' => Some(ActionKind::Output),
        '~' => Some(ActionKind::Internal),
        _ => None,
    }
}

/// Parses one component.
pub fn parse_iots(text: &str) -> Result<Iots> {
    let mut raw = RawIots::default();
    let mut named = false;
    let mut declared: HashMap<String, ActionKind> = HashMap::new();
    let mut used: Vec<(usize, String, ActionKind)> = Vec::new();
    let mut states: Vec<String> = Vec::new();

    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let content = full.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some(first) = words.first() else {
            continue;
        };
        if !named {
            if *first != "iots" || words.len() != 2 {
                return Err(syntax(line, "expected `iots <name>` header"));
            }
            raw.name = words[1].to_string();
            named = true;
            continue;
        }
        if let Some(mut kind) = class_keyword(first) {
            for w in &words[1..] {
                if let Some(k) = class_keyword(w) {
                    kind = k;
                    continue;
                }
                declared.insert(w.to_string(), kind);
                match kind {
                    ActionKind::Input => raw.inputs.push(w.to_string()),
                    ActionKind::Output => raw.outputs.push(w.to_string()),
                    ActionKind::Internal => raw.internals.push(w.to_string()),
                }
            }
            continue;
        }
        match *first {
            "iots" => return Err(syntax(line, "duplicate `iots` header")),
            "init" => {
                if words.len() != 2 {
                    return Err(syntax(line, "expected `init <state>`"));
                }
                if raw.initial.is_some() {
                    return Err(syntax(line, "duplicate `init` declaration"));
                }
                raw.initial = Some(words[1].to_string());
                states.push(words[1].to_string());
            }
            "states" => states.extend(words[1..].iter().map(|s| s.to_string())),
            _ => {
                let [src, act, tgt] = words[..] else {
                    return Err(syntax(line, "expected `<state> <action><?|!|~> <state>`"));
                };
                let kind = act.chars().last().and_then(suffix_kind);
                let (Some(kind), true) = (kind, act.len() > 1) else {
                    return Err(syntax(line, format!("`{act}` lacks a kind suffix (?, ! or ~)")));
                };
                let name = &act[..act.len() - 1];
                used.push((line, name.to_string(), kind));
                raw.transitions
                    .push((src.to_string(), name.to_string(), tgt.to_string()));
                states.push(src.to_string());
                states.push(tgt.to_string());
            }
        }
    }
    if !named {
        return Err(syntax(1, "missing `iots <name>` header"));
    }
    for (line, action, kind) in used {
        if let Some(d) = declared.get(&action) {
            if *d != kind {
                return Err(ParseError::KindMismatch {
                    line,
                    action,
                    declared: *d,
                    used: kind,
                }
                .into());
            }
        }
    }
    let mut seen = BTreeSet::new();
    states.retain(|s| seen.insert(s.clone()));
    raw.states = states;
    raw.build()
}

/// Text form of a component; `parse_iots(&emit_iots(x)) == x`.
pub fn emit_iots(a: &Iots) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "iots {}", a.name());
    let al = a.alphabet();
    for (kw, set) in [
        ("inputs", al.inputs()),
        ("outputs", al.outputs()),
        ("internals", al.internals()),
    ] {
        if !set.is_empty() {
            let names: Vec<String> = set.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{kw} {}", names.join(" "));
        }
    }
    let _ = writeln!(out, "init {}", a.initial_state());
    let mut mentioned: BTreeSet<&str> = BTreeSet::from([a.initial_state().as_str()]);
    for (s, _, t) in a.transitions() {
        mentioned.insert(s.as_str());
        mentioned.insert(t.as_str());
    }
    let isolated: Vec<&str> = a
        .states()
        .iter()
        .map(|s| s.as_str())
        .filter(|s| !mentioned.contains(s))
        .collect();
    if !isolated.is_empty() {
        let _ = writeln!(out, "states {}", isolated.join(" "));
    }
    for (s, x, t) in a.transitions() {
        let kind = al.kind_of(x).expect("validated label");
        let _ = writeln!(out, "{s} {x}{} {t}", kind.suffix());
    }
    out
}

struct DotNode {
    label: String,
    initial: bool,
    deadlock: bool,
    horizon: bool,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn render_dot(title: &str, mut nodes: Vec<DotNode>, mut edges: Vec<(String, String, String)>) -> String {
    nodes.sort_by(|x, y| x.label.cmp(&y.label));
    edges.sort();
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(title));
    out.push_str("  rankdir=LR;\n  node [shape=box];\n  __start [shape=point];\n");
    for n in &nodes {
        let mut attrs = Vec::new();
        if n.deadlock {
            attrs.push("color=red, peripheries=2");
        }
        if n.horizon {
            attrs.push("style=dashed");
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {};", quote(&n.label));
        } else {
            let _ = writeln!(out, "  {} [{}];", quote(&n.label), attrs.join(", "));
        }
    }
    for n in nodes.iter().filter(|n| n.initial) {
        let _ = writeln!(out, "  __start -> {};", quote(&n.label));
    }
    for (s, x, t) in &edges {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(s), quote(t), quote(x));
    }
    out.push_str("}\n");
    out
}

/// Graphs that can be exported to DOT.
pub trait ToDot {
    fn to_dot(&self) -> String;
}

impl ToDot for SyncGraph {
    fn to_dot(&self) -> String {
        let nodes = (0..self.len())
            .map(|id| DotNode {
                label: self.label(id),
                initial: id == 0,
                deadlock: self.edges(id).is_empty(),
                horizon: false,
            })
            .collect();
        let edges = (0..self.len())
            .flat_map(|id| {
                self.edges(id)
                    .iter()
                    .map(move |(x, t)| (self.label(id), x.to_string(), self.label(*t)))
            })
            .collect();
        render_dot(&format!("{} x {}", self.left().name(), self.right().name()), nodes, edges)
    }
}

impl ToDot for AsyncGraph {
    fn to_dot(&self) -> String {
        let nodes = (0..self.len())
            .map(|id| DotNode {
                label: self.label(id),
                initial: id == 0,
                deadlock: self.edges(id).is_empty() && !self.in_horizon(id),
                horizon: self.in_horizon(id),
            })
            .collect();
        let edges = (0..self.len())
            .flat_map(|id| {
                self.edges(id)
                    .iter()
                    .map(move |(x, t)| (self.label(id), x.to_string(), self.label(*t)))
            })
            .collect();
        let title = format!(
            "{} ||| {} (bound {})",
            self.left().name(),
            self.right().name(),
            self.bound()
        );
        render_dot(&title, nodes, edges)
    }
}

/// Deterministic DOT text: nodes and edges sorted by their rendered labels.
pub fn emit_dot<G: ToDot + ?Sized>(g: &G) -> String {
    g.to_dot()
}

/// Pretty-printed JSON with a fixed field order and a trailing newline.
pub fn emit_report_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

/// JSON document describing an error.
pub fn emit_error_json(e: &Error) -> String {
    let doc = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
    let mut s = serde_json::to_string_pretty(&doc).expect("error serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::{async_explore, sync_product};
    use crate::fixtures;

    #[test]
    fn output_transition_parsed() {
        let m = fixtures::load("maker").unwrap();
        let two = m.state_index("2").unwrap();
        let ready = "ready".parse().unwrap();
        assert!(m.enables(two, &ready));
        assert_eq!(m.alphabet().kind_of(&ready), Some(ActionKind::Output));
    }

    #[test]
    fn header_and_init_only() {
        let x = parse_iots("iots X\ninit 0\n").unwrap();
        assert_eq!(x.state_count(), 1);
        assert_eq!(x.transition_count(), 0);
    }

    #[test]
    fn kind_mismatch() {
        let text = fixtures::source("maker").unwrap().replace("2 ready! 0", "2 ready? 0");
        let err = parse_iots(&text).unwrap_err();
        assert_eq!(err.kind(), "KindMismatch");
        assert!(matches!(err, Error::Parse(ParseError::KindMismatch { line: 9, .. })));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "init 0", "iots X\n0 a 1", "iots X\ninit 0 1", "iots X\n0 a? 1 2"] {
            assert_eq!(parse_iots(bad).unwrap_err().kind(), "SyntaxError", "{bad:?}");
        }
    }

    #[test]
    fn classes_on_one_line() {
        let x = parse_iots("iots X inputs\n").unwrap_err();
        assert_eq!(x.kind(), "SyntaxError");
        let y = parse_iots("iots Y\ninputs a outputs b internals c\ninit 0\n").unwrap();
        assert_eq!(y.alphabet().all().len(), 3);
    }

    #[test]
    fn round_trip_fixtures() {
        for n in fixtures::names() {
            let a = fixtures::load(n).unwrap();
            assert_eq!(parse_iots(&emit_iots(&a)).unwrap(), a, "{n}");
        }
    }

    #[test]
    fn isolated_state_round_trips() {
        let a = parse_iots("iots X\ninit 0\nstates 5\n").unwrap();
        assert_eq!(a.state_count(), 2);
        assert_eq!(parse_iots(&emit_iots(&a)).unwrap(), a);
    }

    #[test]
    fn dot_contains_critical_state() {
        let m = fixtures::load("maker").unwrap();
        let u = fixtures::load("user").unwrap();
        let dot = emit_dot(&sync_product(&m, &u).unwrap());
        assert!(dot.contains("\"(2,1)\""));
        assert!(dot.contains("__start -> \"(0,0)\""));
    }

    #[test]
    fn dot_of_empty_graph() {
        let x = parse_iots("iots X\ninit 0\n").unwrap();
        let y = parse_iots("iots Y\ninit 0\n").unwrap();
        let dot = emit_dot(&sync_product(&x, &y).unwrap());
        assert_eq!(dot.matches(" -> ").count(), 1);
    }

    #[test]
    fn dot_shows_loaded_queues() {
        let a = fixtures::load("fig4_a").unwrap();
        let b = fixtures::load("fig4_b").unwrap();
        let dot = emit_dot(&async_explore(&a, &b, 1).unwrap());
        assert!(dot.contains("\"((1,a),(1,b))\""));
        assert!(dot.contains("style=dashed"));
    }
}
