//! Three-valued verdicts with witnesses and theorem citations.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::model::ActionName;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    /// No violation found, but the exploration at this queue bound was not exhaustive.
    InconclusiveAtBound(usize),
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Holds => "Holds",
            Status::Fails => "Fails",
            Status::InconclusiveAtBound(_) => "InconclusiveAtBound",
        }
    }
}

/// Tag naming the result a verdict or conclusion relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Citation {
    DefStrongSync,
    DefWeakSync,
    DefAsyncCompat,
    DefIoSeparated,
    DefObsIoSeparated,
    DefDeadlock,
    DefAutonomousDf,
    LemCrucial,
    LemEmptyQueue,
    CorSynchIffAsynch,
    ThmAsynch2Synch,
    ThmWac,
    ThmCompleteness,
    ThmDfHalfDuplex,
    ThmDfAutonomous,
    BoundedExploration,
    ExhaustiveExploration,
}

impl Citation {
    pub fn tag(self) -> &'static str {
        match self {
            Citation::DefStrongSync => "Def-StrongSync",
            Citation::DefWeakSync => "Def-WeakSync",
            Citation::DefAsyncCompat => "Def-AsyncCompat",
            Citation::DefIoSeparated => "Def-IOSeparated",
            Citation::DefObsIoSeparated => "Def-ObsIOSeparated",
            Citation::DefDeadlock => "Def-Deadlock",
            Citation::DefAutonomousDf => "Def-AutonomousDF",
            Citation::LemCrucial => "Lem-Crucial",
            Citation::LemEmptyQueue => "Lem-EmptyQueue",
            Citation::CorSynchIffAsynch => "Cor-SynchIFFAsynch",
            Citation::ThmAsynch2Synch => "Thm-Asynch2Synch",
            Citation::ThmWac => "Thm-WAC",
            Citation::ThmCompleteness => "Thm-Completeness",
            Citation::ThmDfHalfDuplex => "Thm-DF-HalfDuplex",
            Citation::ThmDfAutonomous => "Thm-DF-Autonomous",
            Citation::BoundedExploration => "Bounded-Exploration",
            Citation::ExhaustiveExploration => "Exhaustive-Exploration",
        }
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Citation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// Where a property breaks: the location (product state or config), the
/// offending actions there, and a shortest trace reaching it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub location: String,
    pub actions: Vec<ActionName>,
    pub trace: Vec<ActionName>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub justification: Vec<Citation>,
    /// For checks over a bounded exploration: whether the horizon was empty.
    pub exhaustive: Option<bool>,
    /// Free-form per-item findings (e.g. which states were or were not witnessed).
    pub details: Vec<String>,
}

impl Verdict {
    pub fn holds(justification: Vec<Citation>) -> Self {
        Verdict {
            status: Status::Holds,
            witness: None,
            justification,
            exhaustive: None,
            details: Vec::new(),
        }
    }

    pub fn fails(witness: Witness, justification: Vec<Citation>) -> Self {
        Verdict {
            status: Status::Fails,
            witness: Some(witness),
            justification,
            exhaustive: None,
            details: Vec::new(),
        }
    }

    pub fn inconclusive(bound: usize, justification: Vec<Citation>) -> Self {
        Verdict {
            status: Status::InconclusiveAtBound(bound),
            witness: None,
            justification,
            exhaustive: Some(false),
            details: Vec::new(),
        }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self.status, Status::InconclusiveAtBound(_))
    }

    pub fn location(&self) -> Option<&str> {
        self.witness.as_ref().map(|w| w.location.as_str())
    }

    pub(crate) fn with_exhaustive(mut self, exhaustive: bool) -> Self {
        self.exhaustive = Some(exhaustive);
        self
    }

    pub(crate) fn with_details(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("status", self.status.name())?;
        if let Status::InconclusiveAtBound(k) = self.status {
            m.serialize_entry("bound", &k)?;
        }
        if let Some(w) = &self.witness {
            m.serialize_entry("witness", w)?;
        }
        m.serialize_entry("justification", &self.justification)?;
        if let Some(e) = self.exhaustive {
            m.serialize_entry("exhaustive", &e)?;
        }
        if !self.details.is_empty() {
            m.serialize_entry("details", &self.details)?;
        }
        m.end()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            Status::InconclusiveAtBound(k) => write!(f, "InconclusiveAtBound({k})")?,
            s => f.write_str(s.name())?,
        }
        if let Some(w) = &self.witness {
            write!(f, " at {}", w.location)?;
            if !w.actions.is_empty() {
                let acts: Vec<String> = w.actions.iter().map(|a| a.to_string()).collect();
                write!(f, " on {}", acts.join(", "))?;
            }
            let trace: Vec<String> = w.trace.iter().map(|a| a.to_string()).collect();
            write!(f, " via [{}]", trace.join(" "))?;
        }
        for d in &self.details {
            write!(f, "\n    {d}")?;
        }
        Ok(())
    }
}

/// One deadlocked node with a shortest trace to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeadlockEntry {
    pub location: String,
    pub trace: Vec<ActionName>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DeadlockReport {
    pub deadlocked: Vec<DeadlockEntry>,
}

impl DeadlockReport {
    pub fn is_empty(&self) -> bool {
        self.deadlocked.is_empty()
    }

    pub fn contains(&self, location: &str) -> bool {
        self.deadlocked.iter().any(|d| d.location == location)
    }
}

/// Deadlocks of a bounded asynchronous exploration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedDeadlockReport {
    #[serde(flatten)]
    pub report: DeadlockReport,
    pub bound: usize,
    /// True when the explored graph is the full reachable state space.
    pub exhaustive: bool,
}

impl BoundedDeadlockReport {
    /// `Fails` on a confirmed deadlock, `Holds` when exhaustive and deadlock-free,
    /// inconclusive otherwise.
    pub fn verdict(&self) -> Verdict {
        match self.report.deadlocked.first() {
            Some(d) => Verdict::fails(
                Witness {
                    location: d.location.clone(),
                    actions: Vec::new(),
                    trace: d.trace.clone(),
                },
                vec![Citation::DefDeadlock, Citation::BoundedExploration],
            )
            .with_exhaustive(self.exhaustive),
            None if self.exhaustive => {
                Verdict::holds(vec![Citation::DefDeadlock, Citation::ExhaustiveExploration])
                    .with_exhaustive(true)
            }
            None => Verdict::inconclusive(self.bound, vec![Citation::BoundedExploration]),
        }
    }
}
