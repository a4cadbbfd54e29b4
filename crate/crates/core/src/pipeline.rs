//! End-to-end decision procedure: half-duplex test, synchronous checks, the
//! WAC and completeness criteria, bounded exploration as a last resort, and
//! the deadlock theorems.

use std::fmt;

use serde::Serialize;

use crate::analysis::{
    autonomous_df, half_duplex_check, io_separated, obs_io_separated, sync_deadlocks, Side,
};
use crate::compat::{
    async_compat_on, async_deadlocks_on, completeness_x, strong_sync, wac_left, wac_right,
    weak_sync, Mode,
};
use crate::compose::async_explore;
use crate::error::{Error, Result};
use crate::model::{async_composable, Iots};
use crate::verdict::{BoundedDeadlockReport, Citation, DeadlockReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    StrongAsyncCompatible,
    WeakAsyncCompatible,
    NotWeakAsyncCompatible,
    NotStrongAsyncCompatible,
    Unknown,
}

impl Conclusion {
    pub fn is_positive(self) -> bool {
        matches!(
            self,
            Conclusion::StrongAsyncCompatible | Conclusion::WeakAsyncCompatible
        )
    }

    pub fn is_negative(self) -> bool {
        matches!(
            self,
            Conclusion::NotStrongAsyncCompatible | Conclusion::NotWeakAsyncCompatible
        )
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeadlockConclusion {
    AsyncDeadlockFree,
    AsyncDeadlockFound,
    Unknown,
}

impl fmt::Display for DeadlockConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Everything `decide` computed, in a stable serialization order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub left: String,
    pub right: String,
    pub bound: usize,
    pub mode: Mode,
    pub io_separated_left: Verdict,
    pub io_separated_right: Verdict,
    pub obs_io_separated_left: Verdict,
    pub obs_io_separated_right: Verdict,
    pub half_duplex: Verdict,
    pub strong_sync: Verdict,
    pub weak_sync: Verdict,
    pub wac_left: Verdict,
    pub wac_right: Verdict,
    pub completeness: Verdict,
    /// Present only when bounded exploration ran.
    pub async_strong: Option<Verdict>,
    pub async_weak: Option<Verdict>,
    pub sync_deadlocks: DeadlockReport,
    pub autonomous_df_left: Verdict,
    pub autonomous_df_right: Verdict,
    pub async_deadlocks: Option<BoundedDeadlockReport>,
    pub conclusion: Conclusion,
    pub justification: Vec<Citation>,
    /// What the WAC and completeness criteria alone establish (weak mode).
    pub criterion_conclusion: Conclusion,
    pub deadlock_conclusion: DeadlockConclusion,
    pub deadlock_justification: Vec<Citation>,
}

fn sync_tag(mode: Mode) -> Citation {
    match mode {
        Mode::Strong => Citation::DefStrongSync,
        Mode::Weak => Citation::DefWeakSync,
    }
}

fn bounded_conclusion(v: &Verdict, yes: Conclusion, no: Conclusion) -> Option<(Conclusion, Vec<Citation>)> {
    if v.is_fails() {
        Some((no, vec![Citation::DefAsyncCompat, Citation::BoundedExploration]))
    } else if v.is_holds() {
        Some((yes, vec![Citation::DefAsyncCompat, Citation::ExhaustiveExploration]))
    } else {
        None
    }
}

/// The WAC / completeness path on its own.
pub fn criterion_path(wac_l: &Verdict, wac_r: &Verdict, completeness: &Verdict) -> (Conclusion, Vec<Citation>) {
    if wac_l.is_holds() && wac_r.is_holds() {
        (Conclusion::WeakAsyncCompatible, vec![Citation::ThmWac])
    } else if completeness.is_holds() {
        (
            Conclusion::NotWeakAsyncCompatible,
            vec![Citation::ThmWac, Citation::ThmCompleteness],
        )
    } else {
        (Conclusion::Unknown, Vec::new())
    }
}

/// Compatibility decision table over the verdicts recorded in `r`.
pub fn conclude(r: &Report) -> (Conclusion, Vec<Citation>) {
    let (yes, no, sync) = match r.mode {
        Mode::Strong => (
            Conclusion::StrongAsyncCompatible,
            Conclusion::NotStrongAsyncCompatible,
            &r.strong_sync,
        ),
        Mode::Weak => (
            Conclusion::WeakAsyncCompatible,
            Conclusion::NotWeakAsyncCompatible,
            &r.weak_sync,
        ),
    };
    if r.half_duplex.is_holds() {
        let chain = vec![Citation::LemCrucial, sync_tag(r.mode), Citation::CorSynchIffAsynch];
        return (if sync.is_holds() { yes } else { no }, chain);
    }
    let bounded = match r.mode {
        Mode::Strong => r.async_strong.as_ref(),
        Mode::Weak => r.async_weak.as_ref(),
    };
    match r.mode {
        Mode::Strong => {
            if r.strong_sync.is_fails() {
                return (no, vec![Citation::DefStrongSync, Citation::ThmAsynch2Synch]);
            }
        }
        Mode::Weak => {
            let (c, chain) = criterion_path(&r.wac_left, &r.wac_right, &r.completeness);
            if c != Conclusion::Unknown {
                return (c, chain);
            }
        }
    }
    bounded
        .and_then(|v| bounded_conclusion(v, yes, no))
        .unwrap_or((Conclusion::Unknown, Vec::new()))
}

/// Weak asynchronous compatibility established by a theorem from recorded verdicts.
fn weak_established(r: &Report) -> bool {
    (r.half_duplex.is_holds() && r.weak_sync.is_holds())
        || (r.wac_left.is_holds() && r.wac_right.is_holds())
}

/// Deadlock decision table over the verdicts recorded in `r`.
pub fn conclude_deadlock(r: &Report) -> (DeadlockConclusion, Vec<Citation>) {
    if weak_established(r) {
        if r.half_duplex.is_holds() {
            let c = if r.sync_deadlocks.is_empty() {
                DeadlockConclusion::AsyncDeadlockFree
            } else {
                DeadlockConclusion::AsyncDeadlockFound
            };
            return (c, vec![Citation::LemCrucial, Citation::ThmDfHalfDuplex]);
        }
        if r.autonomous_df_left.is_holds() || r.autonomous_df_right.is_holds() {
            return (
                DeadlockConclusion::AsyncDeadlockFree,
                vec![Citation::ThmWac, Citation::DefAutonomousDf, Citation::ThmDfAutonomous],
            );
        }
    }
    match &r.async_deadlocks {
        Some(d) if !d.report.is_empty() => (
            DeadlockConclusion::AsyncDeadlockFound,
            vec![Citation::DefDeadlock, Citation::BoundedExploration],
        ),
        Some(d) if d.exhaustive => (
            DeadlockConclusion::AsyncDeadlockFree,
            vec![Citation::DefDeadlock, Citation::ExhaustiveExploration],
        ),
        _ => (DeadlockConclusion::Unknown, Vec::new()),
    }
}

/// Runs every check and concludes. Bounded exploration runs only when no
/// theorem settles a question, or always with `force_bounded`.
pub fn decide(a: &Iots, b: &Iots, k: usize, mode: Mode, force_bounded: bool) -> Result<Report> {
    if k < 1 {
        return Err(Error::BoundTooSmall(k));
    }
    async_composable(a, b)?;
    let mut r = Report {
        left: a.name().to_string(),
        right: b.name().to_string(),
        bound: k,
        mode,
        io_separated_left: io_separated(a),
        io_separated_right: io_separated(b),
        obs_io_separated_left: obs_io_separated(a),
        obs_io_separated_right: obs_io_separated(b),
        half_duplex: half_duplex_check(a, b)?,
        strong_sync: strong_sync(a, b)?,
        weak_sync: weak_sync(a, b)?,
        wac_left: wac_left(a, b)?,
        wac_right: wac_right(a, b)?,
        completeness: completeness_x(a, b, k)?,
        async_strong: None,
        async_weak: None,
        sync_deadlocks: sync_deadlocks(a, b)?,
        autonomous_df_left: autonomous_df(a, b, Side::Left)?,
        autonomous_df_right: autonomous_df(a, b, Side::Right)?,
        async_deadlocks: None,
        conclusion: Conclusion::Unknown,
        justification: Vec::new(),
        criterion_conclusion: Conclusion::Unknown,
        deadlock_conclusion: DeadlockConclusion::Unknown,
        deadlock_justification: Vec::new(),
    };

    let need_compat = force_bounded || conclude(&r).0 == Conclusion::Unknown;
    let need_deadlock = force_bounded || conclude_deadlock(&r).0 == DeadlockConclusion::Unknown;
    if need_compat || need_deadlock {
        let g = async_explore(a, b, k)?;
        if need_compat {
            if force_bounded || mode == Mode::Strong {
                r.async_strong = Some(async_compat_on(&g, Mode::Strong));
            }
            if force_bounded || mode == Mode::Weak {
                r.async_weak = Some(async_compat_on(&g, Mode::Weak));
            }
        }
        if need_deadlock {
            r.async_deadlocks = Some(async_deadlocks_on(&g));
        }
    }

    (r.conclusion, r.justification) = conclude(&r);
    r.criterion_conclusion = criterion_path(&r.wac_left, &r.wac_right, &r.completeness).0;
    (r.deadlock_conclusion, r.deadlock_justification) = conclude_deadlock(&r);
    Ok(r)
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} / {} (bound {}, mode {})", self.left, self.right, self.bound, self.mode)?;
        let rows: [(&str, Option<&Verdict>); 14] = [
            ("io-separated (left)", Some(&self.io_separated_left)),
            ("io-separated (right)", Some(&self.io_separated_right)),
            ("obs-io-separated (left)", Some(&self.obs_io_separated_left)),
            ("obs-io-separated (right)", Some(&self.obs_io_separated_right)),
            ("half-duplex", Some(&self.half_duplex)),
            ("strong sync", Some(&self.strong_sync)),
            ("weak sync", Some(&self.weak_sync)),
            ("wac (left)", Some(&self.wac_left)),
            ("wac (right)", Some(&self.wac_right)),
            ("completeness", Some(&self.completeness)),
            ("async strong", self.async_strong.as_ref()),
            ("async weak", self.async_weak.as_ref()),
            ("autonomous df (left)", Some(&self.autonomous_df_left)),
            ("autonomous df (right)", Some(&self.autonomous_df_right)),
        ];
        for (name, v) in rows {
            if let Some(v) = v {
                writeln!(f, "  {name:<26} {v}")?;
            }
        }
        let dl: Vec<&str> = self
            .sync_deadlocks
            .deadlocked
            .iter()
            .map(|d| d.location.as_str())
            .collect();
        writeln!(f, "  {:<26} [{}]", "sync deadlocks", dl.join(", "))?;
        if let Some(d) = &self.async_deadlocks {
            writeln!(f, "  {:<26} {}", "async deadlock", d.verdict())?;
        }
        let tags = |c: &[Citation]| c.iter().map(|t| t.tag()).collect::<Vec<_>>().join(", ");
        writeln!(f, "conclusion: {} [{}]", self.conclusion, tags(&self.justification))?;
        writeln!(f, "criterion path: {}", self.criterion_conclusion)?;
        write!(
            f,
            "deadlock: {} [{}]",
            self.deadlock_conclusion,
            tags(&self.deadlock_justification)
        )
    }
}
