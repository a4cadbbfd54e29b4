//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::random_pair;
use iots_compat::analysis::{
    autonomous_df, half_duplex_check, io_separated, obs_io_separated, sync_deadlocks, Side,
};
use iots_compat::audit::{both_queues_loaded, check_q, empty_queue_embedding};
use iots_compat::compat::{
    async_compat_bounded, async_compat_on, async_deadlock_bounded, completeness_x, strong_sync,
    sync_violations, wac, wac_left, wac_right, weak_sync, Mode,
};
use iots_compat::compose::{async_explore, sync_product};
use iots_compat::fixtures::{self, load};
use iots_compat::pipeline::{decide, Conclusion, DeadlockConclusion};
use iots_compat::{ActionName, Citation, Iots};

/// Random systems checked by the property criterion.
const SAMPLES: u64 = 500;
/// Seeds are `SEED_BASE..SEED_BASE + SAMPLES`.
const SEED_BASE: u64 = 0x5eed_0000;
/// Queue bounds exercised by the property criterion.
const PROPERTY_BOUNDS: [usize; 3] = [1, 2, 3];
/// Counterexamples tolerated by the property criterion.
const MAX_COUNTEREXAMPLES: usize = 0;
/// Bounds at which the fig7 fixtures must show no asynchronous violation.
const FIG7_BOUNDS: std::ops::RangeInclusive<usize> = 1..=4;
/// Bounds at which the receive-only pair must deadlock initially.
const RECV_BOUNDS: std::ops::RangeInclusive<usize> = 1..=4;
/// Bounds for the deadlock gates of the fig10 and fig11 fixtures.
const GATE_BOUNDS: std::ops::RangeInclusive<usize> = 1..=3;
/// Bound used for the pipeline in the determinism criterion.
const DETERMINISM_BOUND: &str = "2";
/// Wall-clock budget for the full pipeline on one fixture pair.
const MAX_PIPELINE_TIME: Duration = Duration::from_secs(1);

type Check = Result<(), String>;

fn ensure(cond: bool, what: &str) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn pair(a: &str, b: &str) -> (Iots, Iots) {
    (load(a).unwrap(), load(b).unwrap())
}

fn act(n: &str) -> ActionName {
    n.parse().unwrap()
}

fn c1_maker_user() -> Check {
    let (m, u) = pair("maker", "user");
    let s = strong_sync(&m, &u).map_err(|e| e.to_string())?;
    ensure(s.is_fails() && s.location() == Some("(2,1)"), "strong_sync should fail at (2,1)")?;
    ensure(weak_sync(&m, &u).unwrap().is_holds(), "weak_sync should hold")?;
    ensure(half_duplex_check(&m, &u).unwrap().is_holds(), "half-duplex should hold")?;
    let r = decide(&m, &u, 3, Mode::Weak, false).unwrap();
    ensure(r.conclusion == Conclusion::WeakAsyncCompatible, "conclusion")?;
    ensure(r.justification.contains(&Citation::CorSynchIffAsynch), "citation")?;
    ensure(
        obs_io_separated(&m).is_holds() && obs_io_separated(&u).is_holds(),
        "both observationally I/O-separated",
    )
}

fn c2_ma_mb() -> Check {
    let (a, b) = pair("ma", "mb");
    ensure(half_duplex_check(&a, &b).unwrap().location() == Some("(2,2)"), "half-duplex fails at (2,2)")?;
    ensure(weak_sync(&a, &b).unwrap().is_fails(), "weak_sync fails")?;
    ensure(
        sync_violations(&a, &b, Mode::Weak).unwrap().iter().any(|v| v.location == "(2,2)"),
        "(2,2) is a weak violation",
    )?;
    ensure(wac_left(&a, &b).unwrap().is_holds(), "wac_left holds")?;
    ensure(wac_right(&a, &b).unwrap().is_holds(), "wac_right holds")?;
    ensure(sync_deadlocks(&a, &b).unwrap().contains("(2,2)"), "sync deadlock at (2,2)")?;
    ensure(autonomous_df(&a, &b, Side::Left).unwrap().is_holds(), "autonomous df")?;
    let r = decide(&a, &b, 2, Mode::Weak, false).unwrap();
    ensure(r.conclusion == Conclusion::WeakAsyncCompatible, "conclusion")?;
    ensure(r.justification == vec![Citation::ThmWac], "WAC citation")?;
    ensure(r.deadlock_conclusion == DeadlockConclusion::AsyncDeadlockFree, "deadlock conclusion")?;
    ensure(r.deadlock_justification.contains(&Citation::ThmDfAutonomous), "deadlock citation")
}

fn c3_ma_mb_prime() -> Check {
    let (a, b) = pair("ma", "mb_prime");
    let w = wac_left(&a, &b).unwrap();
    ensure(w.location() == Some("(2,0)"), "wac_left fails at (2,0)")?;
    ensure(w.witness.unwrap().actions == vec![act("failA")], "on failA")?;
    let x = completeness_x(&a, &b, 2).unwrap();
    ensure(x.is_holds(), "completeness holds at 2")?;
    ensure(
        x.details.iter().any(|d| d.contains("((2,ε),(0,ε))")),
        "witness ((2,ε),(0,ε))",
    )?;
    let r = decide(&a, &b, 2, Mode::Weak, false).unwrap();
    ensure(r.conclusion == Conclusion::NotWeakAsyncCompatible, "conclusion")?;
    ensure(async_compat_bounded(&a, &b, 2, Mode::Weak).unwrap().is_fails(), "weak violation at K=2")
}

fn c4_fig4() -> Check {
    let (a, b) = pair("fig4_a", "fig4_b");
    ensure(strong_sync(&a, &b).unwrap().is_holds(), "strong_sync holds")?;
    for mode in [Mode::Strong, Mode::Weak] {
        ensure(
            async_compat_bounded(&a, &b, 1, mode).unwrap().is_fails(),
            &format!("{mode} async fails at K=1"),
        )?;
    }
    Ok(())
}

fn c5_fig5() -> Check {
    let (a, b) = pair("fig5_a", "fig5_b");
    for x in [&a, &b] {
        ensure(io_separated(x).is_holds(), "io-separated")?;
        ensure(obs_io_separated(x).is_fails(), "not observationally io-separated")?;
    }
    ensure(weak_sync(&a, &b).unwrap().is_holds(), "weak_sync holds")?;
    ensure(async_compat_bounded(&a, &b, 2, Mode::Weak).unwrap().is_fails(), "weak async fails")?;
    ensure(half_duplex_check(&a, &b).unwrap().is_fails(), "not half-duplex")
}

fn c6_fig7() -> Check {
    let (a, b) = pair("fig7_a", "fig7_b");
    ensure(wac_left(&a, &b).unwrap().is_fails(), "wac_left fails")?;
    for k in FIG7_BOUNDS {
        for mode in [Mode::Strong, Mode::Weak] {
            ensure(
                !async_compat_bounded(&a, &b, k, mode).unwrap().is_fails(),
                &format!("no {mode} violation at K={k}"),
            )?;
        }
        let x = completeness_x(&a, &b, k).unwrap();
        ensure(x.is_inconclusive() && x.location() == Some("A:1"), "completeness inconclusive at state 1")?;
    }
    let r = decide(&a, &b, 4, Mode::Weak, false).unwrap();
    ensure(r.criterion_conclusion == Conclusion::Unknown, "criterion path Unknown")?;
    ensure(r.conclusion == Conclusion::WeakAsyncCompatible, "pair is weakly compatible")
}

fn c7_deadlock_examples() -> Check {
    let (a, b) = pair("ex63_recv_a", "ex63_recv_b");
    ensure(wac(&a, &b).unwrap().is_holds(), "recv: wac holds")?;
    ensure(async_compat_bounded(&a, &b, 1, Mode::Weak).unwrap().is_holds(), "recv: no violation")?;
    for k in RECV_BOUNDS {
        ensure(
            async_deadlock_bounded(&a, &b, k).unwrap().report.contains("((0,ε),(0,ε))"),
            &format!("recv: initial deadlock at K={k}"),
        )?;
    }
    let (a, b) = pair("ex63_send_a", "ex63_send_b");
    ensure(async_deadlock_bounded(&a, &b, 2).unwrap().report.is_empty(), "send: no deadlock")?;
    ensure(async_compat_bounded(&a, &b, 1, Mode::Weak).unwrap().is_fails(), "send: weak violation at K=1")?;

    let (a, b) = pair("fig10_a", "fig10_b");
    for k in GATE_BOUNDS {
        let d = async_deadlock_bounded(&a, &b, k).unwrap();
        ensure(d.report.is_empty(), &format!("fig10: no async deadlock at K={k}"))?;
        if k == *GATE_BOUNDS.end() {
            ensure(d.exhaustive, "fig10: exploration exhaustive")?;
        }
    }
    ensure(!sync_deadlocks(&a, &b).unwrap().is_empty(), "fig10: sync deadlock")?;
    ensure(half_duplex_check(&a, &b).unwrap().is_fails(), "fig10: not half-duplex")?;

    let (a, b) = pair("fig11_a", "fig11_b");
    ensure(sync_deadlocks(&a, &b).unwrap().is_empty(), "fig11: sync deadlock-free")?;
    for k in GATE_BOUNDS {
        ensure(
            !async_deadlock_bounded(&a, &b, k).unwrap().report.is_empty(),
            "fig11: async deadlock",
        )?;
    }
    Ok(())
}

fn c8_properties() -> Check {
    let mut failures: Vec<String> = Vec::new();
    let mut premises = [0usize; 4];
    for seed in SEED_BASE..SEED_BASE + SAMPLES {
        let (a, b) = random_pair(seed);
        let mut fail = |tag: &str| failures.push(format!("{tag} seed {seed:#x}"));
        let hd = half_duplex_check(&a, &b).unwrap().is_holds();
        let strong = strong_sync(&a, &b).unwrap().is_holds();
        let wac_holds = wac(&a, &b).unwrap().is_holds();
        let sync = sync_product(&a, &b).unwrap();
        for k in PROPERTY_BOUNDS {
            let g = async_explore(&a, &b, k).unwrap();
            if k == 1 && hd == both_queues_loaded(&g) {
                fail("(a)");
            }
            if empty_queue_embedding(&sync, &g).is_err() {
                fail("(b)");
            }
            if check_q(&a, &b, &g).unwrap().is_err() {
                fail("(c)");
            }
            if wac_holds && async_compat_on(&g, Mode::Weak).is_fails() {
                fail("(d)");
            }
            if strong && hd && async_compat_on(&g, Mode::Strong).is_fails() {
                fail("(e)");
            }
        }
        let separated = io_separated(&a).is_holds() && io_separated(&b).is_holds();
        if separated && strong && !hd {
            fail("(f)");
        }
        premises[0] += usize::from(hd);
        premises[1] += usize::from(wac_holds);
        premises[2] += usize::from(strong && hd);
        premises[3] += usize::from(separated && strong);
    }
    println!(
        "    {SAMPLES} samples; premises met: half-duplex {}, wac {}, strong+half-duplex {}, separated+strong {}",
        premises[0], premises[1], premises[2], premises[3]
    );
    ensure(premises.iter().all(|p| *p > 0), "every premise exercised")?;
    if failures.len() > MAX_COUNTEREXAMPLES {
        return Err(format!("{} counterexamples, first: {}", failures.len(), failures[0]));
    }
    Ok(())
}

fn c9_determinism() -> Check {
    for (a, b) in fixtures::PAIRS {
        let args = [
            "pipeline".to_string(),
            format!("fixture:{a}"),
            format!("fixture:{b}"),
            "--bound".into(),
            DETERMINISM_BOUND.into(),
            "--json".into(),
            "-".into(),
        ];
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_iots-compat"))
                .args(&args)
                .output()
                .map(|o| o.stdout)
                .map_err(|e| e.to_string())
        };
        let (first, second) = (run()?, run()?);
        ensure(!first.is_empty() && first == second, &format!("{a}/{b} JSON differs"))?;
    }
    Ok(())
}

fn runtime_budget() -> Check {
    for (a, b) in fixtures::PAIRS {
        let (x, y) = pair(a, b);
        let start = Instant::now();
        decide(&x, &y, 3, Mode::Weak, true).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        ensure(t < MAX_PIPELINE_TIME, &format!("{a}/{b} took {t:?}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("1 maker/user regression", c1_maker_user),
        ("2 ma/mb regression", c2_ma_mb),
        ("3 ma/mb' regression", c3_ma_mb_prime),
        ("4 fig 4 regression", c4_fig4),
        ("5 fig 5 regression", c5_fig5),
        ("6 fig 7 regression", c6_fig7),
        ("7 deadlock examples and gates", c7_deadlock_examples),
        ("8 randomized property suites", c8_properties),
        ("9 deterministic JSON", c9_determinism),
        ("- runtime budget per pair", runtime_budget),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("criterion {name}: PASS"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
