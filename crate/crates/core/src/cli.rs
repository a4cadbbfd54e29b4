//! Command-line front end.
//!
//! Exit codes: 0 holds / compatible, 1 fails / incompatible, 2 inconclusive,
//! 3 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{autonomous_df, half_duplex_check, io_separated, obs_io_separated, sync_deadlocks, Side};
use crate::compat::{
    async_compat_bounded, async_deadlock_bounded, completeness_x, strong_sync, wac, weak_sync, Mode,
};
use crate::compose::{async_explore, criterion_product_left, criterion_product_right, sync_product};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::formats::{emit_dot, emit_error_json, emit_report_json, parse_iots};
use crate::model::Iots;
use crate::pipeline::decide;
use crate::verdict::{Status, Verdict};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

/// Prefix selecting a bundled fixture instead of a file, e.g. `fixture:maker`.
pub const FIXTURE_PREFIX: &str = "fixture:";

#[derive(Parser, Debug)]
#[command(
    name = "iots-compat",
    version,
    about = "Compatibility and deadlock checks for communicating I/O-transition systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a single check.
    #[command(subcommand)]
    Check(Check),
    /// Deadlock analyses.
    #[command(subcommand)]
    Deadlock(Deadlock),
    /// Full decision procedure with a consolidated report.
    Pipeline(PipelineArgs),
    /// Export graphs.
    #[command(subcommand)]
    Export(Export),
}

#[derive(Args, Debug)]
struct Pair {
    /// Left component (`.iots` file or `fixture:<name>`).
    a: String,
    /// Right component.
    b: String,
}

#[derive(Args, Debug)]
struct Bound {
    /// Maximum length of each message queue.
    #[arg(long, short = 'k', value_parser = clap::value_parser!(u32).range(1..))]
    bound: u32,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Strong,
    Weak,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strong => Mode::Strong,
            ModeArg::Weak => Mode::Weak,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Check {
    SyncStrong(Pair),
    SyncWeak(Pair),
    HalfDuplex(Pair),
    IoSep { a: String },
    ObsIoSep { a: String },
    Wac(Pair),
    Completeness {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        bound: Bound,
    },
    Async {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        bound: Bound,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
    },
}

#[derive(Subcommand, Debug)]
enum Deadlock {
    Sync(Pair),
    Async {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        bound: Bound,
    },
    Autonomous(Pair),
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[command(flatten)]
    pair: Pair,
    #[command(flatten)]
    bound: Bound,
    #[arg(long, value_enum, default_value = "weak")]
    mode: ModeArg,
    /// Write the JSON report to PATH (`-` for stdout).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write DOT files of all products into DIR.
    #[arg(long, value_name = "DIR")]
    dot: Option<PathBuf>,
    /// Run bounded exploration even when a theorem already concluded.
    #[arg(long)]
    force_bounded: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Product {
    Sync,
    Left,
    Right,
    Async,
}

#[derive(Subcommand, Debug)]
enum Export {
    Dot {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum)]
        product: Product,
        #[arg(long, short = 'k', default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
    },
}

fn load(arg: &str) -> Result<Iots, String> {
    if let Some(name) = arg.strip_prefix(FIXTURE_PREFIX) {
        let text = fixtures::source(name).ok_or_else(|| format!("no bundled fixture `{name}`"))?;
        return parse_iots(text).map_err(|e| format!("{arg}: {e}"));
    }
    let text = fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?;
    parse_iots(&text).map_err(|e| format!("{arg}: {e}"))
}

fn load_pair(p: &Pair) -> Result<(Iots, Iots), String> {
    Ok((load(&p.a)?, load(&p.b)?))
}

fn verdict_code(v: &Verdict) -> i32 {
    match v.status {
        Status::Holds => EXIT_HOLDS,
        Status::Fails => EXIT_FAILS,
        Status::InconclusiveAtBound(_) => EXIT_INCONCLUSIVE,
    }
}

fn report_verdict(out: &mut dyn Write, v: Result<Verdict>) -> Result<i32, String> {
    let v = v.map_err(|e| e.to_string())?;
    let _ = writeln!(out, "{v}");
    Ok(verdict_code(&v))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_check(c: Check, out: &mut dyn Write) -> Result<i32, String> {
    match c {
        Check::SyncStrong(p) => {
            let (a, b) = load_pair(&p)?;
            report_verdict(out, strong_sync(&a, &b))
        }
        Check::SyncWeak(p) => {
            let (a, b) = load_pair(&p)?;
            report_verdict(out, weak_sync(&a, &b))
        }
        Check::HalfDuplex(p) => {
            let (a, b) = load_pair(&p)?;
            report_verdict(out, half_duplex_check(&a, &b))
        }
        Check::IoSep { a } => report_verdict(out, Ok(io_separated(&load(&a)?))),
        Check::ObsIoSep { a } => report_verdict(out, Ok(obs_io_separated(&load(&a)?))),
        Check::Wac(p) => {
            let (a, b) = load_pair(&p)?;
            report_verdict(out, wac(&a, &b))
        }
        Check::Completeness { pair, bound } => {
            let (a, b) = load_pair(&pair)?;
            report_verdict(out, completeness_x(&a, &b, bound.bound as usize))
        }
        Check::Async { pair, bound, mode } => {
            let (a, b) = load_pair(&pair)?;
            report_verdict(out, async_compat_bounded(&a, &b, bound.bound as usize, mode.into()))
        }
    }
}

fn run_deadlock(d: Deadlock, out: &mut dyn Write) -> Result<i32, String> {
    match d {
        Deadlock::Sync(p) => {
            let (a, b) = load_pair(&p)?;
            let r = sync_deadlocks(&a, &b).map_err(|e| e.to_string())?;
            if r.is_empty() {
                let _ = writeln!(out, "no deadlock");
                return Ok(EXIT_HOLDS);
            }
            for d in &r.deadlocked {
                let trace: Vec<String> = d.trace.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "deadlock at {} via [{}]", d.location, trace.join(" "));
            }
            Ok(EXIT_FAILS)
        }
        Deadlock::Async { pair, bound } => {
            let (a, b) = load_pair(&pair)?;
            let r = async_deadlock_bounded(&a, &b, bound.bound as usize).map_err(|e| e.to_string())?;
            report_verdict(out, Ok(r.verdict()))
        }
        Deadlock::Autonomous(p) => {
            let (a, b) = load_pair(&p)?;
            let l = autonomous_df(&a, &b, Side::Left).map_err(|e| e.to_string())?;
            let r = autonomous_df(&a, &b, Side::Right).map_err(|e| e.to_string())?;
            let _ = writeln!(out, "left:  {l}\nright: {r}");
            Ok(if l.is_holds() || r.is_holds() { EXIT_HOLDS } else { EXIT_FAILS })
        }
    }
}

fn run_pipeline(p: PipelineArgs, out: &mut dyn Write) -> Result<i32, String> {
    let (a, b) = load_pair(&p.pair)?;
    let k = p.bound.bound as usize;
    let emit_json = |out: &mut dyn Write, text: &str| -> Result<(), String> {
        match &p.json {
            Some(path) if path.as_os_str() == "-" => {
                let _ = out.write_all(text.as_bytes());
                Ok(())
            }
            Some(path) => write_file(path, text),
            None => Ok(()),
        }
    };
    let report = match decide(&a, &b, k, p.mode.into(), p.force_bounded) {
        Ok(r) => r,
        Err(e) => {
            emit_json(out, &emit_error_json(&e))?;
            return Err(e.to_string());
        }
    };
    if p.json.as_deref().map_or(true, |j| j.as_os_str() != "-") {
        let _ = writeln!(out, "{report}");
    }
    emit_json(out, &emit_report_json(&report))?;
    if let Some(dir) = &p.dot {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        let dots = [
            ("sync", sync_product(&a, &b).map(|g| emit_dot(&g))),
            ("left", criterion_product_left(&a, &b).map(|g| emit_dot(&g))),
            ("right", criterion_product_right(&a, &b).map(|g| emit_dot(&g))),
            ("async", async_explore(&a, &b, k).map(|g| emit_dot(&g))),
        ];
        for (name, dot) in dots {
            let dot = dot.map_err(|e| e.to_string())?;
            write_file(&dir.join(format!("{name}.dot")), &dot)?;
        }
    }
    Ok(match report.conclusion {
        c if c.is_positive() => EXIT_HOLDS,
        c if c.is_negative() => EXIT_FAILS,
        _ => EXIT_INCONCLUSIVE,
    })
}

fn run_export(e: Export, out: &mut dyn Write) -> Result<i32, String> {
    let Export::Dot { pair, product, bound } = e;
    let (a, b) = load_pair(&pair)?;
    let dot: Result<String, Error> = match product {
        Product::Sync => sync_product(&a, &b).map(|g| emit_dot(&g)),
        Product::Left => criterion_product_left(&a, &b).map(|g| emit_dot(&g)),
        Product::Right => criterion_product_right(&a, &b).map(|g| emit_dot(&g)),
        Product::Async => async_explore(&a, &b, bound as usize).map(|g| emit_dot(&g)),
    };
    let _ = out.write_all(dot.map_err(|e| e.to_string())?.as_bytes());
    Ok(EXIT_HOLDS)
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_HOLDS,
                _ => EXIT_ERROR,
            };
            let sink: &mut dyn Write = if code == EXIT_HOLDS { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(c) => run_check(c, out),
        Command::Deadlock(d) => run_deadlock(d, out),
        Command::Pipeline(p) => run_pipeline(p, out),
        Command::Export(e) => run_export(e, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exit(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("iots-compat").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit(&["check", "sync-weak", "fixture:maker", "fixture:user"]).0, 0);
        assert_eq!(exit(&["check", "sync-strong", "fixture:maker", "fixture:user"]).0, 1);
        assert_eq!(
            exit(&["check", "completeness", "fixture:fig7_a", "fixture:fig7_b", "--bound", "4"]).0,
            2
        );
        assert_eq!(exit(&["check", "wac", "fixture:maker"]).0, 3);
        assert_eq!(exit(&["check", "io-sep", "fixture:nope"]).0, 3);
        assert_eq!(exit(&["pipeline", "fixture:maker", "fixture:user", "--bound", "0"]).0, 3);
    }

    #[test]
    fn json_to_stdout() {
        let (code, text) = exit(&["pipeline", "fixture:ma", "fixture:mb", "--bound", "2", "--json", "-"]);
        assert_eq!(code, 0);
        assert!(text.contains("\"conclusion\": \"WeakAsyncCompatible\""));
    }

    #[test]
    fn not_composable_pair_gives_error_document() {
        let (code, text) = exit(&["pipeline", "fixture:maker", "fixture:maker", "--bound", "1", "--json", "-"]);
        assert_eq!(code, 3);
        assert!(text.contains("\"kind\": \"NotComposable\""));
    }
}
