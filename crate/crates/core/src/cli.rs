//! The `bblab` command line.
//!
//! Exit codes: 0 on success, 1 when a check fails (scan counterexample,
//! simulation mismatch, undecided machines), 2 on bad input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::machines::{builtin, parse_compact, parse_machine, BUILTIN_NAMES};
use crate::search::{
    enumerate, verify_checkpoints, EnumerationOptions, EnumerationSummary, SearchError, SpaceMode,
};
use crate::sim::{time_scale, verify_simulation, Encoding, SimError, TranscriptStatus};
use crate::ternary::scan_erdos_with;
use crate::tm::{Configuration, MachineTable};

#[derive(Parser, Debug)]
#[command(name = "bblab", version, about = "Busy beaver and Erdős machine toolkit")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a machine from a blank tape.
    Run(RunArgs),
    /// Look for powers of two with no ternary digit 2.
    Scan {
        #[arg(long)]
        max_n: u64,
        /// Also report per-exponent digit counts (json only).
        #[arg(long)]
        counts: bool,
    },
    /// Check that m152 simulates m54 step by step.
    CheckSim {
        #[arg(long)]
        steps: u64,
        /// Simulating machine, instead of the built-in m152.
        #[arg(long)]
        big: Option<PathBuf>,
        /// Simulated machine, instead of the built-in m54.
        #[arg(long)]
        small: Option<PathBuf>,
    },
    /// Classify every n-state, k-symbol machine.
    Enumerate(EnumerateArgs),
    /// Check m54 against the checkpoint schedule s_0 ..= s_max.
    Checkpoints {
        #[arg(long)]
        max_n: u64,
    },
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false)]
pub struct Source {
    /// One of m54, m152, bb5-champion.
    #[arg(long, group = "source")]
    builtin: Option<String>,
    /// A `.tm` file.
    #[arg(long, group = "source")]
    machine: Option<PathBuf>,
    /// A compact table such as `1RB1LB_1LA---`.
    #[arg(long, group = "source")]
    compact: Option<String>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Comma-separated steps to snapshot, e.g. `5,9,13`.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<u64>,
    /// Print cells LO..=HI of the final tape, e.g. `-2:1`.
    #[arg(long, allow_hyphen_values = true)]
    show_window: Option<String>,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(short = 'n', long)]
    states: usize,
    #[arg(short = 'k', long)]
    symbols: usize,
    #[arg(long)]
    budget: u64,
    /// Tree-normal-form space instead of every raw table.
    #[arg(long)]
    reduced: bool,
    /// Where to write undecided machines. Defaults to
    /// `undecided-<n>x<k>.txt` when any remain.
    #[arg(long)]
    undecided_out: Option<PathBuf>,
    /// Skip replaying halting machines and certificates.
    #[arg(long)]
    no_revalidate: bool,
}

/// Wider tapes are summarised in text output.
const TEXT_TAPE_LIMIT: usize = 200;

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct Document<T: Serialize> {
    command: &'static str,
    #[serde(flatten)]
    body: T,
    timing: Timing,
}

fn emit<T: Serialize>(format: Format, command: &'static str, body: T, start: Instant, text: impl FnOnce(&T) -> String) {
    match format {
        Format::Text => print!("{}", text(&body)),
        Format::Json => {
            let doc = Document {
                command,
                body,
                timing: Timing {
                    elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                },
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
}

fn load_file(path: &PathBuf) -> Result<MachineTable, Failure> {
    let src = fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    parse_machine(&src).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(source: &Source) -> Result<(String, MachineTable), Failure> {
    if let Some(name) = &source.builtin {
        let m = builtin(name).ok_or_else(|| {
            input_error(format!(
                "unknown builtin `{name}` (known: {})",
                BUILTIN_NAMES.join(", ")
            ))
        })?;
        return Ok((name.clone(), m));
    }
    if let Some(path) = &source.machine {
        return Ok((path.display().to_string(), load_file(path)?));
    }
    let compact = source.compact.as_deref().expect("clap requires a source");
    let m = parse_compact(compact).map_err(|e| input_error(e.to_string()))?;
    Ok((compact.to_string(), m))
}

fn parse_window(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || input_error(format!("window must be LO:HI, got `{s}`"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct Snapshot {
    step: u64,
    state: String,
    head: i64,
    halted: bool,
    /// Touched extent, with the head cell in brackets.
    tape: String,
    tape_lo: i64,
    tape_hi: i64,
}

fn snapshot(m: &MachineTable, c: &Configuration) -> Snapshot {
    let rendered = c.display(m).to_string();
    let tape = rendered
        .split_once(", ")
        .map(|(_, t)| t.to_string())
        .unwrap_or_default();
    Snapshot {
        step: c.step,
        state: m.state_name(c.state).to_string(),
        head: c.head,
        halted: c.halted,
        tape,
        tape_lo: c.tape.extent().0,
        tape_hi: c.tape.extent().1,
    }
}

#[derive(Serialize)]
struct Window {
    lo: i64,
    hi: i64,
    cells: Vec<String>,
}

#[derive(Serialize)]
struct RunReport {
    machine: String,
    states: usize,
    symbols: usize,
    budget: u64,
    halted: bool,
    steps: u64,
    last: Snapshot,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<Window>,
    snapshots: Vec<Snapshot>,
}

fn cmd_run(args: &RunArgs, format: Format, start: Instant) -> Result<u8, Failure> {
    let (name, m) = load(&args.source)?;
    let window = args.show_window.as_deref().map(parse_window).transpose()?;
    if !args.checkpoints.windows(2).all(|w| w[0] < w[1]) {
        return Err(input_error("checkpoints must be strictly ascending"));
    }
    let mut c = Configuration::new(&m);
    let mut snapshots = Vec::new();
    for &t in args.checkpoints.iter().filter(|&&t| t <= args.budget) {
        c.run(&m, t - c.step);
        if c.step < t {
            break;
        }
        snapshots.push(snapshot(&m, &c));
    }
    c.run(&m, args.budget - c.step.min(args.budget));
    let report = RunReport {
        machine: name,
        states: m.num_states(),
        symbols: m.num_symbols(),
        budget: args.budget,
        halted: c.halted,
        steps: c.step,
        last: snapshot(&m, &c),
        window: window.map(|(lo, hi)| Window {
            lo,
            hi,
            cells: c
                .window(lo, hi)
                .into_iter()
                .map(|s| m.symbol_label(s).to_string())
                .collect(),
        }),
        snapshots,
    };
    emit(format, "run", report, start, |r| {
        let mut out = String::new();
        for s in &r.snapshots {
            out += &format!("step {}: {}, {}\n", s.step, s.state, s.tape);
        }
        if r.halted {
            out += &format!("halted at {}\n", r.steps);
        } else {
            out += &format!("running at {} (budget reached)\n", r.steps);
        }
        let (lo, hi) = (r.last.tape_lo, r.last.tape_hi);
        if r.last.tape.len() <= TEXT_TAPE_LIMIT {
            out += &format!("{}, {}\n", r.last.state, r.last.tape);
        } else {
            out += &format!("{}, head {}, touched {lo}..{hi}\n", r.last.state, r.last.head);
        }
        if let Some(w) = &r.window {
            out += &format!("{}\n", w.cells.join(" "));
        }
        out
    });
    Ok(0)
}

#[derive(Serialize)]
struct ScanOut {
    max_n: u64,
    digit_two_free: Vec<u64>,
    counterexamples: Vec<u64>,
    digit_ops: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    digit_counts: Option<Vec<[u32; 3]>>,
}

fn cmd_scan(max_n: u64, counts: bool, format: Format, start: Instant) -> Result<u8, Failure> {
    let r = scan_erdos_with(max_n, counts);
    let counterexamples: Vec<u64> = r.counterexamples().collect();
    let code = if counterexamples.is_empty() { 0 } else { 1 };
    let out = ScanOut {
        max_n,
        digit_two_free: r.digit_two_free,
        counterexamples,
        digit_ops: r.digit_ops,
        digit_counts: r.digit_counts,
    };
    emit(format, "scan", out, start, |o| {
        let set: Vec<String> = o.digit_two_free.iter().map(u64::to_string).collect();
        let mut s = format!(
            "digit-2-free exponents up to {}: {{{}}}\n",
            o.max_n,
            set.join(", ")
        );
        for n in &o.counterexamples {
            s += &format!("counterexample: 2^{n} has no ternary digit 2\n");
        }
        s
    });
    Ok(code)
}

#[derive(Serialize)]
struct CheckSimOut {
    steps: u64,
    status: TranscriptStatus,
    f: u64,
}

fn cmd_check_sim(
    steps: u64,
    big: &Option<PathBuf>,
    small: &Option<PathBuf>,
    format: Format,
    start: Instant,
) -> Result<u8, Failure> {
    let big = match big {
        Some(p) => load_file(p)?,
        None => builtin("m152").expect("builtin"),
    };
    let small = match small {
        Some(p) => load_file(p)?,
        None => builtin("m54").expect("builtin"),
    };
    let enc = Encoding::standard(&small, &big).map_err(|e| input_error(e.to_string()))?;
    match verify_simulation(&big, &small, &enc, steps) {
        Ok(t) => {
            let n = t.verified_steps();
            let f = time_scale(&t, n).expect("in range");
            let out = CheckSimOut {
                steps: n,
                status: t.status,
                f,
            };
            emit(format, "check-sim", out, start, |o| match o.status {
                TranscriptStatus::Verified { .. } => format!("verified, f({})={}\n", o.steps, o.f),
                TranscriptStatus::BothHalted { steps } => {
                    format!("verified, both halted: small at {steps}, big at f({steps})={}\n", o.f)
                }
            });
            Ok(0)
        }
        Err(e @ SimError::Setup(_)) => Err(input_error(e.to_string())),
        Err(e) => Err(Failure {
            code: 1,
            message: format!("simulation check failed: {e}"),
        }),
    }
}

#[derive(Serialize)]
struct EnumerateOut {
    #[serde(flatten)]
    summary: EnumerationSummary,
    undecided_file: Option<String>,
}

fn cmd_enumerate(args: &EnumerateArgs, format: Format, start: Instant) -> Result<u8, Failure> {
    let opts = EnumerationOptions {
        n: args.states,
        k: args.symbols,
        budget: args.budget,
        mode: if args.reduced {
            SpaceMode::TreeNormalForm
        } else {
            SpaceMode::Raw
        },
        revalidate: !args.no_revalidate,
    };
    let summary = enumerate(&opts).map_err(|e| match e {
        SearchError::SpaceTooLarge { .. } | SearchError::Shape(_) => input_error(e.to_string()),
        other => Failure {
            code: 1,
            message: other.to_string(),
        },
    })?;
    let path = match &args.undecided_out {
        Some(p) => Some(p.clone()),
        None if !summary.undecided.is_empty() => {
            Some(PathBuf::from(format!("undecided-{}x{}.txt", opts.n, opts.k)))
        }
        None => None,
    };
    if let Some(p) = &path {
        let body: String = summary.undecided.iter().map(|m| format!("{m}\n")).collect();
        fs::write(p, body).map_err(|e| input_error(format!("cannot write {}: {e}", p.display())))?;
    }
    let code = if summary.confirmed() { 0 } else { 1 };
    let out = EnumerateOut {
        summary,
        undecided_file: path.map(|p| p.display().to_string()),
    };
    emit(format, "enumerate", out, start, |o| {
        let s = &o.summary;
        let mode = match s.mode {
            SpaceMode::Raw => "raw",
            SpaceMode::TreeNormalForm => "tree normal form",
        };
        let mut t = format!("machines: {} ({mode}, budget {})\n", s.machines, s.budget);
        t += &format!("halting: {}\n", s.halting);
        let parts: Vec<String> = s.non_halting.iter().map(|(k, v)| format!("{k}={v}")).collect();
        t += &format!("non-halting: {} ({})\n", s.non_halting_total(), parts.join(", "));
        let best = s.max_steps.map_or("none".to_string(), |v| v.to_string());
        t += &format!("BB candidate: {best}, undecided: {}\n", s.undecided.len());
        if let Some(c) = s.champions.first() {
            t += &format!("champion: {c} ({} tied)\n", s.champion_count);
        }
        if let Some(p) = &o.undecided_file {
            t += &format!("undecided list: {p}\n");
        }
        t
    });
    Ok(code)
}

#[derive(Serialize)]
struct CheckpointsOut {
    max_n: u64,
    last_step: u64,
    steps: Vec<u64>,
}

fn cmd_checkpoints(max_n: u64, format: Format, start: Instant) -> Result<u8, Failure> {
    let m = builtin("m54").expect("builtin");
    match verify_checkpoints(&m, max_n) {
        Ok(r) => {
            let steps: Vec<u64> = r.records.iter().map(|c| c.step).collect();
            let out = CheckpointsOut {
                max_n,
                last_step: *steps.last().expect("non-empty"),
                steps,
            };
            emit(format, "checkpoints", out, start, |o| {
                format!("verified s_0..s_{}, s_{} = {}\n", o.max_n, o.max_n, o.last_step)
            });
            Ok(0)
        }
        Err(e) => Err(Failure {
            code: 1,
            message: e.to_string(),
        }),
    }
}

pub fn run(cli: Cli) -> ExitCode {
    let start = Instant::now();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args, cli.format, start),
        Command::Scan { max_n, counts } => cmd_scan(*max_n, *counts, cli.format, start),
        Command::CheckSim { steps, big, small } => cmd_check_sim(*steps, big, small, cli.format, start),
        Command::Enumerate(args) => cmd_enumerate(args, cli.format, start),
        Command::Checkpoints { max_n } => cmd_checkpoints(*max_n, cli.format, start),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

pub fn main() -> ExitCode {
    run(Cli::parse())
}
