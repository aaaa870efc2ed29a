//! `pnlab`: command-line driver for the proof-net laboratory.
//!
//! Exit status: 0 success, 1 validation or verification failure, 2 budget
//! exhausted, 3 usage or parse error.

mod dot;
mod input;
mod report;
mod verify;

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pnlab_core::frontend::{from_lambda, gen_family, parse_lambda, FAMILIES};
use pnlab_core::machine::{parse_context, Machine, RunOutcome, Runner};
use pnlab_core::rewrite::{normalize, Strategy};
use pnlab_core::subsystems::check_membership;
use pnlab_core::weight::{normalize_weighted, Weigher, WeightBudget};
use pnlab_core::{parse_formula, validate, Error, ProofNet, System};

use input::{emit, load, Loaded};
use report::{CheckRecord, Input, NormalizationRecord, Report, Stats, Timing, WeightRecord};

const DEFAULT_STEPS: u64 = 100_000;
const DEFAULT_STATES: usize = 100_000;
const DEFAULT_MACHINE_STEPS: u64 = 1_000_000;

/// A failed invocation: exit status and message for standard error.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            msg: msg.into(),
        }
    }

    fn check(msg: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            msg: msg.into(),
        }
    }

    pub fn from_error(e: &Error, context: &str) -> Failure {
        let code = match e {
            Error::BudgetExhausted(_) => 2,
            Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::IllTyped(_)
            | Error::UnknownFamily(_)
            | Error::UnknownEdge(_)
            | Error::UnknownVertex(_)
            | Error::NotBoxEdge(_)
            | Error::SideCondition { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            msg: format!("{context}: {e}"),
        }
    }
}

fn lift<T>(r: pnlab_core::Result<T>, context: &str) -> Result<T, Failure> {
    r.map_err(|e| Failure::from_error(&e, context))
}

fn parse_system(s: &str) -> Result<System, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Arrow,
    Double,
    Triangle,
    All,
}

impl StrategyArg {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyArg::Arrow => vec![Strategy::Arrow],
            StrategyArg::Double => vec![Strategy::Double],
            StrategyArg::Triangle => vec![Strategy::Triangle],
            StrategyArg::All => Strategy::ALL.to_vec(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "pnlab",
    version,
    about = "Proof-nets, context semantics and weights"
)]
struct Cli {
    /// Output format of reports.
    #[arg(
        long,
        global = true,
        env = "PNLAB_FORMAT",
        value_enum,
        default_value = "text"
    )]
    format: Format,
    /// Logical system (mell, ell, sll, lll). Defaults to the system of the input.
    #[arg(long, global = true, env = "PNLAB_SYSTEM", value_parser = parse_system)]
    system: Option<System>,
    /// Step budget of the command (rewriting steps, weigher steps or machine steps).
    #[arg(long, global = true, env = "PNLAB_BUDGET")]
    budget: Option<u64>,
    /// Append a wall-clock timing section to reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a net or proof term, and its membership with --system.
    Check { input: String },
    /// Normalize under a strategy and print the normal form.
    Normalize {
        input: String,
        #[arg(long, value_enum, default_value = "triangle")]
        strategy: StrategyArg,
        /// Include the step trace.
        #[arg(long)]
        trace: bool,
        /// Record W and T after every step (implies --trace).
        #[arg(long)]
        weights: bool,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Copies, cardinalities and the weights W and T.
    Weight {
        input: String,
        /// Disable box-jump transitions.
        #[arg(long)]
        no_jumps: bool,
    },
    /// Run the token machine from a context `edge/[U]/V/polarity`.
    Machine {
        input: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        no_jumps: bool,
    },
    /// Check the invariants of a net.
    Verify {
        input: String,
        #[arg(long, value_enum, default_value = "all")]
        suite: verify::Suite,
        /// Disable box-jump transitions in the weight, machine and copy suites.
        #[arg(long)]
        no_jumps: bool,
        /// Distinct nets the reduction-graph search may visit.
        #[arg(long, env = "PNLAB_STATES", default_value_t = DEFAULT_STATES)]
        states: usize,
    },
    /// Generate a built-in family: dr-ladder, copy-example or jump-example.
    Gen {
        family: String,
        #[arg(default_value_t = 1)]
        n: usize,
        #[arg(long, default_value = "a")]
        base: String,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Translate a simply typed lambda term.
    Lambda {
        term: String,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Graphviz rendering with boxes as nested clusters.
    ExportDot {
        input: String,
        #[arg(short, long)]
        output: Option<String>,
    },
}

fn base_report(loaded: &Loaded) -> Report {
    Report {
        schema: report::SCHEMA,
        input: Input {
            sha256: loaded.digest.clone(),
            kind: loaded.kind.name(),
        },
        system: loaded.net.system.to_string(),
        net: Stats::of(&loaded.net),
        normalization: Vec::new(),
        weight: None,
        checks: Vec::new(),
        verdict: None,
        timing: None,
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn finish(mut report: Report, started: Instant, cli: &Cli, text: String) -> String {
    if cli.timing {
        report.timing = Some(Timing {
            seconds: started.elapsed().as_secs_f64(),
        });
    }
    match cli.format {
        Format::Json => json(&report),
        Format::Text => match &report.timing {
            Some(t) => format!("{text}# seconds: {:.3}\n", t.seconds),
            None => text,
        },
    }
}

fn cmd_check(cli: &Cli, path: &str) -> Result<(), Failure> {
    let loaded = load(path, cli.system)?;
    let diags = validate(&loaded.net);
    let violations = cli
        .system
        .map(|s| check_membership(&loaded.net, s))
        .unwrap_or_default();
    for d in &diags {
        eprintln!("{path}: {d}");
    }
    for v in &violations {
        eprintln!("{path}: {v}");
    }
    if !diags.is_empty() || !violations.is_empty() {
        return Err(Failure::check(format!(
            "{path}: {} diagnostics, {} membership violations",
            diags.len(),
            violations.len()
        )));
    }
    let g = &loaded.net;
    println!(
        "ok: {} net, |G| = {}, depth {}, {} boxes",
        g.system,
        g.size(),
        g.max_depth(),
        g.boxes.len()
    );
    Ok(())
}

fn require_valid(net: &ProofNet, path: &str) -> Result<(), Failure> {
    match validate(net).first() {
        Some(d) => Err(Failure::check(format!("{path}: invalid net: {d}"))),
        None => Ok(()),
    }
}

fn cmd_normalize(
    cli: &Cli,
    path: &str,
    strategy: StrategyArg,
    trace: bool,
    weights: bool,
    output: Option<&str>,
) -> Result<(), Failure> {
    let started = Instant::now();
    let loaded = load(path, cli.system)?;
    require_valid(&loaded.net, path)?;
    let budget = cli.budget.unwrap_or(DEFAULT_STEPS);
    let mut report = base_report(&loaded);
    let mut text = String::new();
    let mut incomplete = None;
    let mut normal_form = String::new();
    for s in strategy.strategies() {
        let n = if weights {
            lift(normalize_weighted(&loaded.net, s, budget), path)?
        } else {
            lift(normalize(&loaded.net, s, budget), path)?
        };
        let _ = writeln!(text, "# strategy: {s}");
        let _ = writeln!(text, "# steps: {}", n.steps());
        let _ = writeln!(text, "# exponential steps: {}", n.exponential_steps());
        let _ = writeln!(text, "# final size: {}", n.net.size());
        let _ = writeln!(text, "# complete: {}", n.complete);
        if trace || weights {
            let _ = writeln!(
                text,
                "# trace: index kind edge level size{}",
                if weights { " W T" } else { "" }
            );
            for step in &n.trace {
                let _ = writeln!(text, "# {step}");
            }
        }
        if !n.complete {
            incomplete = Some(format!(
                "{path}: {s} normalization stopped after {budget} steps"
            ));
        }
        normal_form = n.net.to_string();
        report
            .normalization
            .push(NormalizationRecord::new(s.name(), &n, trace || weights));
    }
    text.push_str(&normal_form);
    emit(&finish(report, started, cli, text), output)?;
    match incomplete {
        Some(msg) => Err(Failure { code: 2, msg }),
        None => Ok(()),
    }
}

fn weigher(net: &ProofNet, jumps: bool, budget: Option<u64>) -> Weigher<'_> {
    let mut m = Machine::new(net);
    if !jumps {
        m = m.without_jumps();
    }
    let mut b = WeightBudget::default();
    if let Some(total) = budget {
        b.total = total;
    }
    Weigher::with_machine(net, m, b)
}

fn cmd_weight(cli: &Cli, path: &str, no_jumps: bool) -> Result<(), Failure> {
    let started = Instant::now();
    let loaded = load(path, cli.system)?;
    require_valid(&loaded.net, path)?;
    let r = lift(weigher(&loaded.net, !no_jumps, cli.budget).report(), path)?;
    let mut text = String::new();
    let _ = writeln!(text, "W = {}", r.w);
    let _ = writeln!(text, "T = {}", r.t);
    let _ = writeln!(text, "strictly positive: {}", r.strictly_positive);
    let _ = writeln!(text, "acyclic: {}", r.acyclic);
    for b in &r.boxes {
        let _ = writeln!(
            text,
            "box edge {} (principal {}, depth {}, {} premises)",
            b.edge, b.principal, b.depth, b.premise_count
        );
        for e in &b.entries {
            let seq = e
                .sequence
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let copies = e
                .copies
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(
                text,
                "  U = [{seq}]: copies {{{copies}}}, R = {}",
                e.cardinality
            );
        }
    }
    let mut report = base_report(&loaded);
    report.weight = Some(WeightRecord::new(&r, !no_jumps));
    emit(&finish(report, started, cli, text), None)?;
    if !r.strictly_positive || !r.acyclic {
        return Err(Failure::check(format!(
            "{path}: invariant violated (strictly positive: {}, acyclic: {})",
            r.strictly_positive, r.acyclic
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct OutcomeRecord {
    outcome: &'static str,
    steps: u64,
    context: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    branches: Vec<OutcomeRecord>,
}

impl From<&RunOutcome> for OutcomeRecord {
    fn from(o: &RunOutcome) -> Self {
        let (outcome, context, steps, branches) = match o {
            RunOutcome::Final { context, steps } => ("final", context, steps, vec![]),
            RunOutcome::Stuck { context, steps } => ("stuck", context, steps, vec![]),
            RunOutcome::Cycle { context, steps } => ("cycle", context, steps, vec![]),
            RunOutcome::BudgetExhausted { context, steps } => ("budget", context, steps, vec![]),
            RunOutcome::Branched {
                context,
                steps,
                branches,
            } => (
                "branch",
                context,
                steps,
                branches.iter().map(OutcomeRecord::from).collect(),
            ),
        };
        OutcomeRecord {
            outcome,
            steps: *steps,
            context: context.to_string(),
            branches,
        }
    }
}

impl OutcomeRecord {
    fn render(&self, depth: usize, out: &mut String) {
        let _ = writeln!(
            out,
            "{}{} after {} steps at {}",
            "  ".repeat(depth),
            self.outcome,
            self.steps,
            self.context
        );
        for b in &self.branches {
            b.render(depth + 1, out);
        }
    }

    fn any(&self, what: &str) -> bool {
        self.outcome == what || self.branches.iter().any(|b| b.any(what))
    }
}

#[derive(Serialize)]
struct MachineReport {
    schema: &'static str,
    input: Input,
    start: String,
    canonical_start: bool,
    jumps: bool,
    trace: Vec<String>,
    outcome: OutcomeRecord,
    width: usize,
}

fn cmd_machine(cli: &Cli, path: &str, start: &str, no_jumps: bool) -> Result<(), Failure> {
    let loaded = load(path, cli.system)?;
    require_valid(&loaded.net, path)?;
    let start = parse_context(start).map_err(|e| Failure::usage(format!("--start: {e}")))?;
    let net = &loaded.net;
    if !net.edges.contains_key(&start.edge) {
        return Err(Failure::usage(format!(
            "--start: unknown edge {}",
            start.edge
        )));
    }
    let w = weigher(net, !no_jumps, None);
    let canonical = w.is_canonical_context(&start).unwrap_or(false);
    let runner = Runner::new(&w.machine, cli.budget.unwrap_or(DEFAULT_MACHINE_STEPS)).with_trace();
    let outcome = runner.run(&start);
    let record = OutcomeRecord::from(&outcome);
    let trace: Vec<String> = runner.trace().iter().map(|c| c.to_string()).collect();
    let text = match cli.format {
        Format::Json => json(&MachineReport {
            schema: report::SCHEMA,
            input: Input {
                sha256: loaded.digest.clone(),
                kind: loaded.kind.name(),
            },
            start: start.to_string(),
            canonical_start: canonical,
            jumps: !no_jumps,
            trace,
            outcome: record,
            width: outcome.width(),
        }),
        Format::Text => {
            let mut s = String::new();
            for (i, c) in trace.iter().enumerate() {
                let _ = writeln!(s, "{i} {c}");
            }
            record.render(0, &mut s);
            s
        }
    };
    print!("{text}");
    let record = OutcomeRecord::from(&outcome);
    if record.any("budget") {
        return Err(Failure {
            code: 2,
            msg: format!("{path}: machine budget exhausted"),
        });
    }
    if canonical && (record.any("stuck") || record.any("cycle")) {
        return Err(Failure::check(format!(
            "{path}: canonical start {start} gets stuck or cycles"
        )));
    }
    Ok(())
}

fn cmd_verify(
    cli: &Cli,
    path: &str,
    suite: verify::Suite,
    no_jumps: bool,
    states: usize,
) -> Result<(), Failure> {
    let started = Instant::now();
    let loaded = load(path, cli.system)?;
    let system = cli.system.unwrap_or(loaded.net.system);
    let mut report = base_report(&loaded);
    report.system = system.to_string();
    let checks: Vec<CheckRecord> = if validate(&loaded.net).is_empty() {
        let o = verify::Options {
            system,
            jumps: !no_jumps,
            steps: cli.budget.unwrap_or(DEFAULT_STEPS),
            states,
        };
        lift(verify::run(&loaded.net, suite, &o), path)?
    } else {
        let d = validate(&loaded.net)
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        vec![CheckRecord {
            suite: "structure",
            name: "valid".into(),
            passed: false,
            detail: d,
        }]
    };
    let passed = checks.iter().all(|c| c.passed);
    let mut text = String::new();
    for c in &checks {
        let _ = writeln!(
            text,
            "{} {}/{}{}",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            if c.detail.is_empty() {
                String::new()
            } else {
                format!(": {}", c.detail)
            }
        );
    }
    let _ = writeln!(text, "verdict: {}", if passed { "pass" } else { "fail" });
    report.checks = checks;
    report.verdict = Some(if passed { "pass" } else { "fail" });
    emit(&finish(report, started, cli, text), None)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::check(format!("{path}: verification failed")))
    }
}

fn cmd_gen(
    cli: &Cli,
    family: &str,
    n: usize,
    base: &str,
    output: Option<&str>,
) -> Result<(), Failure> {
    if !FAMILIES.contains(&family) {
        return Err(Failure::usage(format!(
            "unknown family `{family}`; expected one of {}",
            FAMILIES.join(", ")
        )));
    }
    let base = parse_formula(base).map_err(|e| Failure::usage(format!("--base: {e}")))?;
    let mut net = lift(gen_family(family, n, &base), family)?;
    if let Some(s) = cli.system {
        net.system = s;
    }
    emit(&net.to_string(), output)
}

fn cmd_lambda(term: &str, output: Option<&str>) -> Result<(), Failure> {
    let m = parse_lambda(term).map_err(|e| Failure::usage(format!("lambda term: {e}")))?;
    let net = lift(from_lambda(&m), "lambda term")?;
    emit(&net.to_string(), output)
}

fn cmd_export_dot(cli: &Cli, path: &str, output: Option<&str>) -> Result<(), Failure> {
    let loaded = load(path, cli.system)?;
    emit(&dot::to_dot(&loaded.net), output)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Check { input } => cmd_check(cli, input),
        Command::Normalize {
            input,
            strategy,
            trace,
            weights,
            output,
        } => cmd_normalize(cli, input, *strategy, *trace, *weights, output.as_deref()),
        Command::Weight { input, no_jumps } => cmd_weight(cli, input, *no_jumps),
        Command::Machine {
            input,
            start,
            no_jumps,
        } => cmd_machine(cli, input, start, *no_jumps),
        Command::Verify {
            input,
            suite,
            no_jumps,
            states,
        } => cmd_verify(cli, input, *suite, *no_jumps, *states),
        Command::Gen {
            family,
            n,
            base,
            output,
        } => cmd_gen(cli, family, *n, base, output.as_deref()),
        Command::Lambda { term, output } => cmd_lambda(term, output.as_deref()),
        Command::ExportDot { input, output } => cmd_export_dot(cli, input, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pnlab: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
