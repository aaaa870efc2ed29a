use clap::ValueEnum;

use pnlab_core::machine::Machine;
use pnlab_core::rewrite::{normalize, reduction_metrics, CutKind, MetricsBudget, Strategy};
use pnlab_core::subsystems::{check_membership, mell_bound, verify_soundness, Check};
use pnlab_core::weight::{
    audit_machine, check_steps_along, theorem_two, Item, Weigher, WeightBudget,
};
use pnlab_core::{validate, ProofNet, Result, System};

use crate::report::CheckRecord;

/// Nets up to this size are cross-checked against the generate-and-test oracle.
const ORACLE_VERTICES: usize = 10;
const ORACLE_SIZE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Structure,
    Weight,
    Machine,
    Copies,
    Rewriting,
    Soundness,
}

pub struct Options {
    pub system: System,
    pub jumps: bool,
    pub steps: u64,
    pub states: usize,
}

fn weigher<'a>(net: &'a ProofNet, jumps: bool, audited: bool) -> Weigher<'a> {
    let mut m = Machine::new(net);
    if !jumps {
        m = m.without_jumps();
    }
    if audited {
        m = m.audited();
    }
    Weigher::with_machine(net, m, WeightBudget::default())
}

fn structure(net: &ProofNet, system: System) -> Vec<Check> {
    let diags = validate(net);
    let violations = check_membership(net, system);
    vec![
        Check::new(
            "valid",
            diags.is_empty(),
            diags
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ),
        Check::new(
            &format!("member of {system}"),
            violations.is_empty(),
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ),
    ]
}

fn weight(net: &ProofNet, o: &Options) -> Result<Vec<Check>> {
    let r = weigher(net, o.jumps, false).report()?;
    let n = normalize(net, Strategy::Triangle, o.steps)?;
    if !n.complete {
        return Err(pnlab_core::Error::BudgetExhausted(format!(
            "triangle normalization after {} steps",
            o.steps
        )));
    }
    let duplications = n
        .trace
        .iter()
        .filter(|s| matches!(s.kind, CutKind::X | CutKind::N))
        .count();
    Ok(vec![
        Check::new("strictly positive", r.strictly_positive, String::new()),
        Check::new("acyclic", r.acyclic, String::new()),
        Check::new(
            "weight covers duplications",
            r.w >= duplications as i64,
            format!(
                "W = {}, duplicating steps = {duplications}{}",
                r.w,
                if o.jumps { "" } else { " (jumps off)" }
            ),
        ),
    ])
}

fn machine(net: &ProofNet, o: &Options) -> Result<Vec<Check>> {
    let w = weigher(net, o.jumps, true);
    let a = audit_machine(&w)?;
    let show = |c: Option<String>| c.unwrap_or_default();
    Ok(vec![
        Check::new(
            "reversibility",
            a.irreversible.is_none(),
            a.irreversible
                .map_or(format!("{} transitions", a.transitions), |(c, d)| {
                    format!("{c} -> {d}")
                }),
        ),
        Check::new(
            "canonicity preserved",
            a.non_canonical.is_none(),
            show(a.non_canonical.map(|c| c.to_string())),
        ),
        Check::new(
            "no stuck canonical context",
            a.stuck.is_none(),
            show(a.stuck.map(|c| c.to_string())),
        ),
        Check::new(
            "no canonical cycle",
            !a.cyclic,
            format!("{} contexts", a.contexts),
        ),
    ])
}

fn copies(net: &ProofNet, o: &Options) -> Result<Vec<Check>> {
    let w = weigher(net, o.jumps, false);
    let mut subtree = Vec::new();
    let mut oracle = Vec::new();
    let small = net.size() <= ORACLE_VERTICES;
    for e in net.box_edges() {
        for u in w.canonical_sequences(Item::Edge(e))? {
            let found = w.copies(e, &u)?;
            for t in &found {
                if !w.subtree_property(e, &u, t)? {
                    subtree.push(format!("edge {e}: {t}"));
                }
            }
            if small {
                let expected = w.oracle_copies(e, &u, ORACLE_SIZE)?;
                if expected != found {
                    oracle.push(format!("edge {e}: search {found:?}, oracle {expected:?}"));
                }
            }
        }
    }
    Ok(vec![
        Check::new("subtree property", subtree.is_empty(), subtree.join("; ")),
        Check::new(
            "search agrees with oracle",
            oracle.is_empty(),
            if small {
                oracle.join("; ")
            } else {
                format!("skipped: more than {ORACLE_VERTICES} vertices")
            },
        ),
    ])
}

fn rewriting(net: &ProofNet, o: &Options) -> Result<Vec<Check>> {
    let budget = MetricsBudget {
        max_states: o.states,
    };
    let arrow = reduction_metrics(net, Strategy::Arrow, budget)?;
    let double = reduction_metrics(net, Strategy::Double, budget)?;
    let r = Weigher::new(net).report()?;
    let bound = mell_bound(r.w.max(0) as u64, net.size() as u64);
    let steps = check_steps_along(net, Strategy::Double, o.steps)?;
    let bad: Vec<String> = steps
        .iter()
        .filter(|s| !s.holds())
        .map(|s| {
            format!(
                "{} on edge {}: W {} -> {} (expected drop {:?}), T {} -> {}",
                s.cut.kind,
                s.cut.edge,
                s.before.w,
                s.after.w,
                s.expected_drop,
                s.before.t,
                s.after.t
            )
        })
        .collect();
    let t2 = theorem_two(net, o.steps)?;
    let sums: Vec<String> = r
        .boxes
        .iter()
        .filter(|b| b.cardinality_sum() as i64 > r.w + 1)
        .map(|b| format!("edge {}: {}", b.edge, b.cardinality_sum()))
        .collect();
    Ok(vec![
        Check::new(
            "standardization",
            (arrow.steps_max, arrow.size_max) == (double.steps_max, double.size_max),
            format!(
                "arrow: {} steps, size {}; double: {} steps, size {}",
                arrow.steps_max, arrow.size_max, double.steps_max, double.size_max
            ),
        ),
        Check::new(
            "step and size bound",
            bound >= arrow.steps_max.into() && bound >= arrow.size_max.into(),
            format!(
                "{} steps, size {}, bound {bound}",
                arrow.steps_max, arrow.size_max
            ),
        ),
        Check::new(
            "monotonicity",
            bad.is_empty(),
            if bad.is_empty() {
                format!("{} steps", steps.len())
            } else {
                bad.join("; ")
            },
        ),
        Check::new(
            "exponential steps equal the weight",
            t2.holds(),
            format!(
                "W = {}, {} exponential of {} steps",
                t2.weight, t2.exponential_steps, t2.steps
            ),
        ),
        Check::new(
            "cardinality sum at most W + 1",
            sums.is_empty(),
            sums.join("; "),
        ),
    ])
}

fn soundness(net: &ProofNet, system: System) -> Result<Vec<Check>> {
    let r = verify_soundness(net, system)?;
    Ok(r.checks)
}

pub fn run(net: &ProofNet, suite: Suite, o: &Options) -> Result<Vec<CheckRecord>> {
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let mut out = Vec::new();
    let mut add = |name: &'static str, checks: Vec<Check>| {
        out.extend(checks.into_iter().map(|c| CheckRecord::new(name, c)))
    };
    if wants(Suite::Structure) {
        add("structure", structure(net, o.system));
    }
    if wants(Suite::Weight) {
        add("weight", weight(net, o)?);
    }
    if wants(Suite::Machine) {
        add("machine", machine(net, o)?);
    }
    if wants(Suite::Copies) {
        add("copies", copies(net, o)?);
    }
    if wants(Suite::Rewriting) {
        add("rewriting", rewriting(net, o)?);
    }
    if wants(Suite::Soundness) {
        add("soundness", soundness(net, o.system)?);
    }
    Ok(out)
}
