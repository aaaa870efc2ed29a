//! Elementary, soft and light subsystems as profiles over the MELL engine.

mod bounds;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;

use crate::error::Result;
use crate::machine::{Context, Elem, Machine, Sig};
use crate::net::{Label, ProofNet, System, VertexId};
use crate::weight::{Item, Weigher, WeightBudget, WeightReport};

pub use bounds::{bound, levels, mell_bound, Levels, Magnitude};

/// What a system allows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemProfile {
    pub system: System,
    pub labels: &'static [Label],
    /// Signature constructors that may occur along runs.
    pub constructors: &'static [&'static str],
    /// Box-jump transitions for `!`-boxes.
    pub jumps: bool,
    /// Largest number of doors of a `!`-box.
    pub bang_doors: Option<usize>,
}

use Label::*;

const MELL_LABELS: &[Label] = &[
    RLolli, LLolli, RTensor, LTensor, RAll, LAll, RBang, LBang, W, X, D, N, P, C,
];
const ELL_LABELS: &[Label] = &[
    RLolli, LLolli, RTensor, LTensor, RAll, LAll, RBang, LBang, W, X, P, C,
];
const SLL_LABELS: &[Label] = &[
    RLolli, LLolli, RTensor, LTensor, RAll, LAll, RBang, LBang, W, M, P, C,
];
const LLL_LABELS: &[Label] = &[
    RLolli, LLolli, RTensor, LTensor, RAll, LAll, RBang, LBang, RPar, LPar, W, X, P, C,
];

pub fn profile(system: System) -> SystemProfile {
    match system {
        System::Mell => SystemProfile {
            system,
            labels: MELL_LABELS,
            constructors: &["e", "l", "r", "p", "n"],
            jumps: true,
            bang_doors: None,
        },
        System::Ell => SystemProfile {
            system,
            labels: ELL_LABELS,
            constructors: &["e", "l", "r"],
            jumps: true,
            bang_doors: None,
        },
        System::Sll => SystemProfile {
            system,
            labels: SLL_LABELS,
            constructors: &["e", "m"],
            jumps: true,
            bang_doors: None,
        },
        System::Lll => SystemProfile {
            system,
            labels: LLL_LABELS,
            constructors: &["e", "l", "r"],
            jumps: true,
            bang_doors: Some(1),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: Option<VertexId>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.vertex {
            Some(v) => write!(f, "vertex {v}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Rule-level membership of `net` in `system`: labels and box disciplines.
pub fn check_membership(net: &ProofNet, system: System) -> Vec<Violation> {
    let p = profile(system);
    let mut out = Vec::new();
    for (id, v) in &net.vertices {
        if !p.labels.contains(&v.label) {
            out.push(Violation {
                vertex: Some(*id),
                message: format!("label {} is not a rule of {system}", v.label.name()),
            });
        }
    }
    for (r, rec) in &net.boxes {
        let kind = net.label(*r);
        if kind == RBang {
            if let Some(max) = p.bang_doors {
                if rec.doors.len() > max {
                    out.push(Violation {
                        vertex: Some(*r),
                        message: format!(
                            "!-box with {} premises, at most {max} allowed",
                            rec.doors.len()
                        ),
                    });
                }
            }
            for d in &rec.doors {
                if net.label(*d) != LBang {
                    out.push(Violation {
                        vertex: Some(*d),
                        message: "!-box with a paragraph door".into(),
                    });
                }
            }
        }
    }
    out
}

/// Outcome of an invariant checked on a concrete net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Check {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Every context reachable from `starts`, up to `budget` contexts.
fn reachable(m: &Machine, starts: &[Context], budget: usize) -> Vec<Context> {
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    let mut todo: Vec<Context> = starts.to_vec();
    while let Some(c) = todo.pop() {
        if order.len() >= budget || !seen.insert(c.clone()) {
            continue;
        }
        todo.extend(m.step(&c));
        order.push(c);
    }
    order
}

const REACH_BUDGET: usize = 1_000_000;

/// Signature count preserved on every transition executed while weighing the net.
/// Returns the number of audited transitions and the first violating one.
pub fn check_stratification(net: &ProofNet) -> Result<(u64, Option<(Context, Context)>)> {
    let w = Weigher::with_machine(net, Machine::new(net).audited(), WeightBudget::default());
    let starts = w.canonical_starts()?;
    w.report()?;
    reachable(&w.machine, &starts, REACH_BUDGET);
    let audit = w.machine.audit().expect("audited machine");
    Ok((audit.transitions, audit.count_changes.into_iter().next()))
}

/// A reachable context with more than one successor, if any.
pub fn check_determinacy(net: &ProofNet) -> Result<Option<Context>> {
    let w = Weigher::new(net);
    let starts = w.canonical_starts()?;
    Ok(reachable(&w.machine, &starts, REACH_BUDGET)
        .into_iter()
        .find(|c| w.machine.step(c).len() > 1))
}

/// The final context a deterministic run reaches, if it reaches one.
fn terminal(m: &Machine, start: &Context) -> Option<Context> {
    let mut c = start.clone();
    let mut seen = HashSet::new();
    loop {
        if m.is_final(&c) {
            return Some(c);
        }
        if !seen.insert(c.clone()) {
            return None;
        }
        c = m.step(&c).into_iter().next()?;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub system: System,
    pub size: usize,
    pub depth: usize,
    pub weight: WeightReport,
    pub bound: Magnitude,
    pub checks: Vec<Check>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks the weight bound of `system` and its supporting per-box inequalities.
pub fn verify_soundness(net: &ProofNet, system: System) -> Result<SoundnessReport> {
    let size = net.size();
    let depth = net.max_depth();
    let wg = Weigher::new(net);
    let weight = wg.report()?;
    let mut checks = Vec::new();

    let violations = check_membership(net, system);
    checks.push(Check::new(
        "membership",
        violations.is_empty(),
        violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    ));

    let b = match system {
        System::Mell => Magnitude::Exact(mell_bound(weight.w.max(0) as u64, size as u64)),
        _ => bound(system, depth, size as u64),
    };
    match system {
        System::Mell => {
            let t = BigUint::from(weight.t.max(0) as u64);
            checks.push(Check::new(
                "T within (2|G|^2+|G|)(W+1)",
                b.admits(&t) && weight.t >= size as i64,
                format!("|G| = {size}, T = {}, bound = {b}", weight.t),
            ));
        }
        _ => checks.push(Check::new(
            "weight bound",
            b.admits_i64(weight.w),
            format!("W = {}, p_{depth}({size}) = {b}", weight.w),
        )),
    }

    let sizes = BigUint::from(size as u64);
    let lv = match system {
        System::Ell | System::Lll => Some(levels(system, depth, size as u64)),
        _ => None,
    };
    let mut per_box = Vec::new();
    for bx in &weight.boxes {
        let n = bx.entries.len() as u64;
        match (&lv, system) {
            (Some(l), _) => {
                if !l.r[bx.depth].admits(&BigUint::from(n)) {
                    per_box.push(format!("edge {}: |L| = {n} > r_{}", bx.edge, bx.depth));
                }
                for en in &bx.entries {
                    if !l.q[bx.depth].admits(&BigUint::from(en.cardinality)) {
                        per_box.push(format!(
                            "edge {}: R = {} > q_{}",
                            bx.edge, en.cardinality, bx.depth
                        ));
                    }
                }
            }
            (None, System::Sll) => {
                if BigUint::from(n) > sizes.pow(bx.depth as u32) {
                    per_box.push(format!("edge {}: |L| = {n} > |G|^{}", bx.edge, bx.depth));
                }
                for en in &bx.entries {
                    if en.cardinality > size as u64 {
                        per_box.push(format!("edge {}: R = {} > |G|", bx.edge, en.cardinality));
                    }
                }
            }
            _ => {
                let total = bx.cardinality_sum() as i64;
                if total > weight.w + 1 {
                    per_box.push(format!("edge {}: sum of R = {total} > W + 1", bx.edge));
                }
            }
        }
    }
    checks.push(Check::new(
        "per-box bounds",
        per_box.is_empty(),
        per_box.join("; "),
    ));

    match system {
        System::Ell => {
            let (n, bad) = check_stratification(net)?;
            checks.push(Check::new(
                "stratification",
                bad.is_none(),
                match bad {
                    Some((c, d)) => format!("{c} -> {d}"),
                    None => format!("{n} transitions"),
                },
            ));
        }
        System::Sll => {
            let starts = wg.canonical_starts()?;
            let mut bad = None;
            'outer: for s in &starts {
                let Some(Elem::Sig(t)) = s.v.first() else {
                    continue;
                };
                for c in reachable(&wg.machine, std::slice::from_ref(s), REACH_BUDGET) {
                    if c.v.first() != Some(&Elem::Sig(t.clone())) {
                        bad = Some((s.clone(), c));
                        break 'outer;
                    }
                }
            }
            checks.push(Check::new(
                "bottom signature kept",
                bad.is_none(),
                bad.map(|(s, c)| format!("{s} reaches {c}"))
                    .unwrap_or_default(),
            ));
        }
        System::Lll => {
            let witness = check_determinacy(net)?;
            checks.push(Check::new(
                "strong determinacy",
                witness.is_none(),
                witness
                    .map(|c| format!("{c} has several successors"))
                    .unwrap_or_default(),
            ));
            let mut clash = Vec::new();
            for e in net.box_edges() {
                for u in wg.canonical_sequences(Item::Edge(e))? {
                    let mut ends: BTreeMap<String, Sig> = BTreeMap::new();
                    for t in wg.copies(e, &u)? {
                        if let Some(end) =
                            terminal(&wg.machine, &Context::copy_start(e, u.clone(), t.clone()))
                        {
                            if let Some(prev) = ends.insert(end.to_string(), t.clone()) {
                                clash.push(format!("edge {e}: {prev} and {t} end at {end}"));
                            }
                        }
                    }
                }
            }
            checks.push(Check::new(
                "copies end apart",
                clash.is_empty(),
                clash.join("; "),
            ));
        }
        System::Mell => {}
    }

    let signs: BTreeSet<&str> = weight
        .boxes
        .iter()
        .flat_map(|b| b.entries.iter())
        .flat_map(|e| e.copies.iter().chain(e.sequence.iter()))
        .flat_map(constructors)
        .collect();
    let allowed = profile(system).constructors;
    let extra: Vec<&str> = signs.into_iter().filter(|s| !allowed.contains(s)).collect();
    checks.push(Check::new(
        "signature alphabet",
        extra.is_empty(),
        extra.join(", "),
    ));

    Ok(SoundnessReport {
        system,
        size,
        depth,
        bound: b,
        weight,
        checks,
    })
}

fn constructors(t: &Sig) -> Vec<&'static str> {
    let mut out = Vec::new();
    let mut todo = vec![t];
    while let Some(t) = todo.pop() {
        match t {
            Sig::E => out.push("e"),
            Sig::L(a) => {
                out.push("l");
                todo.push(a);
            }
            Sig::R(a) => {
                out.push("r");
                todo.push(a);
            }
            Sig::P(a) => {
                out.push("p");
                todo.push(a);
            }
            Sig::N(a, b) => {
                out.push("n");
                todo.push(a);
                todo.push(b);
            }
            Sig::M(_) => out.push("m"),
            Sig::Hole(_) => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::frontend::{dr_ladder, elaborate, from_lambda, parse_lambda, parse_proof_term};

    #[test]
    fn ladder_belongs_everywhere() {
        let g = dr_ladder(3, &Formula::atom("a")).unwrap();
        for s in [System::Mell, System::Ell, System::Sll, System::Lll] {
            assert_eq!(check_membership(&g, s), vec![]);
            assert!(verify_soundness(&g, s).unwrap().passed(), "{s}");
        }
    }

    #[test]
    fn dereliction_is_not_elementary() {
        let g = from_lambda(&parse_lambda("(\\x. y x x) z").unwrap()).unwrap();
        let v = check_membership(&g, System::Ell);
        assert!(v.iter().any(|v| v.message.contains("D")));
        let (_, bad) = check_stratification(&g).unwrap();
        assert!(bad.is_some());
    }

    #[test]
    fn two_premise_bang_box_is_not_light() {
        let g = elaborate(&parse_proof_term("(prom (rtensor (ax a) (ax b)))").unwrap()).unwrap();
        let v = check_membership(&g, System::Lll);
        assert!(v.iter().any(|v| v.message.contains("premises")), "{v:?}");
    }
}
