use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::machine::Context;
use crate::net::ProofNet;
use crate::rewrite::{
    fire, normalize, normalize_observed, permitted_cuts, Cut, CutKind, Normalization, Strategy,
};

use super::{Item, Weigher, WeightReport};

/// Weights on both sides of a single rewriting step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCheck {
    pub cut: Cut,
    pub before: WeightReport,
    pub after: WeightReport,
    /// Exact drop of `W` the step must produce, when one is known for its kind.
    pub expected_drop: Option<i64>,
}

impl StepCheck {
    pub fn t_decreases(&self) -> bool {
        self.before.t > self.after.t
    }

    pub fn w_matches(&self) -> bool {
        match self.expected_drop {
            Some(d) => self.before.w == self.after.w + d,
            None => self.before.w >= self.after.w,
        }
    }

    pub fn holds(&self) -> bool {
        self.t_decreases() && self.w_matches()
    }
}

/// Fires `cut` in `net` and compares the weights before and after.
pub fn check_step(net: &ProofNet, cut: Cut) -> Result<StepCheck> {
    let wg = Weigher::new(net);
    let before = wg.report()?;
    let expected_drop = match cut.kind {
        CutKind::Lolli | CutKind::Tensor | CutKind::Forall | CutKind::D | CutKind::W => Some(0),
        CutKind::Bang => {
            let mut s = 0i64;
            for u in wg.canonical_sequences(Item::Edge(cut.edge))? {
                s += wg.cardinality(cut.edge, &u)? as i64;
            }
            Some(s)
        }
        CutKind::X | CutKind::N => Some(wg.canonical_sequences(Item::Edge(cut.edge))?.len() as i64),
        CutKind::M => None,
    };
    let fired = fire(net, cut.edge)?;
    let after = Weigher::new(&fired.net).report()?;
    Ok(StepCheck {
        cut,
        before,
        after,
        expected_drop,
    })
}

/// Exponential steps under the triangle strategy against the weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremTwo {
    pub weight: i64,
    pub steps: usize,
    pub exponential_steps: usize,
    pub complete: bool,
}

impl TheoremTwo {
    pub fn holds(&self) -> bool {
        self.complete
            && self.exponential_steps as i64 == self.weight
            && self.steps as i64 >= self.weight
    }
}

pub fn theorem_two(net: &ProofNet, budget: u64) -> Result<TheoremTwo> {
    let weight = Weigher::new(net).report()?.w;
    let n = normalize(net, Strategy::Triangle, budget)?;
    Ok(TheoremTwo {
        weight,
        steps: n.steps(),
        exponential_steps: n.exponential_steps(),
        complete: n.complete,
    })
}

/// Normalization whose trace records `W` and `T` after every step.
pub fn normalize_weighted(
    net: &ProofNet,
    strategy: Strategy,
    budget: u64,
) -> Result<Normalization> {
    normalize_observed(net, strategy, budget, |g, s| {
        let r = Weigher::new(g).report()?;
        s.weight_after = Some(r.w);
        s.t_after = Some(r.t);
        Ok(())
    })
}

/// Every permitted cut of every net along the `strategy` normalization of
/// `net`, checked with [`check_step`]. The normalization follows the first
/// permitted cut.
pub fn check_steps_along(
    net: &ProofNet,
    strategy: Strategy,
    budget: u64,
) -> Result<Vec<StepCheck>> {
    let mut g = net.clone();
    let mut out = Vec::new();
    for _ in 0..budget {
        let cuts = permitted_cuts(&g, strategy);
        let Some(first) = cuts.first().copied() else {
            return Ok(out);
        };
        for c in cuts {
            out.push(check_step(&g, c)?);
        }
        g = fire(&g, first.edge)?.net;
    }
    Err(Error::BudgetExhausted(format!(
        "{} normalization after {budget} steps",
        strategy.name()
    )))
}

/// Findings of a token-machine audit over every canonical run of a net.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MachineAudit {
    pub transitions: u64,
    pub contexts: usize,
    /// A transition `c -> d` with `dual(c)` not among the successors of `dual(d)`.
    pub irreversible: Option<(Context, Context)>,
    pub non_canonical: Option<Context>,
    pub stuck: Option<Context>,
    pub cyclic: bool,
}

impl MachineAudit {
    pub fn passed(&self) -> bool {
        self.irreversible.is_none()
            && self.non_canonical.is_none()
            && self.stuck.is_none()
            && !self.cyclic
    }
}

/// Weighs the net with an audited machine, then walks every context reachable
/// from a canonical start: each must be canonical and either final or able
/// to move. `weigher` must have been built on an audited machine.
pub fn audit_machine(weigher: &Weigher) -> Result<MachineAudit> {
    let report = weigher.report()?;
    let mut seen = HashSet::new();
    let mut todo = weigher.canonical_starts()?;
    let mut audit = MachineAudit {
        cyclic: !report.acyclic,
        ..MachineAudit::default()
    };
    while let Some(c) = todo.pop() {
        if !seen.insert(c.clone()) {
            continue;
        }
        if audit.non_canonical.is_none() && !weigher.is_canonical_context(&c)? {
            audit.non_canonical = Some(c.clone());
        }
        if weigher.machine.is_final(&c) {
            continue;
        }
        let next = weigher.machine.step(&c);
        if next.is_empty() && audit.stuck.is_none() {
            audit.stuck = Some(c);
            continue;
        }
        todo.extend(next);
    }
    let log = weigher
        .machine
        .audit()
        .ok_or_else(|| Error::InvalidArgument("machine audit needs an audited machine".into()))?;
    audit.transitions = log.transitions;
    audit.contexts = seen.len();
    audit.irreversible = log.irreversible.into_iter().next();
    Ok(audit)
}
