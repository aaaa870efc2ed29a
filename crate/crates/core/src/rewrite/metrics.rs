use std::collections::HashMap;

use super::{canonical_key, fire, permitted_cuts, Strategy};
use crate::error::{Error, Result};
use crate::net::ProofNet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricsBudget {
    /// Distinct nets (up to isomorphism) the search may visit.
    pub max_states: usize,
}

impl Default for MetricsBudget {
    fn default() -> Self {
        MetricsBudget {
            max_states: 100_000,
        }
    }
}

/// Longest reduction length and largest reachable size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Metrics {
    pub steps_max: u64,
    pub size_max: usize,
    pub states: usize,
}

struct Search {
    strategy: Strategy,
    budget: MetricsBudget,
    memo: HashMap<String, (u64, usize)>,
}

impl Search {
    fn visit(&mut self, g: &ProofNet) -> Result<(u64, usize)> {
        let key = canonical_key(g);
        if let Some(r) = self.memo.get(&key) {
            return Ok(*r);
        }
        if self.memo.len() >= self.budget.max_states {
            return Err(Error::BudgetExhausted(format!(
                "reduction graph exceeds {} states",
                self.budget.max_states
            )));
        }
        let mut best = (0, g.size());
        for c in permitted_cuts(g, self.strategy) {
            let h = fire(g, c.edge)?.net;
            let (s, z) = self.visit(&h)?;
            best = (best.0.max(s + 1), best.1.max(z));
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}

/// Exact maxima over every reduction sequence the strategy permits.
pub fn reduction_metrics(
    net: &ProofNet,
    strategy: Strategy,
    budget: MetricsBudget,
) -> Result<Metrics> {
    let mut s = Search {
        strategy,
        budget,
        memo: HashMap::new(),
    };
    let (steps_max, size_max) = s.visit(net)?;
    Ok(Metrics {
        steps_max,
        size_max,
        states: s.memo.len(),
    })
}
