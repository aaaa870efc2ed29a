use std::cell::{Cell, RefCell};
use std::collections::{HashMap, HashSet};

use super::{Context, Machine};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Final {
        context: Context,
        steps: u64,
    },
    Stuck {
        context: Context,
        steps: u64,
    },
    Cycle {
        context: Context,
        steps: u64,
    },
    Branched {
        context: Context,
        steps: u64,
        branches: Vec<RunOutcome>,
    },
    BudgetExhausted {
        context: Context,
        steps: u64,
    },
}

impl RunOutcome {
    /// Leaves of the outcome tree.
    pub fn leaves(&self) -> Vec<&RunOutcome> {
        match self {
            RunOutcome::Branched { branches, .. } => {
                branches.iter().flat_map(|b| b.leaves()).collect()
            }
            other => vec![other],
        }
    }

    pub fn finals(&self) -> Vec<&Context> {
        self.leaves()
            .into_iter()
            .filter_map(|l| match l {
                RunOutcome::Final { context, .. } => Some(context),
                _ => None,
            })
            .collect()
    }

    pub fn is_exhausted(&self) -> bool {
        self.leaves()
            .iter()
            .any(|l| matches!(l, RunOutcome::BudgetExhausted { .. }))
    }

    /// Width of the branch tree (number of leaves).
    pub fn width(&self) -> usize {
        self.leaves().len()
    }
}

/// Budgeted explorer of machine runs, with an optional transition trace.
pub struct Runner<'m, 'a> {
    pub machine: &'m Machine<'a>,
    budget: u64,
    used: Cell<u64>,
    trace: Option<RefCell<Vec<Context>>>,
    reach_memo: RefCell<HashMap<Context, bool>>,
}

impl<'m, 'a> Runner<'m, 'a> {
    pub fn new(machine: &'m Machine<'a>, budget: u64) -> Self {
        Runner {
            machine,
            budget,
            used: Cell::new(0),
            trace: None,
            reach_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(RefCell::new(Vec::new()));
        self
    }

    pub fn trace(&self) -> Vec<Context> {
        self.trace
            .as_ref()
            .map(|t| t.borrow().clone())
            .unwrap_or_default()
    }

    pub fn steps_used(&self) -> u64 {
        self.used.get()
    }

    /// Depth-first exploration from `start`; cycles are detected per branch.
    pub fn run(&self, start: &Context) -> RunOutcome {
        self.explore(start.clone(), HashSet::new(), 0)
    }

    fn explore(&self, mut c: Context, mut seen: HashSet<Context>, mut steps: u64) -> RunOutcome {
        loop {
            if let Some(t) = &self.trace {
                t.borrow_mut().push(c.clone());
            }
            if self.machine.is_final(&c) {
                return RunOutcome::Final { context: c, steps };
            }
            if !seen.insert(c.clone()) {
                return RunOutcome::Cycle { context: c, steps };
            }
            if self.used.get() >= self.budget {
                return RunOutcome::BudgetExhausted { context: c, steps };
            }
            let mut next = self.machine.step(&c);
            self.used.set(self.used.get() + 1);
            match next.len() {
                0 => return RunOutcome::Stuck { context: c, steps },
                1 => {
                    c = next.pop().expect("one successor");
                    steps += 1;
                }
                _ => {
                    let branches = next
                        .into_iter()
                        .map(|d| self.explore(d, seen.clone(), steps + 1))
                        .collect();
                    return RunOutcome::Branched {
                        context: c,
                        steps,
                        branches,
                    };
                }
            }
        }
    }

    /// Whether some run from `start` reaches a final context.
    pub fn reaches_final(&self, start: &Context) -> Result<bool> {
        if let Some(r) = self.reach_memo.borrow().get(start) {
            return Ok(*r);
        }
        let r = self.reach(start.clone(), &mut HashSet::new())?;
        self.reach_memo.borrow_mut().insert(start.clone(), r);
        Ok(r)
    }

    fn reach(&self, mut c: Context, seen: &mut HashSet<Context>) -> Result<bool> {
        let mut path = Vec::new();
        let out = loop {
            if self.machine.is_final(&c) {
                break true;
            }
            if !seen.insert(c.clone()) {
                break false;
            }
            path.push(c.clone());
            if self.used.get() >= self.budget {
                return Err(Error::BudgetExhausted(format!("machine run from {c}")));
            }
            let mut next = self.machine.step(&c);
            self.used.set(self.used.get() + 1);
            match next.len() {
                0 => break false,
                1 => c = next.pop().expect("one successor"),
                _ => {
                    let mut found = false;
                    for d in next {
                        if self.reach(d, seen)? {
                            found = true;
                            break;
                        }
                    }
                    break found;
                }
            }
        };
        for p in path {
            seen.remove(&p);
        }
        Ok(out)
    }
}
