use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{find_cuts, fire, Cut, CutKind, Fired};
use crate::error::{Error, Result};
use crate::net::{EdgeId, ProofNet};

/// Which cuts may fire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Any cut.
    Arrow,
    /// Weakening cuts only once every cut is a weakening cut.
    Double,
    /// Level by level, on top of `Double`.
    Triangle,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Arrow, Strategy::Double, Strategy::Triangle];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Arrow => "arrow",
            Strategy::Double => "double",
            Strategy::Triangle => "triangle",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Strategy> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown strategy `{s}`")))
    }
}

/// Cuts the strategy allows to fire, lowest level first, then lowest edge id.
pub fn permitted_cuts(net: &ProofNet, strategy: Strategy) -> Vec<Cut> {
    let all = find_cuts(net);
    let only_w = all.iter().all(|c| c.kind == CutKind::W);
    let mut out: Vec<Cut> = all
        .iter()
        .copied()
        .filter(|c| match strategy {
            Strategy::Arrow => true,
            Strategy::Double => c.kind != CutKind::W || only_w,
            Strategy::Triangle => {
                (c.kind != CutKind::W || only_w)
                    && all
                        .iter()
                        .all(|d| d.level >= c.level || d.kind == CutKind::W)
                    && (c.kind != CutKind::Bang
                        || all.iter().all(|d| {
                            d.level != c.level || matches!(d.kind, CutKind::W | CutKind::Bang)
                        }))
            }
        })
        .collect();
    out.sort_by_key(|c| (c.level, c.edge));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub index: usize,
    pub kind: CutKind,
    pub edge: EdgeId,
    pub level: usize,
    pub size_after: usize,
    pub weight_after: Option<i64>,
    pub t_after: Option<i64>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.index, self.kind, self.edge, self.level, self.size_after
        )?;
        if let (Some(w), Some(t)) = (self.weight_after, self.t_after) {
            write!(f, " {w} {t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Normalization {
    pub net: ProofNet,
    pub trace: Vec<TraceStep>,
    /// False when the step budget ran out before a normal form.
    pub complete: bool,
}

impl Normalization {
    pub fn steps(&self) -> usize {
        self.trace.len()
    }

    pub fn exponential_steps(&self) -> usize {
        self.trace
            .iter()
            .filter(|s| s.kind.is_exponential())
            .count()
    }
}

/// Fires the first permitted cut, if any.
pub fn step(net: &ProofNet, strategy: Strategy) -> Result<Option<(Cut, Fired)>> {
    match permitted_cuts(net, strategy).first() {
        Some(c) => Ok(Some((*c, fire(net, c.edge)?))),
        None => Ok(None),
    }
}

pub fn normalize(net: &ProofNet, strategy: Strategy, budget: u64) -> Result<Normalization> {
    normalize_observed(net, strategy, budget, |_, _| Ok(()))
}

/// Like [`normalize`], letting `observe` annotate each step with the net it produced.
pub fn normalize_observed(
    net: &ProofNet,
    strategy: Strategy,
    budget: u64,
    mut observe: impl FnMut(&ProofNet, &mut TraceStep) -> Result<()>,
) -> Result<Normalization> {
    let mut g = net.clone();
    let mut trace = Vec::new();
    loop {
        if permitted_cuts(&g, strategy).is_empty() {
            return Ok(Normalization {
                net: g,
                trace,
                complete: true,
            });
        }
        if trace.len() as u64 >= budget {
            return Ok(Normalization {
                net: g,
                trace,
                complete: false,
            });
        }
        let (cut, fired) = step(&g, strategy)?.expect("a permitted cut");
        g = fired.net;
        let mut s = TraceStep {
            index: trace.len() + 1,
            kind: cut.kind,
            edge: cut.edge,
            level: cut.level,
            size_after: g.size(),
            weight_after: None,
            t_after: None,
        };
        observe(&g, &mut s)?;
        trace.push(s);
    }
}
