//! Machine-readable report, schema `pnlab-report/1`.
//!
//! Every section except `timing` is a pure function of the input and flags.
//! `timing` is present only when requested.

use serde::Serialize;

use pnlab_core::rewrite::{Normalization, TraceStep};
use pnlab_core::subsystems::Check;
use pnlab_core::weight::{BoxWeight, WeightReport};
use pnlab_core::ProofNet;

pub const SCHEMA: &str = "pnlab-report/1";

#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub input: Input,
    pub system: String,
    pub net: Stats,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub normalization: Vec<NormalizationRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Serialize)]
pub struct Input {
    pub sha256: String,
    pub kind: &'static str,
}

#[derive(Serialize)]
pub struct Stats {
    pub size: usize,
    pub depth: usize,
    pub boxes: usize,
    pub edges: usize,
}

impl Stats {
    pub fn of(net: &ProofNet) -> Stats {
        Stats {
            size: net.size(),
            depth: net.max_depth(),
            boxes: net.boxes.len(),
            edges: net.edges.len(),
        }
    }
}

#[derive(Serialize)]
pub struct TraceRecord {
    pub index: usize,
    pub kind: String,
    pub edge: u32,
    pub level: usize,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
}

impl From<&TraceStep> for TraceRecord {
    fn from(s: &TraceStep) -> Self {
        TraceRecord {
            index: s.index,
            kind: s.kind.to_string(),
            edge: s.edge,
            level: s.level,
            size: s.size_after,
            w: s.weight_after,
            t: s.t_after,
        }
    }
}

#[derive(Serialize)]
pub struct NormalizationRecord {
    pub strategy: &'static str,
    pub steps: usize,
    pub exponential_steps: usize,
    pub final_size: usize,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRecord>>,
    pub normal_form: String,
}

impl NormalizationRecord {
    pub fn new(strategy: &'static str, n: &Normalization, with_trace: bool) -> Self {
        NormalizationRecord {
            strategy,
            steps: n.steps(),
            exponential_steps: n.exponential_steps(),
            final_size: n.net.size(),
            complete: n.complete,
            trace: with_trace.then(|| n.trace.iter().map(TraceRecord::from).collect()),
            normal_form: n.net.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct SequenceRecord {
    pub sequence: Vec<String>,
    pub copies: Vec<String>,
    pub cardinality: u64,
}

#[derive(Serialize)]
pub struct BoxRecord {
    pub edge: u32,
    pub principal: u32,
    pub depth: usize,
    pub premises: usize,
    pub sequences: Vec<SequenceRecord>,
}

impl From<&BoxWeight> for BoxRecord {
    fn from(b: &BoxWeight) -> Self {
        BoxRecord {
            edge: b.edge,
            principal: b.principal,
            depth: b.depth,
            premises: b.premise_count,
            sequences: b
                .entries
                .iter()
                .map(|e| SequenceRecord {
                    sequence: e.sequence.iter().map(|s| s.to_string()).collect(),
                    copies: e.copies.iter().map(|s| s.to_string()).collect(),
                    cardinality: e.cardinality,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct WeightRecord {
    pub w: i64,
    pub t: i64,
    pub interior: u64,
    pub strictly_positive: bool,
    pub acyclic: bool,
    pub jumps: bool,
    pub boxes: Vec<BoxRecord>,
}

impl WeightRecord {
    pub fn new(r: &WeightReport, jumps: bool) -> Self {
        WeightRecord {
            w: r.w,
            t: r.t,
            interior: r.interior,
            strictly_positive: r.strictly_positive,
            acyclic: r.acyclic,
            jumps,
            boxes: r.boxes.iter().map(BoxRecord::from).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckRecord {
    pub fn new(suite: &'static str, c: Check) -> Self {
        CheckRecord {
            suite,
            name: c.name,
            passed: c.passed,
            detail: c.detail,
        }
    }
}

#[derive(Serialize)]
pub struct Timing {
    pub seconds: f64,
}
