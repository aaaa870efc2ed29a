use thiserror::Error;

use crate::net::{EdgeId, VertexId};

/// A syntax error with a byte offset into the parsed text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {vertex} is labelled {found}, expected {expected}")]
    WrongLabel {
        vertex: VertexId,
        expected: String,
        found: String,
    },
    #[error("edge {0} is not a box edge")]
    NotBoxEdge(EdgeId),
    #[error("rule {rule}: {msg}")]
    SideCondition { rule: String, msg: String },
    #[error("ill-typed lambda term: {0}")]
    IllTyped(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("edge {0} is not a cut")]
    CutNotPresent(EdgeId),
    #[error("corrupt net: {0}")]
    PatternMismatch(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("sequence is not canonical for edge {0}")]
    NonCanonical(EdgeId),
}

pub type Result<T> = std::result::Result<T, Error>;
