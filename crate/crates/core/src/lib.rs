//! Proof-nets for multiplicative-exponential linear logic and its light
//! subsystems: construction, cut elimination, context semantics and weights.

pub mod error;
pub mod formula;
pub mod frontend;
pub mod machine;
pub mod net;
pub mod rewrite;
pub mod subsystems;
pub mod weight;

pub use error::{Error, ParseError, Result};
pub use formula::{parse_formula, substitute, Formula};
pub use net::{parse_net, validate, Diagnostic, EdgeId, Label, ProofNet, System, VertexId};
