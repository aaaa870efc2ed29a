use std::fs;
use std::io::Read;

use sha2::{Digest, Sha256};

use pnlab_core::frontend::{elaborate, elaborate_in, parse_proof_term};
use pnlab_core::{parse_net, ProofNet, System};

use crate::Failure;

/// How an input net was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Net,
    ProofTerm,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Net => "net",
            Kind::ProofTerm => "proof-term",
        }
    }
}

pub struct Loaded {
    pub net: ProofNet,
    pub kind: Kind,
    pub digest: String,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))
    }
}

/// First token that is not inside a `#` comment.
fn leading(text: &str) -> Option<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
}

/// Reads a serialized net or a proof term. Proof terms are elaborated in
/// `system` when given, otherwise in the smallest system admitting them.
pub fn load(path: &str, system: Option<System>) -> Result<Loaded, Failure> {
    let text = read(path)?;
    let digest = digest(text.as_bytes());
    match leading(&text) {
        Some(l) if l.starts_with("proofnet") => {
            let net = parse_net(&text).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
            Ok(Loaded {
                net,
                kind: Kind::Net,
                digest,
            })
        }
        Some(l) if l.starts_with('(') => {
            let term = parse_proof_term(text.trim())
                .map_err(|e| Failure::usage(format!("{path}: {e}")))?;
            let net = match system {
                Some(s) => elaborate_in(&term, s),
                None => elaborate(&term),
            }
            .map_err(|e| Failure::from_error(&e, path))?;
            Ok(Loaded {
                net,
                kind: Kind::ProofTerm,
                digest,
            })
        }
        _ => Err(Failure::usage(format!(
            "{path}: expected a `proofnet` document or a proof term"
        ))),
    }
}

/// Writes `text` to `path`, or to standard output when `path` is absent.
pub fn emit(text: &str, path: Option<&str>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
