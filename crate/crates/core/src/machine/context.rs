use std::fmt;

use serde::Serialize;

use super::signature::{parse_sig_at, parse_stack_at, Elem, Sig, Sym};
use crate::error::ParseError;
use crate::net::EdgeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Pol {
    Plus,
    Minus,
}

impl Pol {
    pub fn flip(self) -> Pol {
        match self {
            Pol::Plus => Pol::Minus,
            Pol::Minus => Pol::Plus,
        }
    }

    /// `+` for an even count, `-` for an odd one.
    pub fn of_parity(n: usize) -> Pol {
        if n.is_multiple_of(2) {
            Pol::Plus
        } else {
            Pol::Minus
        }
    }
}

impl fmt::Display for Pol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pol::Plus => "+",
            Pol::Minus => "-",
        })
    }
}

/// A token state: edge, signature sequence `U`, stack `V` (top last), polarity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    pub edge: EdgeId,
    pub u: Vec<Sig>,
    pub v: Vec<Elem>,
    pub pol: Pol,
}

impl Context {
    pub fn new(edge: EdgeId, u: Vec<Sig>, v: Vec<Elem>, pol: Pol) -> Context {
        Context { edge, u, v, pol }
    }

    /// `(edge, U, t, +)`.
    pub fn copy_start(edge: EdgeId, u: Vec<Sig>, t: Sig) -> Context {
        Context {
            edge,
            u,
            v: vec![Elem::Sig(t)],
            pol: Pol::Plus,
        }
    }

    pub fn dual(&self) -> Context {
        Context {
            pol: self.pol.flip(),
            ..self.clone()
        }
    }

    /// `⌊U⌋ + ⌊V⌋`.
    pub fn sig_count(&self) -> usize {
        self.u.len() + self.v.iter().filter(|x| x.sig().is_some()).count()
    }

    pub fn sym_count(&self, s: Sym) -> usize {
        sym_count(&self.v, s)
    }

    pub fn top_sig(&self) -> Option<&Sig> {
        self.v.last().and_then(Elem::sig)
    }

    pub fn has_holes(&self) -> bool {
        self.u.iter().any(Sig::has_holes)
            || self.v.iter().any(|x| x.sig().is_some_and(Sig::has_holes))
    }

    pub fn fill(&self, h: u32, by: &Sig) -> Context {
        Context {
            edge: self.edge,
            u: self.u.iter().map(|t| t.fill(h, by)).collect(),
            v: self
                .v
                .iter()
                .map(|x| match x {
                    Elem::Sig(t) => Elem::Sig(t.fill(h, by)),
                    s => s.clone(),
                })
                .collect(),
            pol: self.pol,
        }
    }
}

pub fn sym_count(v: &[Elem], s: Sym) -> usize {
    v.iter().filter(|x| **x == Elem::Sym(s)).count()
}

/// Outcome of a final-stack test: `None` if not final, otherwise the holes
/// that must be resolved to `e` for the stack to be final.
pub type FinalReq = Option<Vec<u32>>;

fn require_e(t: &Sig) -> FinalReq {
    match t {
        Sig::E => Some(vec![]),
        Sig::Hole(h) => Some(vec![*h]),
        _ => None,
    }
}

fn join(mut a: Vec<u32>, b: FinalReq) -> FinalReq {
    let b = b?;
    a.extend(b);
    Some(a)
}

pub fn positive_final(v: &[Elem]) -> FinalReq {
    match v {
        [] => None,
        [Elem::Sig(t)] => require_e(t),
        [_] => None,
        [rest @ .., top] => match top {
            Elem::Sym(Sym::A) => negative_final(rest),
            Elem::Sym(_) => positive_final(rest),
            Elem::Sig(t) => join(require_e(t)?, positive_final(rest)),
        },
    }
}

pub fn negative_final(v: &[Elem]) -> FinalReq {
    match v {
        [] | [_] => None,
        [rest @ .., top] => match top {
            Elem::Sym(Sym::A) => positive_final(rest),
            Elem::Sym(_) | Elem::Sig(_) => negative_final(rest),
        },
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/[", self.edge)?;
        for (i, t) in self.u.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]/")?;
        for (i, x) in self.v.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "/{}", self.pol)
    }
}

/// Parses `edge/[U1,...]/v1.v2.../±`.
pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    let parts: Vec<&str> = src.split('/').collect();
    if parts.len() != 4 {
        return Err(ParseError::new(0, "expected edge/[U]/V/polarity"));
    }
    let edge: EdgeId = parts[0]
        .trim()
        .parse()
        .map_err(|_| ParseError::new(0, format!("bad edge id `{}`", parts[0])))?;
    let u_at = parts[0].len() + 1;
    let u_src = parts[1].trim();
    let inner = u_src
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| ParseError::new(u_at, "expected bracketed signature list"))?;
    let mut u = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                u.push(parse_sig_at(&inner[start..i], u_at + 1 + start)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !inner[start..].trim().is_empty() || start > 0 {
        u.push(parse_sig_at(&inner[start..], u_at + 1 + start)?);
    }
    let v_at = u_at + parts[1].len() + 1;
    let v = parse_stack_at(parts[2], v_at)?;
    let p_at = v_at + parts[2].len() + 1;
    let pol = match parts[3].trim() {
        "+" => Pol::Plus,
        "-" => Pol::Minus,
        other => return Err(ParseError::new(p_at, format!("bad polarity `{other}`"))),
    };
    Ok(Context { edge, u, v, pol })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stack(s: &str) -> Vec<Elem> {
        parse_stack_at(s, 0).unwrap()
    }

    #[test]
    fn final_stack_examples() {
        assert_eq!(negative_final(&stack("e.a.n(e,e)")), Some(vec![]));
        assert_eq!(positive_final(&stack("e.a.f.a")), Some(vec![]));
        assert_eq!(positive_final(&stack("e")), Some(vec![]));
        assert_eq!(positive_final(&stack("l(e)")), None);
        assert_eq!(negative_final(&stack("e")), None);
        assert_eq!(positive_final(&stack("o")), None);
        assert_eq!(positive_final(&stack("e.e")), Some(vec![]));
    }

    #[test]
    fn holes_become_requirements() {
        let v = vec![Elem::Sig(Sig::Hole(3))];
        assert_eq!(positive_final(&v), Some(vec![3]));
    }

    #[test]
    fn dual_is_an_involution() {
        let c = parse_context("4/[e]/e/+").unwrap();
        assert_eq!(c.dual().pol, Pol::Minus);
        assert_eq!(c.dual().dual(), c);
    }

    #[test]
    fn context_literal_roundtrip() {
        let c = parse_context("7/[n(e,l(e)),e]/e.a.x/-").unwrap();
        assert_eq!(c.u.len(), 2);
        assert_eq!(c.to_string(), "7/[n(e,l(e)),e]/e.a.x/-");
        assert_eq!(parse_context("0/[]/a/+").unwrap().u, vec![]);
        assert!(parse_context("0/[]/a/*").is_err());
        assert!(parse_context("0/[]//+").is_err());
    }
}
