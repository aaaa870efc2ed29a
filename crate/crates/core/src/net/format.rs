//! Line-oriented text format for proof-nets.
//!
//! ```text
//! proofnet 1
//! system MELL
//! vertex <id> <label> [<ports>]          # port count only for M
//! edge <id> <src>:<port> -> <tgt>:<port> : <formula>
//! box <principal> doors <id>* contents <id>*
//! ```
//!
//! Blank lines and `#` comments are ignored. Printing lists vertices, edges
//! and boxes in increasing id order, so `parse(print(g)) == g`.
//!
//! Port layouts (index: role):
//!
//! | label   | ports |
//! |---------|-------|
//! | P       | 0 out |
//! | C, W    | 0 in |
//! | Rlolli  | 0 bound variable (out), 1 body (in), 2 conclusion (out) |
//! | Llolli  | 0 function (in), 1 argument (in), 2 result (out) |
//! | Rtensor | 0 left (in), 1 right (in), 2 conclusion (out) |
//! | Ltensor | 0 pair (in), 1 left (out), 2 right (out) |
//! | Rall, Lall, D, N | 0 in, 1 out |
//! | X       | 0 in, 1 left copy (out), 2 right copy (out) |
//! | Lbang, Lpar | 0 outer (in), 1 inner (out) |
//! | Rbang, Rpar | 0 inner (in), 1 principal (out) |
//! | M       | 0 in, 1..=k copies (out) |

use std::collections::BTreeSet;
use std::fmt;

use super::{BoxRecord, Label, ProofNet, System};
use crate::error::ParseError;
use crate::formula::parse_formula_at;

impl fmt::Display for ProofNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "proofnet 1")?;
        writeln!(f, "system {}", self.system)?;
        for (id, v) in &self.vertices {
            if v.label == Label::M {
                writeln!(f, "vertex {id} M {}", v.ports.len())?;
            } else {
                writeln!(f, "vertex {id} {}", v.label)?;
            }
        }
        for (id, e) in &self.edges {
            writeln!(
                f,
                "edge {id} {}:{} -> {}:{} : {}",
                e.src, e.src_port, e.tgt, e.tgt_port, e.formula
            )?;
        }
        for (r, b) in &self.boxes {
            write!(f, "box {r} doors")?;
            for d in &b.doors {
                write!(f, " {d}")?;
            }
            write!(f, " contents")?;
            for c in &b.content {
                write!(f, " {c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Words<'a> {
    line: &'a str,
    base: usize,
    pos: usize,
}

impl<'a> Words<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let rest = &self.line[self.pos..];
        let trimmed = rest.trim_start();
        if trimmed.is_empty() {
            return None;
        }
        let start = self.pos + (rest.len() - trimmed.len());
        let len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        self.pos = start + len;
        Some((self.base + start, &self.line[start..start + len]))
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let end = self.base + self.line.len();
        self.next()
            .ok_or_else(|| ParseError::new(end, format!("expected {what}")))
    }

    fn number(&mut self, what: &str) -> Result<u32, ParseError> {
        let (at, w) = self.expect(what)?;
        w.parse()
            .map_err(|_| ParseError::new(at, format!("expected {what}, found `{w}`")))
    }
}

fn endpoint(at: usize, w: &str) -> Result<(u32, usize), ParseError> {
    let bad = || ParseError::new(at, format!("expected <vertex>:<port>, found `{w}`"));
    let (v, p) = w.split_once(':').ok_or_else(bad)?;
    Ok((v.parse().map_err(|_| bad())?, p.parse().map_err(|_| bad())?))
}

pub fn parse_net(src: &str) -> Result<ProofNet, ParseError> {
    let mut net = ProofNet::new(System::Mell);
    let mut header = false;
    let mut pending_edges = Vec::new();
    let mut offset = 0;
    for raw in src.split_inclusive('\n') {
        let base = offset;
        offset += raw.len();
        let line = raw.split('#').next().unwrap_or("").trim_end();
        let mut w = Words { line, base, pos: 0 };
        let Some((at, kw)) = w.next() else { continue };
        if !header {
            if kw != "proofnet" {
                return Err(ParseError::new(at, "expected `proofnet 1` header"));
            }
            let (vat, ver) = w.expect("version")?;
            if ver != "1" {
                return Err(ParseError::new(vat, format!("unsupported version `{ver}`")));
            }
            header = true;
            continue;
        }
        match kw {
            "system" => {
                let (sat, s) = w.expect("system tag")?;
                net.system = s
                    .parse()
                    .map_err(|_| ParseError::new(sat, format!("unknown system `{s}`")))?;
            }
            "vertex" => {
                let id = w.number("vertex id")?;
                let (lat, l) = w.expect("label")?;
                let label: Label = l
                    .parse()
                    .map_err(|_| ParseError::new(lat, format!("unknown label `{l}`")))?;
                let arity = match label.fixed_arity() {
                    Some(n) => n,
                    None => w.number("port count")? as usize,
                };
                if net.vertices.contains_key(&id) {
                    return Err(ParseError::new(at, format!("duplicate vertex {id}")));
                }
                net.insert_vertex(id, label, arity);
            }
            "edge" => {
                let id = w.number("edge id")?;
                let (sat, s) = w.expect("source")?;
                let src = endpoint(sat, s)?;
                let (aat, arrow) = w.expect("`->`")?;
                if arrow != "->" {
                    return Err(ParseError::new(aat, "expected `->`"));
                }
                let (tat, t) = w.expect("target")?;
                let tgt = endpoint(tat, t)?;
                let (cat, colon) = w.expect("`:`")?;
                if colon != ":" {
                    return Err(ParseError::new(cat, "expected `:`"));
                }
                let fstart = w.pos;
                let formula = parse_formula_at(&line[fstart..], base + fstart)?;
                pending_edges.push((at, id, src, tgt, formula));
            }
            "box" => {
                let r = w.number("principal vertex")?;
                let (dat, d) = w.expect("`doors`")?;
                if d != "doors" {
                    return Err(ParseError::new(dat, "expected `doors`"));
                }
                let mut doors = Vec::new();
                let mut content = BTreeSet::new();
                let mut in_content = false;
                while let Some((xat, x)) = w.next() {
                    if x == "contents" && !in_content {
                        in_content = true;
                        continue;
                    }
                    let n: u32 = x.parse().map_err(|_| {
                        ParseError::new(xat, format!("expected vertex id, found `{x}`"))
                    })?;
                    if in_content {
                        content.insert(n);
                    } else {
                        doors.push(n);
                    }
                }
                if !in_content {
                    return Err(ParseError::new(base + line.len(), "expected `contents`"));
                }
                net.boxes.insert(r, BoxRecord { doors, content });
            }
            other => return Err(ParseError::new(at, format!("unknown directive `{other}`"))),
        }
        if !matches!(kw, "edge") {
            if let Some((xat, x)) = w.next() {
                return Err(ParseError::new(xat, format!("trailing token `{x}`")));
            }
        }
    }
    if !header {
        return Err(ParseError::new(src.len(), "missing `proofnet 1` header"));
    }
    for (at, id, src, tgt, formula) in pending_edges {
        for (v, p) in [src, tgt] {
            match net.vertices.get(&v) {
                None => {
                    return Err(ParseError::new(
                        at,
                        format!("edge {id} mentions unknown vertex {v}"),
                    ))
                }
                Some(vx) if p >= vx.ports.len() => {
                    return Err(ParseError::new(at, format!("vertex {v} has no port {p}")))
                }
                Some(vx) if vx.ports[p].is_some() => {
                    return Err(ParseError::new(at, format!("port {v}:{p} used twice")))
                }
                _ => {}
            }
        }
        if net.edges.contains_key(&id) {
            return Err(ParseError::new(at, format!("duplicate edge {id}")));
        }
        net.insert_edge(id, src, tgt, formula);
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOXED: &str =
        "proofnet 1\nsystem MELL\nvertex 0 P\nvertex 1 Lbang\nvertex 2 Rbang\nvertex 3 C\n\
edge 0 0:0 -> 1:0 : !a\nedge 1 1:1 -> 2:0 : a\nedge 2 2:1 -> 3:0 : !a\nbox 2 doors 1 contents\n";

    #[test]
    fn roundtrip_text() {
        let g = parse_net(BOXED).unwrap();
        assert_eq!(g.to_string(), BOXED);
        assert_eq!(parse_net(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_net("proofnet 1\nvertex 0 Q\n").unwrap_err();
        assert_eq!(e.pos, "proofnet 1\nvertex 0 ".len());
        let e = parse_net("proofnet 1\nvertex 0 P\nvertex 1 C\nedge 0 0:0 -> 1:0 : a -o\n")
            .unwrap_err();
        assert!(e.msg.contains("end of formula"));
        assert!(parse_net("vertex 0 P").is_err());
    }

    #[test]
    fn multiplexer_arity_is_kept() {
        let src = "proofnet 1\nsystem SLL\nvertex 0 M 3\n";
        let g = parse_net(src).unwrap();
        assert_eq!(g.arity(0), 3);
        assert_eq!(g.to_string(), src);
    }
}
