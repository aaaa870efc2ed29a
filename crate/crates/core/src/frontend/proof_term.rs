//! S-expression proof terms, one constructor per sequent rule.
//!
//! ```text
//! term ::= (ax F)                 A |- A
//!        | (cut T T i)            cut the first conclusion into premise i of the second
//!        | (weak T F)             add premise F (which must be banged)
//!        | (contr T i j)          merge equal banged premises i and j (kept at i)
//!        | (rlolli T i)           discharge premise i
//!        | (llolli T T i)         premise i of the second becomes the result of A -o B
//!        | (rtensor T T)
//!        | (ltensor T i j)        premises i, j become i * j (kept at i)
//!        | (prom T)               box; every premise A becomes !A
//!        | (der T i)              premise i: A becomes !A
//!        | (dig T i)              premise i: !!A becomes !A
//!        | (rall T a)
//!        | (lall T i F)           F = forall a. A, premise i must be an instance of A
//!        | (mux T i1 ... ik)      equal premises A become one !A (soft)
//!        | (psec T k)             paragraph box; first k premises get ! doors
//! F    ::= atom | [ formula ]
//! ```
//!
//! Premise indices are 1-based. Premises keep their positions except where a
//! rule discharges them; `weak` and `llolli` append their new premise, `cut`
//! lists the first term's premises before the second's.

use std::fmt;

use crate::error::ParseError;
use crate::formula::{parse_formula_at, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofTerm {
    Ax(Formula),
    Cut(Box<ProofTerm>, Box<ProofTerm>, usize),
    Weak(Box<ProofTerm>, Formula),
    Contr(Box<ProofTerm>, usize, usize),
    RLolli(Box<ProofTerm>, usize),
    LLolli(Box<ProofTerm>, Box<ProofTerm>, usize),
    RTensor(Box<ProofTerm>, Box<ProofTerm>),
    LTensor(Box<ProofTerm>, usize, usize),
    Prom(Box<ProofTerm>),
    Der(Box<ProofTerm>, usize),
    Dig(Box<ProofTerm>, usize),
    RAll(Box<ProofTerm>, String),
    LAll(Box<ProofTerm>, usize, Formula),
    Mux(Box<ProofTerm>, Vec<usize>),
    PSec(Box<ProofTerm>, usize),
}

impl ProofTerm {
    pub fn rule_name(&self) -> &'static str {
        match self {
            ProofTerm::Ax(_) => "ax",
            ProofTerm::Cut(..) => "cut",
            ProofTerm::Weak(..) => "weak",
            ProofTerm::Contr(..) => "contr",
            ProofTerm::RLolli(..) => "rlolli",
            ProofTerm::LLolli(..) => "llolli",
            ProofTerm::RTensor(..) => "rtensor",
            ProofTerm::LTensor(..) => "ltensor",
            ProofTerm::Prom(..) => "prom",
            ProofTerm::Der(..) => "der",
            ProofTerm::Dig(..) => "dig",
            ProofTerm::RAll(..) => "rall",
            ProofTerm::LAll(..) => "lall",
            ProofTerm::Mux(..) => "mux",
            ProofTerm::PSec(..) => "psec",
        }
    }

    pub(crate) fn children(&self) -> Vec<&ProofTerm> {
        match self {
            ProofTerm::Ax(_) => vec![],
            ProofTerm::Cut(a, b, _) | ProofTerm::LLolli(a, b, _) | ProofTerm::RTensor(a, b) => {
                vec![a, b]
            }
            ProofTerm::Weak(a, _)
            | ProofTerm::Contr(a, ..)
            | ProofTerm::RLolli(a, _)
            | ProofTerm::LTensor(a, ..)
            | ProofTerm::Prom(a)
            | ProofTerm::Der(a, _)
            | ProofTerm::Dig(a, _)
            | ProofTerm::RAll(a, _)
            | ProofTerm::LAll(a, ..)
            | ProofTerm::Mux(a, _)
            | ProofTerm::PSec(a, _) => vec![a],
        }
    }
}

fn fmt_formula(f: &Formula) -> String {
    match f {
        Formula::Atom(a) => a.clone(),
        other => format!("[{other}]"),
    }
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofTerm::Ax(a) => write!(f, "(ax {})", fmt_formula(a)),
            ProofTerm::Cut(a, b, i) => write!(f, "(cut {a} {b} {i})"),
            ProofTerm::Weak(a, x) => write!(f, "(weak {a} {})", fmt_formula(x)),
            ProofTerm::Contr(a, i, j) => write!(f, "(contr {a} {i} {j})"),
            ProofTerm::RLolli(a, i) => write!(f, "(rlolli {a} {i})"),
            ProofTerm::LLolli(a, b, i) => write!(f, "(llolli {a} {b} {i})"),
            ProofTerm::RTensor(a, b) => write!(f, "(rtensor {a} {b})"),
            ProofTerm::LTensor(a, i, j) => write!(f, "(ltensor {a} {i} {j})"),
            ProofTerm::Prom(a) => write!(f, "(prom {a})"),
            ProofTerm::Der(a, i) => write!(f, "(der {a} {i})"),
            ProofTerm::Dig(a, i) => write!(f, "(dig {a} {i})"),
            ProofTerm::RAll(a, x) => write!(f, "(rall {a} {x})"),
            ProofTerm::LAll(a, i, x) => write!(f, "(lall {a} {i} {})", fmt_formula(x)),
            ProofTerm::Mux(a, is) => {
                write!(f, "(mux {a}")?;
                for i in is {
                    write!(f, " {i}")?;
                }
                write!(f, ")")
            }
            ProofTerm::PSec(a, k) => write!(f, "(psec {a} {k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Word(&'a str),
    Bracket(&'a str, usize),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok<'_>)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            b'[' => {
                let start = i + 1;
                let mut depth = 1;
                let mut j = start;
                while j < bytes.len() && depth > 0 {
                    match bytes[j] {
                        b'[' => depth += 1,
                        b']' => depth -= 1,
                        _ => {}
                    }
                    j += 1;
                }
                if depth != 0 {
                    return Err(ParseError::new(i, "unterminated `[`"));
                }
                out.push((i, Tok::Bracket(&src[start..j - 1], start)));
                i = j;
            }
            b']' => return Err(ParseError::new(i, "unbalanced `]`")),
            _ => {
                let start = i;
                while i < bytes.len() && !b" \t\n\r()[];".contains(&bytes[i]) {
                    i += 1;
                }
                out.push((start, Tok::Word(&src[start..i])));
            }
        }
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(usize, Tok<'a>)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn close(&mut self, rule: &str) -> Result<(), ParseError> {
        match self.next() {
            Some((_, Tok::Close)) => Ok(()),
            Some((at, _)) => Err(ParseError::new(
                at,
                format!("too many arguments for `{rule}`"),
            )),
            None => Err(ParseError::new(
                self.end,
                "unexpected end of input, expected `)`",
            )),
        }
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        match self.next() {
            Some((at, Tok::Word(w))) => match w.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(ParseError::new(
                    at,
                    format!("expected a 1-based premise index, found `{w}`"),
                )),
            },
            Some((at, _)) => Err(ParseError::new(at, "expected a premise index")),
            None => Err(ParseError::new(
                self.end,
                "unexpected end of input, expected an index",
            )),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.next() {
            Some((at, Tok::Word(w))) => parse_formula_at(w, at),
            Some((_, Tok::Bracket(s, at))) => parse_formula_at(s, at),
            Some((at, _)) => Err(ParseError::new(at, "expected a formula")),
            None => Err(ParseError::new(
                self.end,
                "unexpected end of input, expected a formula",
            )),
        }
    }

    fn term(&mut self) -> Result<ProofTerm, ParseError> {
        match self.next() {
            Some((_, Tok::Open)) => {}
            Some((at, _)) => return Err(ParseError::new(at, "expected `(`")),
            None => {
                return Err(ParseError::new(
                    self.end,
                    "unexpected end of input, expected a term",
                ))
            }
        }
        let (rat, rule) = match self.next() {
            Some((rat, Tok::Word(w))) => (rat, w),
            Some((rat, _)) => return Err(ParseError::new(rat, "expected a rule name")),
            None => {
                return Err(ParseError::new(
                    self.end,
                    "unexpected end of input after `(`",
                ))
            }
        };
        let t = match rule {
            "ax" => ProofTerm::Ax(self.formula()?),
            "cut" => {
                let a = self.term()?;
                let b = self.term()?;
                ProofTerm::Cut(Box::new(a), Box::new(b), self.index()?)
            }
            "weak" => {
                let a = self.term()?;
                ProofTerm::Weak(Box::new(a), self.formula()?)
            }
            "contr" => {
                let a = self.term()?;
                let i = self.index()?;
                ProofTerm::Contr(Box::new(a), i, self.index()?)
            }
            "rlolli" => {
                let a = self.term()?;
                ProofTerm::RLolli(Box::new(a), self.index()?)
            }
            "llolli" => {
                let a = self.term()?;
                let b = self.term()?;
                ProofTerm::LLolli(Box::new(a), Box::new(b), self.index()?)
            }
            "rtensor" => {
                let a = self.term()?;
                ProofTerm::RTensor(Box::new(a), Box::new(self.term()?))
            }
            "ltensor" => {
                let a = self.term()?;
                let i = self.index()?;
                ProofTerm::LTensor(Box::new(a), i, self.index()?)
            }
            "prom" => ProofTerm::Prom(Box::new(self.term()?)),
            "der" => {
                let a = self.term()?;
                ProofTerm::Der(Box::new(a), self.index()?)
            }
            "dig" => {
                let a = self.term()?;
                ProofTerm::Dig(Box::new(a), self.index()?)
            }
            "rall" => {
                let a = self.term()?;
                match self.next() {
                    Some((_, Tok::Word(w))) => ProofTerm::RAll(Box::new(a), w.to_string()),
                    Some((xat, _)) => return Err(ParseError::new(xat, "expected a binder name")),
                    None => {
                        return Err(ParseError::new(
                            self.end,
                            "unexpected end of input, expected a binder",
                        ))
                    }
                }
            }
            "lall" => {
                let a = self.term()?;
                let i = self.index()?;
                ProofTerm::LAll(Box::new(a), i, self.formula()?)
            }
            "mux" => {
                let a = self.term()?;
                let mut is = Vec::new();
                while let Some((_, Tok::Word(_))) = self.toks.get(self.pos) {
                    is.push(self.index()?);
                }
                if is.is_empty() {
                    return Err(ParseError::new(
                        self.here(),
                        "`mux` needs at least one premise index",
                    ));
                }
                ProofTerm::Mux(Box::new(a), is)
            }
            "psec" => {
                let a = self.term()?;
                match self.next() {
                    Some((kat, Tok::Word(w))) => {
                        let k = w
                            .parse()
                            .map_err(|_| ParseError::new(kat, "expected a door count"))?;
                        ProofTerm::PSec(Box::new(a), k)
                    }
                    Some((kat, _)) => return Err(ParseError::new(kat, "expected a door count")),
                    None => {
                        return Err(ParseError::new(
                            self.end,
                            "unexpected end of input, expected a count",
                        ))
                    }
                }
            }
            other => return Err(ParseError::new(rat, format!("unknown rule `{other}`"))),
        };
        self.close(rule)?;
        Ok(t)
    }
}

pub fn parse_proof_term(src: &str) -> Result<ProofTerm, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let t = p.term()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::new(p.here(), "trailing input after term"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    #[test]
    fn parses_axiom() {
        assert_eq!(
            parse_proof_term("(ax a)").unwrap(),
            ProofTerm::Ax(Formula::atom("a"))
        );
    }

    #[test]
    fn parses_rlolli() {
        let t = parse_proof_term("(rlolli (ax a) 1)").unwrap();
        assert_eq!(
            t,
            ProofTerm::RLolli(Box::new(ProofTerm::Ax(Formula::atom("a"))), 1)
        );
    }

    #[test]
    fn unterminated_is_located() {
        let e = parse_proof_term("(rlolli").unwrap_err();
        assert_eq!(e.pos, 7);
        let e = parse_proof_term("(frob (ax a))").unwrap_err();
        assert_eq!(e.pos, 1);
        assert!(e.msg.contains("unknown rule"));
        assert!(parse_proof_term("(der (ax a) 0)").is_err());
        assert!(parse_proof_term("(ax a b)").is_err());
    }

    #[test]
    fn bracketed_formulas_and_roundtrip() {
        let src = "(lall (der (ax [a -o a]) 1) 1 [forall b. !(b -o b)])";
        let t = parse_proof_term(src).unwrap();
        match &t {
            ProofTerm::LAll(_, 1, f) => {
                assert_eq!(*f, parse_formula("forall b. !(b -o b)").unwrap())
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_proof_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn formula_errors_are_offset() {
        let e = parse_proof_term("(ax [a -o])").unwrap_err();
        assert_eq!(e.pos, 9);
    }
}
