//! Exponential signatures, stack elements and the simplification order.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sig {
    E,
    L(Box<Sig>),
    R(Box<Sig>),
    P(Box<Sig>),
    N(Box<Sig>, Box<Sig>),
    /// Multiplexer index (1-based).
    M(u32),
    /// Unresolved placeholder used by the symbolic copy search.
    Hole(u32),
}

impl Sig {
    pub fn l(t: Sig) -> Sig {
        Sig::L(Box::new(t))
    }
    pub fn r(t: Sig) -> Sig {
        Sig::R(Box::new(t))
    }
    pub fn p(t: Sig) -> Sig {
        Sig::P(Box::new(t))
    }
    pub fn n(t: Sig, u: Sig) -> Sig {
        Sig::N(Box::new(t), Box::new(u))
    }

    pub fn is_standard(&self) -> bool {
        match self {
            Sig::E | Sig::M(_) | Sig::Hole(_) => true,
            Sig::L(t) | Sig::R(t) => t.is_standard(),
            Sig::P(_) => false,
            Sig::N(t, u) => t.is_standard() && u.is_standard(),
        }
    }

    pub fn is_quasi_standard(&self) -> bool {
        match self {
            Sig::E | Sig::M(_) | Sig::Hole(_) => true,
            Sig::L(t) | Sig::R(t) | Sig::P(t) => t.is_quasi_standard(),
            Sig::N(t, u) => t.is_quasi_standard() && u.is_standard(),
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Sig::E | Sig::M(_) | Sig::Hole(_) => 1,
            Sig::L(t) | Sig::R(t) | Sig::P(t) => 1 + t.size(),
            Sig::N(t, u) => 1 + t.size() + u.size(),
        }
    }

    pub fn has_holes(&self) -> bool {
        match self {
            Sig::Hole(_) => true,
            Sig::E | Sig::M(_) => false,
            Sig::L(t) | Sig::R(t) | Sig::P(t) => t.has_holes(),
            Sig::N(t, u) => t.has_holes() || u.has_holes(),
        }
    }

    pub fn holes(&self, out: &mut Vec<u32>) {
        match self {
            Sig::Hole(h) => out.push(*h),
            Sig::E | Sig::M(_) => {}
            Sig::L(t) | Sig::R(t) | Sig::P(t) => t.holes(out),
            Sig::N(t, u) => {
                t.holes(out);
                u.holes(out);
            }
        }
    }

    /// Replaces every occurrence of hole `h` by `by`.
    pub fn fill(&self, h: u32, by: &Sig) -> Sig {
        match self {
            Sig::Hole(x) if *x == h => by.clone(),
            Sig::E | Sig::M(_) | Sig::Hole(_) => self.clone(),
            Sig::L(t) => Sig::l(t.fill(h, by)),
            Sig::R(t) => Sig::r(t.fill(h, by)),
            Sig::P(t) => Sig::p(t.fill(h, by)),
            Sig::N(t, u) => Sig::n(t.fill(h, by), u.fill(h, by)),
        }
    }

    /// All subtrees, the signature itself included.
    pub fn subtrees(&self) -> Vec<Sig> {
        let mut out = vec![self.clone()];
        match self {
            Sig::E | Sig::M(_) | Sig::Hole(_) => {}
            Sig::L(t) | Sig::R(t) | Sig::P(t) => out.extend(t.subtrees()),
            Sig::N(t, u) => {
                out.extend(t.subtrees());
                out.extend(u.subtrees());
            }
        }
        out
    }
}

/// `u ⊑ t`.
pub fn leq(u: &Sig, t: &Sig) -> bool {
    match (u, t) {
        (Sig::E, Sig::E) => true,
        (Sig::M(i), Sig::M(j)) => i == j,
        (Sig::Hole(i), Sig::Hole(j)) => i == j,
        (Sig::R(a), Sig::R(b)) | (Sig::L(a), Sig::L(b)) | (Sig::P(a), Sig::P(b)) => leq(a, b),
        (Sig::P(a), Sig::N(_, v)) => leq(a, v),
        (Sig::N(a, b), Sig::N(c, d)) => leq(a, c) && b == d,
        _ => false,
    }
}

/// `{u : u ⊑ t}`.
pub fn simplifications(t: &Sig) -> BTreeSet<Sig> {
    match t {
        Sig::E | Sig::M(_) | Sig::Hole(_) => BTreeSet::from([t.clone()]),
        Sig::L(a) => simplifications(a).into_iter().map(Sig::l).collect(),
        Sig::R(a) => simplifications(a).into_iter().map(Sig::r).collect(),
        Sig::P(a) => simplifications(a).into_iter().map(Sig::p).collect(),
        Sig::N(a, b) => {
            let mut out: BTreeSet<Sig> = simplifications(a)
                .into_iter()
                .map(|v| Sig::n(v, (**b).clone()))
                .collect();
            out.extend(simplifications(b).into_iter().map(Sig::p));
            out
        }
    }
}

/// Every standard signature with at most `max_size` constructors over
/// `e, l, r, n` (plus `m(1..=mux)` leaves when `mux > 0`).
pub fn standard_signatures(max_size: usize, mux: u32) -> Vec<Sig> {
    let mut by_size: Vec<Vec<Sig>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return Vec::new();
    }
    by_size[1].push(Sig::E);
    by_size[1].extend((1..=mux).map(Sig::M));
    for s in 2..=max_size {
        let mut here = Vec::new();
        for t in &by_size[s - 1] {
            here.push(Sig::l(t.clone()));
            here.push(Sig::r(t.clone()));
        }
        for a in 1..s - 1 {
            let b = s - 1 - a;
            for t in &by_size[a] {
                for u in &by_size[b] {
                    here.push(Sig::n(t.clone(), u.clone()));
                }
            }
        }
        by_size[s] = here;
    }
    by_size.into_iter().flatten().collect()
}

impl fmt::Display for Sig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sig::E => write!(f, "e"),
            Sig::L(t) => write!(f, "l({t})"),
            Sig::R(t) => write!(f, "r({t})"),
            Sig::P(t) => write!(f, "p({t})"),
            Sig::N(t, u) => write!(f, "n({t},{u})"),
            Sig::M(i) => write!(f, "m({i})"),
            Sig::Hole(h) => write!(f, "?{h}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    A,
    O,
    S,
    F,
    X,
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sym::A => "a",
            Sym::O => "o",
            Sym::S => "s",
            Sym::F => "f",
            Sym::X => "x",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Sym(Sym),
    Sig(Sig),
}

impl Elem {
    pub fn sig(&self) -> Option<&Sig> {
        match self {
            Elem::Sig(t) => Some(t),
            Elem::Sym(_) => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Sym(s) => write!(f, "{s}"),
            Elem::Sig(t) => write!(f, "{t}"),
        }
    }
}

struct SigParser<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl SigParser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::new(self.base + self.pos, msg)
    }

    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn elem(&mut self) -> Result<Elem, ParseError> {
        let c = *self
            .src
            .get(self.pos)
            .ok_or_else(|| self.err("unexpected end of signature"))?;
        let sym = match c {
            b'a' => Some(Sym::A),
            b'o' => Some(Sym::O),
            b's' => Some(Sym::S),
            b'f' => Some(Sym::F),
            b'x' => Some(Sym::X),
            _ => None,
        };
        if let Some(s) = sym {
            self.pos += 1;
            return Ok(Elem::Sym(s));
        }
        Ok(Elem::Sig(self.sig()?))
    }

    fn sig(&mut self) -> Result<Sig, ParseError> {
        let c = *self
            .src
            .get(self.pos)
            .ok_or_else(|| self.err("unexpected end of signature"))?;
        self.pos += 1;
        match c {
            b'e' => Ok(Sig::E),
            b'l' | b'r' | b'p' => {
                self.eat(b'(')?;
                let t = self.sig()?;
                self.eat(b')')?;
                Ok(match c {
                    b'l' => Sig::l(t),
                    b'r' => Sig::r(t),
                    _ => Sig::p(t),
                })
            }
            b'n' => {
                self.eat(b'(')?;
                let t = self.sig()?;
                self.eat(b',')?;
                let u = self.sig()?;
                self.eat(b')')?;
                Ok(Sig::n(t, u))
            }
            b'm' => {
                self.eat(b'(')?;
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let i = std::str::from_utf8(&self.src[start..self.pos])
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| self.err("expected multiplexer index"))?;
                self.eat(b')')?;
                Ok(Sig::M(i))
            }
            _ => {
                self.pos -= 1;
                Err(self.err(&format!("unexpected `{}` in signature", c as char)))
            }
        }
    }
}

pub fn parse_sig(src: &str) -> Result<Sig, ParseError> {
    parse_sig_at(src, 0)
}

pub fn parse_sig_at(src: &str, base: usize) -> Result<Sig, ParseError> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = SigParser {
        src: s.as_bytes(),
        pos: 0,
        base,
    };
    let t = p.sig()?;
    if p.pos != s.len() {
        return Err(p.err("trailing input after signature"));
    }
    Ok(t)
}

/// Parses a stack written bottom to top, elements separated by `.`.
pub fn parse_stack_at(src: &str, base: usize) -> Result<Vec<Elem>, ParseError> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = SigParser {
        src: s.as_bytes(),
        pos: 0,
        base,
    };
    let mut out = vec![p.elem()?];
    while p.pos < s.len() {
        p.eat(b'.')?;
        out.push(p.elem()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(x: &str) -> Sig {
        parse_sig(x).unwrap()
    }

    #[test]
    fn leq_clauses() {
        assert!(leq(&Sig::E, &Sig::E));
        assert!(leq(&s("p(e)"), &s("n(e,e)")));
        assert!(!leq(&s("r(e)"), &s("l(e)")));
        assert!(leq(&s("n(p(e),e)"), &s("n(n(e,e),e)")));
        assert!(!leq(&s("n(e,e)"), &s("n(e,l(e))")));
    }

    #[test]
    fn simplification_sets() {
        assert_eq!(simplifications(&Sig::E), BTreeSet::from([Sig::E]));
        assert_eq!(
            simplifications(&s("n(e,e)")),
            BTreeSet::from([s("n(e,e)"), s("p(e)")])
        );
        assert_eq!(simplifications(&s("l(e)")), BTreeSet::from([s("l(e)")]));
    }

    fn all_sigs(max: usize) -> Vec<Sig> {
        // every signature (p included) up to the given size
        let mut by: Vec<Vec<Sig>> = vec![vec![]; max + 1];
        by[1] = vec![Sig::E];
        for k in 2..=max {
            let mut here = vec![];
            for t in &by[k - 1] {
                here.push(Sig::l(t.clone()));
                here.push(Sig::r(t.clone()));
                here.push(Sig::p(t.clone()));
            }
            for a in 1..k - 1 {
                for t in &by[a] {
                    for u in &by[k - 1 - a] {
                        here.push(Sig::n(t.clone(), u.clone()));
                    }
                }
            }
            by[k] = here;
        }
        by.into_iter().flatten().collect()
    }

    #[test]
    fn simplifications_match_exhaustive_leq() {
        let universe = all_sigs(5);
        for t in universe.iter().filter(|t| t.size() <= 4) {
            let brute: BTreeSet<Sig> = universe.iter().filter(|u| leq(u, t)).cloned().collect();
            assert_eq!(simplifications(t), brute, "t = {t}");
        }
    }

    #[test]
    fn leq_is_a_partial_order_on_small_signatures() {
        let universe = all_sigs(4);
        for a in &universe {
            assert!(leq(a, a));
            for b in &universe {
                if leq(a, b) && leq(b, a) {
                    assert_eq!(a, b);
                }
                if leq(a, b) {
                    for c in &universe {
                        if leq(b, c) {
                            assert!(leq(a, c), "{a} {b} {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn standard_enumeration_counts() {
        // sizes 1..=3 over e,l,r,n: 1 + 2 + (4 + 1)
        assert_eq!(standard_signatures(3, 0).len(), 8);
        assert!(standard_signatures(4, 2).iter().all(Sig::is_standard));
    }

    #[test]
    fn stack_literal_parses() {
        let st = parse_stack_at("e.a.n(e,e)", 0).unwrap();
        assert_eq!(
            st,
            vec![Elem::Sig(Sig::E), Elem::Sym(Sym::A), Elem::Sig(s("n(e,e)"))]
        );
        assert!(parse_stack_at("e..a", 0).is_err());
    }

    fn arb_sig() -> impl Strategy<Value = Sig> {
        Just(Sig::E).prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Sig::l),
                inner.clone().prop_map(Sig::r),
                inner.clone().prop_map(Sig::p),
                (inner.clone(), inner).prop_map(|(a, b)| Sig::n(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn standard_implies_quasi_standard(t in arb_sig()) {
            prop_assert!(!t.is_standard() || t.is_quasi_standard());
        }

        #[test]
        fn simplifications_contain_self_and_are_below(t in arb_sig()) {
            let set = simplifications(&t);
            prop_assert!(set.contains(&t));
            for u in &set {
                prop_assert!(leq(u, &t));
            }
        }

        #[test]
        fn standard_signatures_are_maximal(t in arb_sig(), u in arb_sig()) {
            if t.is_standard() && leq(&t, &u) {
                prop_assert_eq!(t, u);
            }
        }

        #[test]
        fn display_parse_roundtrip(t in arb_sig()) {
            prop_assert_eq!(parse_sig(&t.to_string()).unwrap(), t);
        }
    }
}
