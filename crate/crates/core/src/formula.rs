//! Formulas of second-order multiplicative-exponential linear logic.
//!
//! Concrete syntax (used by the net format and by the proof-term language):
//!
//! ```text
//! F ::= atom | F -o F | F * F | !F | $F | forall atom. F | ( F )
//! ```
//!
//! `-o` is right associative and binds weaker than `*`; `forall` extends as
//! far to the right as possible. `$F` is the paragraph modality of light
//! linear logic (`§` is accepted on input as well).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Lolli(Box<Formula>, Box<Formula>),
    Tensor(Box<Formula>, Box<Formula>),
    Bang(Box<Formula>),
    Forall(String, Box<Formula>),
    Paragraph(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn lolli(a: Formula, b: Formula) -> Formula {
        Formula::Lolli(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn bang(a: Formula) -> Formula {
        Formula::Bang(Box::new(a))
    }

    pub fn paragraph(a: Formula) -> Formula {
        Formula::Paragraph(Box::new(a))
    }

    pub fn forall(binder: &str, body: Formula) -> Formula {
        Formula::Forall(binder.to_string(), Box::new(body))
    }

    /// Body of `!A`, if this is a banged formula.
    pub fn unbang(&self) -> Option<&Formula> {
        match self {
            Formula::Bang(a) => Some(a),
            _ => None,
        }
    }

    pub fn unparagraph(&self) -> Option<&Formula> {
        match self {
            Formula::Paragraph(a) => Some(a),
            _ => None,
        }
    }

    pub fn contains_paragraph(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Lolli(a, b) | Formula::Tensor(a, b) => {
                a.contains_paragraph() || b.contains_paragraph()
            }
            Formula::Bang(a) | Formula::Forall(_, a) => a.contains_paragraph(),
            Formula::Paragraph(_) => true,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Formula::Lolli(a, b) | Formula::Tensor(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Bang(a) | Formula::Paragraph(a) => a.collect_free(bound, out),
            Formula::Forall(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(x) => {
                out.insert(x.clone());
            }
            Formula::Lolli(a, b) | Formula::Tensor(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Formula::Bang(a) | Formula::Paragraph(a) => a.all_names(out),
            Formula::Forall(x, a) => {
                out.insert(x.clone());
                a.all_names(out);
            }
        }
    }

    /// Number of connectives and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Lolli(a, b) | Formula::Tensor(a, b) => 1 + a.size() + b.size(),
            Formula::Bang(a) | Formula::Paragraph(a) | Formula::Forall(_, a) => 1 + a.size(),
        }
    }

    /// Alpha-equivalence.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        let mut w = None;
        match_instance(self, other, None, &mut Vec::new(), &mut w)
    }

    /// Finds `B` such that `self{B/var}` is alpha-equivalent to `target`.
    ///
    /// Returns `Some(None)` when `var` does not occur free in `self` and the
    /// two formulas agree (any witness works).
    pub fn instance_witness(&self, var: &str, target: &Formula) -> Option<Option<Formula>> {
        let mut w = None;
        if match_instance(self, target, Some(var), &mut Vec::new(), &mut w) {
            Some(w)
        } else {
            None
        }
    }
}

fn match_instance(
    pat: &Formula,
    tgt: &Formula,
    var: Option<&str>,
    bound: &mut Vec<(String, String)>,
    witness: &mut Option<Formula>,
) -> bool {
    match (pat, tgt) {
        (Formula::Atom(x), _) => {
            if let Some(pos) = bound.iter().rposition(|(p, _)| p == x) {
                let expected = &bound[pos].1;
                return matches!(tgt, Formula::Atom(y) if y == expected
                    && bound.iter().rposition(|(_, t)| t == y) == Some(pos));
            }
            if var == Some(x.as_str()) {
                let fv = tgt.free_vars();
                if bound.iter().any(|(_, t)| fv.contains(t)) {
                    return false;
                }
                return match witness {
                    Some(w) => w.alpha_eq(tgt),
                    None => {
                        *witness = Some(tgt.clone());
                        true
                    }
                };
            }
            matches!(tgt, Formula::Atom(y) if y == x && !bound.iter().any(|(_, t)| t == y))
        }
        (Formula::Lolli(a, b), Formula::Lolli(c, d))
        | (Formula::Tensor(a, b), Formula::Tensor(c, d)) => {
            match_instance(a, c, var, bound, witness) && match_instance(b, d, var, bound, witness)
        }
        (Formula::Bang(a), Formula::Bang(c)) | (Formula::Paragraph(a), Formula::Paragraph(c)) => {
            match_instance(a, c, var, bound, witness)
        }
        (Formula::Forall(x, a), Formula::Forall(y, c)) => {
            bound.push((x.clone(), y.clone()));
            let ok = if var == Some(x.as_str()) {
                // `var` is shadowed below this binder.
                match_instance(a, c, None, bound, witness)
            } else {
                match_instance(a, c, var, bound, witness)
            };
            bound.pop();
            ok
        }
        _ => false,
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("infinite supply of names")
}

/// Capture-avoiding substitution of `b` for the free occurrences of `atom` in `f`.
pub fn substitute(f: &Formula, atom: &str, b: &Formula) -> Formula {
    match f {
        Formula::Atom(x) if x == atom => b.clone(),
        Formula::Atom(_) => f.clone(),
        Formula::Lolli(l, r) => Formula::lolli(substitute(l, atom, b), substitute(r, atom, b)),
        Formula::Tensor(l, r) => Formula::tensor(substitute(l, atom, b), substitute(r, atom, b)),
        Formula::Bang(a) => Formula::bang(substitute(a, atom, b)),
        Formula::Paragraph(a) => Formula::paragraph(substitute(a, atom, b)),
        Formula::Forall(x, body) => {
            if x == atom || !body.free_vars().contains(atom) {
                return f.clone();
            }
            if b.free_vars().contains(x) {
                let mut avoid = BTreeSet::new();
                body.all_names(&mut avoid);
                b.all_names(&mut avoid);
                avoid.insert(atom.to_string());
                let y = fresh_name(x, &avoid);
                let renamed = substitute(body, x, &Formula::Atom(y.clone()));
                Formula::forall(&y, substitute(&renamed, atom, b))
            } else {
                Formula::forall(x, substitute(body, atom, b))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, 0, f)
    }
}

// Levels: 0 = lolli/forall, 1 = tensor, 2 = prefix/atomic.
fn write_formula(x: &Formula, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = match x {
        Formula::Lolli(..) | Formula::Forall(..) => 0,
        Formula::Tensor(..) => 1,
        _ => 2,
    };
    if own < level {
        write!(f, "(")?;
    }
    match x {
        Formula::Atom(a) => write!(f, "{a}")?,
        Formula::Lolli(a, b) => {
            write_formula(a, 1, f)?;
            write!(f, " -o ")?;
            write_formula(b, 0, f)?;
        }
        Formula::Tensor(a, b) => {
            write_formula(a, 2, f)?;
            write!(f, " * ")?;
            write_formula(b, 1, f)?;
        }
        Formula::Bang(a) => {
            write!(f, "!")?;
            write_formula(a, 2, f)?;
        }
        Formula::Paragraph(a) => {
            write!(f, "$")?;
            write_formula(a, 2, f)?;
        }
        Formula::Forall(v, a) => {
            write!(f, "forall {v}. ")?;
            write_formula(a, 0, f)?;
        }
    }
    if own < level {
        write!(f, ")")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Lolli,
    Star,
    Bang,
    Para,
    Dot,
    LParen,
    RParen,
}

fn lex(src: &str, offset: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let at = offset + pos;
        match c {
            c if c.is_whitespace() => i += 1,
            '!' => {
                out.push((at, Tok::Bang));
                i += 1;
            }
            '$' | '§' => {
                out.push((at, Tok::Para));
                i += 1;
            }
            '*' => {
                out.push((at, Tok::Star));
                i += 1;
            }
            '.' => {
                out.push((at, Tok::Dot));
                i += 1;
            }
            '(' => {
                out.push((at, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((at, Tok::RParen));
                i += 1;
            }
            '-' if chars.get(i + 1).map(|p| p.1) == Some('o') => {
                out.push((at, Tok::Lolli));
                i += 2;
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'')
                {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|p| p.1).collect();
                out.push((at, Tok::Ident(s)));
            }
            other => {
                return Err(ParseError::new(
                    at,
                    format!("unexpected character `{other}` in formula"),
                ))
            }
        }
    }
    Ok(out)
}

struct FormulaParser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl FormulaParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn lolli(&mut self) -> Result<Formula, ParseError> {
        if let Some(Tok::Ident(k)) = self.peek() {
            if k == "forall" {
                self.pos += 1;
                let at = self.here();
                let v = match self.peek() {
                    Some(Tok::Ident(v)) if v != "forall" => v.clone(),
                    _ => return Err(ParseError::new(at, "expected a binder after `forall`")),
                };
                self.pos += 1;
                if self.peek() != Some(&Tok::Dot) {
                    return Err(ParseError::new(self.here(), "expected `.` after binder"));
                }
                self.pos += 1;
                let body = self.lolli()?;
                return Ok(Formula::forall(&v, body));
            }
        }
        let left = self.tensor()?;
        if self.peek() == Some(&Tok::Lolli) {
            self.pos += 1;
            let right = self.lolli()?;
            return Ok(Formula::lolli(left, right));
        }
        Ok(left)
    }

    fn tensor(&mut self) -> Result<Formula, ParseError> {
        let left = self.unary()?;
        if self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let right = self.tensor()?;
            return Ok(Formula::tensor(left, right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::bang(self.unary()?))
            }
            Some(Tok::Para) => {
                self.pos += 1;
                Ok(Formula::paragraph(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.lolli()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(ParseError::new(self.here(), "expected `)`"));
                }
                self.pos += 1;
                Ok(f)
            }
            Some(Tok::Ident(x)) if x != "forall" => {
                self.pos += 1;
                Ok(Formula::Atom(x))
            }
            Some(t) => Err(ParseError::new(
                at,
                format!("unexpected token {t:?} in formula"),
            )),
            None => Err(ParseError::new(at, "unexpected end of formula")),
        }
    }
}

/// Parses a formula; `offset` is added to reported positions.
pub fn parse_formula_at(src: &str, offset: usize) -> Result<Formula, ParseError> {
    let toks = lex(src, offset)?;
    let mut p = FormulaParser {
        toks,
        pos: 0,
        end: offset + src.len(),
    };
    let f = p.lolli()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::new(p.here(), "trailing input after formula"));
    }
    Ok(f)
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    parse_formula_at(src, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn substitute_variable_case() {
        assert_eq!(substitute(&f("a"), "a", &f("b * b")), f("b * b"));
    }

    #[test]
    fn substitute_leaves_bound_occurrences() {
        assert_eq!(
            substitute(&f("forall a. a"), "a", &f("b")),
            f("forall a. a")
        );
    }

    #[test]
    fn substitute_renames_capturing_binder() {
        let out = substitute(&f("a -o forall b. a"), "a", &f("b * b"));
        match &out {
            Formula::Lolli(l, r) => {
                assert_eq!(**l, f("b * b"));
                match &**r {
                    Formula::Forall(x, body) => {
                        assert_ne!(x, "b");
                        assert_eq!(**body, f("b * b"));
                    }
                    other => panic!("expected forall, got {other}"),
                }
            }
            other => panic!("expected lolli, got {other}"),
        }
        assert!(out.alpha_eq(&f("(b * b) -o forall c. b * b")));
    }

    #[test]
    fn witness_recovers_instantiation() {
        let body = f("a -o a");
        assert_eq!(
            body.instance_witness("a", &f("!b -o !b")),
            Some(Some(f("!b")))
        );
        assert_eq!(body.instance_witness("a", &f("!b -o b")), None);
        assert_eq!(f("c").instance_witness("a", &f("c")), Some(None));
    }

    #[test]
    fn witness_rejects_capture() {
        // forall b. a  with a := b would capture.
        assert_eq!(
            f("forall b. a").instance_witness("a", &f("forall b. b")),
            None
        );
    }

    #[test]
    fn printing_is_minimal() {
        assert_eq!(f("(a -o b) -o c").to_string(), "(a -o b) -o c");
        assert_eq!(f("a -o (b -o c)").to_string(), "a -o b -o c");
        assert_eq!(f("!(a * b)").to_string(), "!(a * b)");
        assert_eq!(f("$ a").to_string(), "$a");
        assert_eq!(f("§a").to_string(), "$a");
        assert_eq!(f("(forall x. x) -o a").to_string(), "(forall x. x) -o a");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_formula("a -o").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_formula("a ? b").is_err());
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![Just(Formula::atom("a")), Just(Formula::atom("b"))];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::lolli(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::tensor(a, b)),
                inner.clone().prop_map(Formula::bang),
                inner.clone().prop_map(Formula::paragraph),
                inner.prop_map(|a| Formula::forall("a", a)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(x in arb_formula()) {
            prop_assert_eq!(parse_formula(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn substitution_witness_roundtrip(x in arb_formula(), b in arb_formula()) {
            let y = substitute(&x, "a", &b);
            let w = x.instance_witness("a", &y);
            prop_assert!(w.is_some());
            if let Some(Some(found)) = w {
                prop_assert!(substitute(&x, "a", &found).alpha_eq(&y));
            }
        }
    }
}
