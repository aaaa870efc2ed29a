//! Simply typed lambda terms and their call-by-name embedding into nets.
//!
//! Grammar:
//!
//! ```text
//! term ::= ('\' | 'λ') ident [':' type] '.' term | app
//! app  ::= atom atom*
//! atom ::= ident | '(' term ')'
//! type ::= tatom ['->' type]
//! tatom ::= ident | '(' type ')'
//! ```
//!
//! Missing binder annotations and the types of free variables are inferred;
//! type variables left open become fresh atoms. Types translate as
//! `(A -> B)* = !A* -o B*`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::elaborate::elaborate_in;
use super::proof_term::ProofTerm;
use crate::error::{Error, ParseError, Result};
use crate::formula::Formula;
use crate::net::{ProofNet, System};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Type {
    Atom(String),
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    /// The linear-logic image of the type.
    pub fn translate(&self) -> Formula {
        match self {
            Type::Atom(a) => Formula::atom(a),
            Type::Arrow(a, b) => Formula::lolli(Formula::bang(a.translate()), b.translate()),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Atom(a) => f.write_str(a),
            Type::Arrow(a, b) => match **a {
                Type::Arrow(..) => write!(f, "({a}) -> {b}"),
                Type::Atom(_) => write!(f, "{a} -> {b}"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaTerm {
    Var(String),
    Abs(String, Option<Type>, Box<LambdaTerm>),
    App(Box<LambdaTerm>, Box<LambdaTerm>),
}

impl LambdaTerm {
    pub fn var(x: &str) -> LambdaTerm {
        LambdaTerm::Var(x.to_string())
    }

    pub fn abs(x: &str, ty: Option<Type>, body: LambdaTerm) -> LambdaTerm {
        LambdaTerm::Abs(x.to_string(), ty, Box::new(body))
    }

    pub fn app(m: LambdaTerm, n: LambdaTerm) -> LambdaTerm {
        LambdaTerm::App(Box::new(m), Box::new(n))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            LambdaTerm::Var(x) => BTreeSet::from([x.clone()]),
            LambdaTerm::Abs(x, _, m) => {
                let mut s = m.free_vars();
                s.remove(x);
                s
            }
            LambdaTerm::App(m, n) => {
                let mut s = m.free_vars();
                s.extend(n.free_vars());
                s
            }
        }
    }

    pub fn applications(&self) -> usize {
        match self {
            LambdaTerm::Var(_) => 0,
            LambdaTerm::Abs(_, _, m) => m.applications(),
            LambdaTerm::App(m, n) => 1 + m.applications() + n.applications(),
        }
    }

    pub fn occurrences(&self) -> usize {
        match self {
            LambdaTerm::Var(_) => 1,
            LambdaTerm::Abs(_, _, m) => m.occurrences(),
            LambdaTerm::App(m, n) => m.occurrences() + n.occurrences(),
        }
    }
}

impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaTerm::Var(x) => f.write_str(x),
            LambdaTerm::Abs(x, ty, m) => match ty {
                Some(t) => write!(f, "\\{x}:{t}. {m}"),
                None => write!(f, "\\{x}. {m}"),
            },
            LambdaTerm::App(m, n) => {
                match **m {
                    LambdaTerm::Abs(..) => write!(f, "({m})")?,
                    _ => write!(f, "{m}")?,
                }
                match **n {
                    LambdaTerm::Var(_) => write!(f, " {n}"),
                    _ => write!(f, " ({n})"),
                }
            }
        }
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lam,
    Dot,
    Colon,
    Arrow,
    Open,
    Close,
    Ident(String),
}

fn lex(src: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '\\' | 'λ' => {
                it.next();
                out.push((i, Tok::Lam));
            }
            '.' => {
                it.next();
                out.push((i, Tok::Dot));
            }
            ':' => {
                it.next();
                out.push((i, Tok::Colon));
            }
            '(' => {
                it.next();
                out.push((i, Tok::Open));
            }
            ')' => {
                it.next();
                out.push((i, Tok::Close));
            }
            '-' => {
                it.next();
                match it.next() {
                    Some((_, '>')) => out.push((i, Tok::Arrow)),
                    _ => return Err(ParseError::new(i, "expected `->`")),
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        s.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((i, Tok::Ident(s)));
            }
            other => {
                return Err(ParseError::new(
                    i,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(i, _)| *i).unwrap_or(self.end)
    }

    fn expect(&mut self, t: Tok, what: &str) -> std::result::Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.here(), format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> std::result::Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(ParseError::new(self.here(), "expected identifier")),
        }
    }

    fn term(&mut self) -> std::result::Result<LambdaTerm, ParseError> {
        if self.peek() == Some(&Tok::Lam) {
            self.pos += 1;
            let x = self.ident()?;
            let ty = if self.peek() == Some(&Tok::Colon) {
                self.pos += 1;
                Some(self.ty()?)
            } else {
                None
            };
            self.expect(Tok::Dot, "`.`")?;
            let body = self.term()?;
            return Ok(LambdaTerm::Abs(x, ty, Box::new(body)));
        }
        let mut m = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::Open) => {
                    let n = self.atom()?;
                    m = LambdaTerm::app(m, n);
                }
                Some(Tok::Lam) => {
                    let n = self.term()?;
                    return Ok(LambdaTerm::app(m, n));
                }
                _ => return Ok(m),
            }
        }
    }

    fn atom(&mut self) -> std::result::Result<LambdaTerm, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(LambdaTerm::Var(self.ident()?)),
            Some(Tok::Open) => {
                self.pos += 1;
                let m = self.term()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(m)
            }
            _ => Err(ParseError::new(self.here(), "expected a term")),
        }
    }

    fn ty(&mut self) -> std::result::Result<Type, ParseError> {
        let a = match self.peek() {
            Some(Tok::Ident(_)) => Type::Atom(self.ident()?),
            Some(Tok::Open) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::Close, "`)`")?;
                t
            }
            _ => return Err(ParseError::new(self.here(), "expected a type")),
        };
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(Type::arrow(a, self.ty()?))
        } else {
            Ok(a)
        }
    }
}

pub fn parse_lambda(src: &str) -> std::result::Result<LambdaTerm, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        end: src.len(),
    };
    let m = p.term()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::new(p.here(), "unexpected trailing input"));
    }
    Ok(m)
}

// ---------------------------------------------------------------- typing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Atom(String),
    Var(usize),
    Arrow(Box<Ty>, Box<Ty>),
}

#[derive(Default)]
struct Infer {
    subst: HashMap<usize, Ty>,
    next: usize,
}

impl Infer {
    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Var(self.next - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match self.subst.get(v) {
                Some(u) => self.resolve(u),
                None => t.clone(),
            },
            Ty::Arrow(a, b) => Ty::Arrow(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            Ty::Atom(_) => t.clone(),
        }
    }

    fn occurs(&self, v: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Var(w) => v == w,
            Ty::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            Ty::Atom(_) => false,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        match (self.resolve(a), self.resolve(b)) {
            (Ty::Var(v), Ty::Var(w)) if v == w => true,
            (Ty::Var(v), t) | (t, Ty::Var(v)) => {
                if self.occurs(v, &t) {
                    return false;
                }
                self.subst.insert(v, t);
                true
            }
            (Ty::Atom(x), Ty::Atom(y)) => x == y,
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => self.unify(&a1, &a2) && self.unify(&b1, &b2),
            _ => false,
        }
    }

    fn lift(t: &Type) -> Ty {
        match t {
            Type::Atom(a) => Ty::Atom(a.clone()),
            Type::Arrow(a, b) => Ty::Arrow(Box::new(Infer::lift(a)), Box::new(Infer::lift(b))),
        }
    }

    /// Annotates every binder and variable occurrence with an inference type.
    fn term(
        &mut self,
        m: &LambdaTerm,
        env: &mut Vec<(String, Ty)>,
        free: &mut BTreeMap<String, Ty>,
    ) -> Result<(Typed, Ty)> {
        match m {
            LambdaTerm::Var(x) => {
                let t = match env.iter().rev().find(|(y, _)| y == x) {
                    Some((_, t)) => t.clone(),
                    None => match free.get(x) {
                        Some(t) => t.clone(),
                        None => {
                            let t = self.fresh();
                            free.insert(x.clone(), t.clone());
                            t
                        }
                    },
                };
                Ok((Typed::Var(x.clone(), t.clone()), t))
            }
            LambdaTerm::Abs(x, ann, body) => {
                let a = match ann {
                    Some(t) => Infer::lift(t),
                    None => self.fresh(),
                };
                env.push((x.clone(), a.clone()));
                let (tb, b) = self.term(body, env, free)?;
                env.pop();
                Ok((
                    Typed::Abs(x.clone(), a.clone(), Box::new(tb)),
                    Ty::Arrow(Box::new(a), Box::new(b)),
                ))
            }
            LambdaTerm::App(f, n) => {
                let (tf, a) = self.term(f, env, free)?;
                let (tn, b) = self.term(n, env, free)?;
                let r = self.fresh();
                if !self.unify(&a, &Ty::Arrow(Box::new(b.clone()), Box::new(r.clone()))) {
                    return Err(Error::IllTyped(format!(
                        "cannot apply `{f}` of type {} to `{n}` of type {}",
                        self.show(&a),
                        self.show(&b)
                    )));
                }
                Ok((Typed::App(Box::new(tf), Box::new(tn), r.clone()), r))
            }
        }
    }

    fn show(&self, t: &Ty) -> String {
        match self.resolve(t) {
            Ty::Atom(a) => a,
            Ty::Var(v) => format!("'t{v}"),
            Ty::Arrow(a, b) => format!("({} -> {})", self.show(&a), self.show(&b)),
        }
    }
}

enum Typed {
    Var(String, Ty),
    Abs(String, Ty, Box<Typed>),
    App(Box<Typed>, Box<Typed>, Ty),
}

/// Closes open type variables with atom names not already in use.
struct Grounding<'a> {
    infer: &'a Infer,
    names: HashMap<usize, String>,
    used: BTreeSet<String>,
}

impl Grounding<'_> {
    fn ground(&mut self, t: &Ty) -> Type {
        match self.infer.resolve(t) {
            Ty::Atom(a) => Type::Atom(a),
            Ty::Arrow(a, b) => Type::arrow(self.ground(&a), self.ground(&b)),
            Ty::Var(v) => {
                if let Some(n) = self.names.get(&v) {
                    return Type::Atom(n.clone());
                }
                let name = (0..)
                    .map(|k: usize| {
                        let letter = char::from(b'a' + (k % 26) as u8);
                        if k < 26 {
                            letter.to_string()
                        } else {
                            format!("{letter}{}", k / 26)
                        }
                    })
                    .find(|n| !self.used.contains(n))
                    .expect("unbounded name supply");
                self.used.insert(name.clone());
                self.names.insert(v, name.clone());
                Type::Atom(name)
            }
        }
    }
}

fn atoms_of(t: &Ty, out: &mut BTreeSet<String>) {
    match t {
        Ty::Atom(a) => {
            out.insert(a.clone());
        }
        Ty::Arrow(a, b) => {
            atoms_of(a, out);
            atoms_of(b, out);
        }
        Ty::Var(_) => {}
    }
}

/// Result of typing a closed-up term: its type and the types of its free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typing {
    pub ty: Type,
    pub free: BTreeMap<String, Type>,
}

struct Inferred {
    typed: Typed,
    infer: Infer,
    ty: Ty,
    free: BTreeMap<String, Ty>,
    free_order: Vec<String>,
}

fn infer_all(m: &LambdaTerm) -> Result<Inferred> {
    let mut infer = Infer::default();
    let mut free = BTreeMap::new();
    let (typed, ty) = infer.term(m, &mut Vec::new(), &mut free)?;
    let mut free_order = Vec::new();
    first_free(m, &mut Vec::new(), &mut free_order);
    Ok(Inferred {
        typed,
        infer,
        ty,
        free,
        free_order,
    })
}

fn first_free(m: &LambdaTerm, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match m {
        LambdaTerm::Var(x) => {
            if !bound.contains(x) && !out.contains(x) {
                out.push(x.clone());
            }
        }
        LambdaTerm::Abs(x, _, b) => {
            bound.push(x.clone());
            first_free(b, bound, out);
            bound.pop();
        }
        LambdaTerm::App(a, b) => {
            first_free(a, bound, out);
            first_free(b, bound, out);
        }
    }
}

fn grounding(t: &Inferred) -> Grounding<'_> {
    let mut used = BTreeSet::new();
    fn walk(t: &Typed, inf: &Infer, used: &mut BTreeSet<String>) {
        match t {
            Typed::Var(_, ty) => atoms_of(&inf.resolve(ty), used),
            Typed::Abs(_, ty, b) => {
                atoms_of(&inf.resolve(ty), used);
                walk(b, inf, used);
            }
            Typed::App(a, b, ty) => {
                atoms_of(&inf.resolve(ty), used);
                walk(a, inf, used);
                walk(b, inf, used);
            }
        }
    }
    walk(&t.typed, &t.infer, &mut used);
    Grounding {
        infer: &t.infer,
        names: HashMap::new(),
        used,
    }
}

/// Simple type of a term; free variables receive inferred types.
pub fn type_of(m: &LambdaTerm) -> Result<Typing> {
    let t = infer_all(m)?;
    let mut g = grounding(&t);
    let ty = g.ground(&t.ty);
    let free = t
        .free
        .iter()
        .map(|(x, ty)| (x.clone(), g.ground(ty)))
        .collect();
    Ok(Typing { ty, free })
}

// ---------------------------------------------------------------- translation

/// Proof term with its premises named by the variable each one stands for.
struct Open {
    term: ProofTerm,
    names: Vec<String>,
}

/// Contracts every premise named `x` into the first one; returns its 1-based position.
fn contract_all(open: &mut Open, x: &str) -> Option<usize> {
    let mut first = None;
    let mut k = 0;
    while k < open.names.len() {
        if open.names[k] == x {
            match first {
                None => first = Some(k),
                Some(f) => {
                    let t = std::mem::replace(&mut open.term, ProofTerm::Ax(Formula::atom("_")));
                    open.term = ProofTerm::Contr(Box::new(t), f + 1, k + 1);
                    open.names.remove(k);
                    continue;
                }
            }
        }
        k += 1;
    }
    first.map(|f| f + 1)
}

fn translate(t: &Typed, g: &mut Grounding<'_>) -> Open {
    match t {
        Typed::Var(x, ty) => Open {
            term: ProofTerm::Der(Box::new(ProofTerm::Ax(g.ground(ty).translate())), 1),
            names: vec![x.clone()],
        },
        Typed::Abs(x, ty, body) => {
            let mut open = translate(body, g);
            let at = match contract_all(&mut open, x) {
                Some(i) => i,
                None => {
                    let bang = Formula::bang(g.ground(ty).translate());
                    open.term = ProofTerm::Weak(Box::new(open.term), bang);
                    open.names.push(x.clone());
                    open.names.len()
                }
            };
            open.names.remove(at - 1);
            open.term = ProofTerm::RLolli(Box::new(open.term), at);
            open
        }
        Typed::App(f, n, res) => {
            let fm = translate(f, g);
            let nm = translate(n, g);
            let mut boxed = ProofTerm::Prom(Box::new(nm.term));
            for i in 1..=nm.names.len() {
                boxed = ProofTerm::Dig(Box::new(boxed), i);
            }
            let hook = nm.names.len() + 1;
            let apply = ProofTerm::LLolli(
                Box::new(boxed),
                Box::new(ProofTerm::Ax(g.ground(res).translate())),
                1,
            );
            let term = ProofTerm::Cut(Box::new(fm.term), Box::new(apply), hook);
            let mut names = fm.names;
            names.extend(nm.names);
            Open { term, names }
        }
    }
}

/// Proof term of the call-by-name embedding, with its free variables in
/// order of first occurrence.
pub fn lambda_to_proof_term(m: &LambdaTerm) -> Result<(ProofTerm, Vec<String>)> {
    let t = infer_all(m)?;
    let mut g = grounding(&t);
    let mut open = translate(&t.typed, &mut g);
    let mut order = Vec::new();
    for x in &t.free_order {
        contract_all(&mut open, x);
        order.push(x.clone());
    }
    Ok((open.term, order))
}

/// Net of a simply typed term under the call-by-name embedding.
pub fn from_lambda(m: &LambdaTerm) -> Result<ProofNet> {
    let (term, _) = lambda_to_proof_term(m)?;
    elaborate_in(&term, System::Mell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{validate, Label};

    fn count(g: &ProofNet, l: Label) -> usize {
        g.vertices.values().filter(|v| v.label == l).count()
    }

    #[test]
    fn parses_and_prints() {
        let m = parse_lambda("(\\x. y x x) z").unwrap();
        assert_eq!(m.to_string(), "(\\x. y x x) z");
        let m = parse_lambda("λf:a->a. λx. f (f x)").unwrap();
        assert_eq!(m.to_string(), "\\f:a -> a. \\x. f (f x)");
        assert_eq!(parse_lambda("\\x x").unwrap_err().pos, 3);
    }

    #[test]
    fn infers_types() {
        let t = type_of(&parse_lambda("\\x. x").unwrap()).unwrap();
        assert_eq!(t.ty.to_string(), "a -> a");
        let t = type_of(&parse_lambda("\\f:a->b. \\x. f x").unwrap()).unwrap();
        assert_eq!(t.ty.to_string(), "(a -> b) -> a -> b");
        assert!(matches!(
            type_of(&parse_lambda("\\x. x x").unwrap()),
            Err(Error::IllTyped(_))
        ));
        assert!(matches!(
            type_of(&parse_lambda("\\x:a. \\y:b. x y").unwrap()),
            Err(Error::IllTyped(_))
        ));
    }

    #[test]
    fn identity_translates_to_bang_lolli() {
        let g = from_lambda(&parse_lambda("\\x. x").unwrap()).unwrap();
        assert_eq!(validate(&g), vec![]);
        assert_eq!(g.sequent().1.unwrap().to_string(), "!a -o a");
        assert_eq!(count(&g, Label::D), 1);
    }

    #[test]
    fn unused_binder_is_weakened() {
        let g = from_lambda(&parse_lambda("\\x. y").unwrap()).unwrap();
        assert_eq!(validate(&g), vec![]);
        assert_eq!(count(&g, Label::W), 1);
    }

    #[test]
    fn structural_counts() {
        for src in [
            "(\\x. y x x) z",
            "\\f. \\x. f (f (f x))",
            "(\\x. x) (\\y. y)",
            "\\x. \\y. x y y",
        ] {
            let m = parse_lambda(src).unwrap();
            let g = from_lambda(&m).unwrap();
            assert_eq!(validate(&g), vec![], "{src}");
            assert_eq!(g.boxes.len(), m.applications(), "{src}");
            assert_eq!(count(&g, Label::D), m.occurrences(), "{src}");
        }
        let g = from_lambda(&parse_lambda("(\\x. y x x) z").unwrap()).unwrap();
        assert_eq!(count(&g, Label::X), 1);
        let (prem, _) = g.sequent();
        assert_eq!(prem.len(), 2);
    }
}
