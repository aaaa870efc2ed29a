//! Context semantics: the token machine over a proof-net.

mod context;
mod run;
pub mod signature;

use std::cell::RefCell;

use crate::net::{Label, NetIndex, ProofNet, VertexId};

pub use context::{negative_final, parse_context, positive_final, Context, Pol};
pub use run::{RunOutcome, Runner};
pub use signature::{leq, parse_sig, simplifications, Elem, Sig, Sym};

/// Constructor demanded from an unresolved hole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    E,
    L,
    R,
    N,
    M(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transition {
    Next(Vec<Context>),
    /// The rule needs the head constructor of hole `hole`.
    Demand {
        hole: u32,
        options: Vec<Shape>,
    },
}

/// Violations and counters collected while auditing transitions.
#[derive(Clone, Debug, Default)]
pub struct Audit {
    pub transitions: u64,
    pub irreversible: Vec<(Context, Context)>,
    pub count_changes: Vec<(Context, Context)>,
}

pub struct Machine<'a> {
    pub net: &'a ProofNet,
    pub idx: NetIndex,
    /// Box-jump transitions for `!`-boxes (never active for `§`-boxes).
    pub jumps: bool,
    audit: Option<RefCell<Audit>>,
}

impl<'a> Machine<'a> {
    pub fn new(net: &'a ProofNet) -> Machine<'a> {
        Machine {
            net,
            idx: net.index(),
            jumps: true,
            audit: None,
        }
    }

    pub fn without_jumps(mut self) -> Self {
        self.jumps = false;
        self
    }

    /// Checks reversibility and the signature count on every executed transition.
    pub fn audited(mut self) -> Self {
        self.audit = Some(RefCell::new(Audit::default()));
        self
    }

    pub fn audit(&self) -> Option<Audit> {
        self.audit.as_ref().map(|a| a.borrow().clone())
    }

    /// Vertex and port the token is about to enter.
    pub fn arrival(&self, c: &Context) -> (VertexId, usize) {
        let e = &self.net.edges[&c.edge];
        match c.pol {
            Pol::Plus => (e.tgt, e.tgt_port),
            Pol::Minus => (e.src, e.src_port),
        }
    }

    fn leave(&self, v: VertexId, port: usize, u: Vec<Sig>, stack: Vec<Elem>) -> Context {
        let edge = self.net.port(v, port);
        let e = &self.net.edges[&edge];
        let pol = if e.src == v && e.src_port == port {
            Pol::Plus
        } else {
            Pol::Minus
        };
        Context {
            edge,
            u,
            v: stack,
            pol,
        }
    }

    fn box_jumps(&self, principal: VertexId) -> bool {
        self.jumps && self.net.label(principal) == Label::RBang
    }

    /// All successors of `c`, ignoring contexts whose rule would need a hole resolved.
    pub fn step(&self, c: &Context) -> Vec<Context> {
        match self.transition(c) {
            Transition::Next(v) => v,
            Transition::Demand { .. } => Vec::new(),
        }
    }

    pub fn transition(&self, c: &Context) -> Transition {
        let t = self.raw_transition(c);
        if let (Some(audit), Transition::Next(next)) = (&self.audit, &t) {
            let mut a = audit.borrow_mut();
            for d in next {
                a.transitions += 1;
                if !self.raw_step(&d.dual()).contains(&c.dual()) {
                    a.irreversible.push((c.clone(), d.clone()));
                }
                if c.sig_count() != d.sig_count() {
                    a.count_changes.push((c.clone(), d.clone()));
                }
            }
        }
        t
    }

    fn raw_step(&self, c: &Context) -> Vec<Context> {
        match self.raw_transition(c) {
            Transition::Next(v) => v,
            Transition::Demand { .. } => Vec::new(),
        }
    }

    fn raw_transition(&self, c: &Context) -> Transition {
        use Transition::Next;
        let (v, port) = self.arrival(c);
        let label = self.net.label(v);
        let u = &c.u;
        let stack = &c.v;
        let n = stack.len();
        let top = stack.last();
        let below = || stack[..n - 1].to_vec();
        let push = |x: Elem| {
            let mut s = stack.clone();
            s.push(x);
            s
        };
        let one = |ctx: Context| Next(vec![ctx]);
        let none = Next(Vec::new());
        let sym_top = |s: Sym| n >= 2 && top == Some(&Elem::Sym(s));
        match (label, port) {
            (Label::RLolli, 0) => one(self.leave(v, 2, u.clone(), push(Elem::Sym(Sym::A)))),
            (Label::RLolli, 1) => one(self.leave(v, 2, u.clone(), push(Elem::Sym(Sym::O)))),
            (Label::RLolli, 2) if sym_top(Sym::A) => one(self.leave(v, 0, u.clone(), below())),
            (Label::RLolli, 2) if sym_top(Sym::O) => one(self.leave(v, 1, u.clone(), below())),
            (Label::LLolli, 0) if sym_top(Sym::A) => one(self.leave(v, 1, u.clone(), below())),
            (Label::LLolli, 0) if sym_top(Sym::O) => one(self.leave(v, 2, u.clone(), below())),
            (Label::LLolli, 1) => one(self.leave(v, 0, u.clone(), push(Elem::Sym(Sym::A)))),
            (Label::LLolli, 2) => one(self.leave(v, 0, u.clone(), push(Elem::Sym(Sym::O)))),
            (Label::RTensor, 0) => one(self.leave(v, 2, u.clone(), push(Elem::Sym(Sym::F)))),
            (Label::RTensor, 1) => one(self.leave(v, 2, u.clone(), push(Elem::Sym(Sym::X)))),
            (Label::RTensor, 2) if sym_top(Sym::F) => one(self.leave(v, 0, u.clone(), below())),
            (Label::RTensor, 2) if sym_top(Sym::X) => one(self.leave(v, 1, u.clone(), below())),
            (Label::LTensor, 0) if sym_top(Sym::F) => one(self.leave(v, 1, u.clone(), below())),
            (Label::LTensor, 0) if sym_top(Sym::X) => one(self.leave(v, 2, u.clone(), below())),
            (Label::LTensor, 1) => one(self.leave(v, 0, u.clone(), push(Elem::Sym(Sym::F)))),
            (Label::LTensor, 2) => one(self.leave(v, 0, u.clone(), push(Elem::Sym(Sym::X)))),
            (Label::RAll, 0) | (Label::LAll, 1) => {
                let to = if label == Label::RAll { 1 } else { 0 };
                one(self.leave(v, to, u.clone(), push(Elem::Sym(Sym::S))))
            }
            (Label::RAll, 1) | (Label::LAll, 0) if sym_top(Sym::S) => {
                let to = if label == Label::RAll { 0 } else { 1 };
                one(self.leave(v, to, u.clone(), below()))
            }
            (Label::X, 0) => match top {
                Some(Elem::Sig(Sig::L(t))) => {
                    let mut s = below();
                    s.push(Elem::Sig((**t).clone()));
                    one(self.leave(v, 1, u.clone(), s))
                }
                Some(Elem::Sig(Sig::R(t))) => {
                    let mut s = below();
                    s.push(Elem::Sig((**t).clone()));
                    one(self.leave(v, 2, u.clone(), s))
                }
                Some(Elem::Sig(Sig::Hole(h))) => Transition::Demand {
                    hole: *h,
                    options: vec![Shape::L, Shape::R],
                },
                _ => none,
            },
            (Label::X, 1) | (Label::X, 2) => match top {
                Some(Elem::Sig(t)) => {
                    let wrapped = if port == 1 {
                        Sig::l(t.clone())
                    } else {
                        Sig::r(t.clone())
                    };
                    let mut s = below();
                    s.push(Elem::Sig(wrapped));
                    one(self.leave(v, 0, u.clone(), s))
                }
                _ => none,
            },
            (Label::D, 0) if n >= 2 => match top {
                Some(Elem::Sig(Sig::E)) => one(self.leave(v, 1, u.clone(), below())),
                Some(Elem::Sig(Sig::Hole(h))) => Transition::Demand {
                    hole: *h,
                    options: vec![Shape::E],
                },
                _ => none,
            },
            (Label::D, 1) => one(self.leave(v, 0, u.clone(), push(Elem::Sig(Sig::E)))),
            (Label::N, 0) => match top {
                Some(Elem::Sig(Sig::N(t, w))) => {
                    let mut s = below();
                    s.push(Elem::Sig((**t).clone()));
                    s.push(Elem::Sig((**w).clone()));
                    one(self.leave(v, 1, u.clone(), s))
                }
                Some(Elem::Sig(Sig::P(t))) if n == 1 => {
                    one(self.leave(v, 1, u.clone(), vec![Elem::Sig((**t).clone())]))
                }
                Some(Elem::Sig(Sig::Hole(h))) => Transition::Demand {
                    hole: *h,
                    options: vec![Shape::N],
                },
                _ => none,
            },
            (Label::N, 1) => match stack.as_slice() {
                [Elem::Sig(t)] => {
                    one(self.leave(v, 0, u.clone(), vec![Elem::Sig(Sig::p(t.clone()))]))
                }
                [rest @ .., Elem::Sig(t), Elem::Sig(w)] => {
                    let mut s = rest.to_vec();
                    s.push(Elem::Sig(Sig::n(t.clone(), w.clone())));
                    one(self.leave(v, 0, u.clone(), s))
                }
                _ => none,
            },
            (Label::M, 0) => match top {
                Some(Elem::Sig(Sig::M(i)))
                    if n >= 2 && *i >= 1 && (*i as usize) < self.net.arity(v) =>
                {
                    one(self.leave(v, *i as usize, u.clone(), below()))
                }
                Some(Elem::Sig(Sig::Hole(h))) => Transition::Demand {
                    hole: *h,
                    options: (1..self.net.arity(v) as u32).map(Shape::M).collect(),
                },
                _ => none,
            },
            (Label::M, i) if i >= 1 => {
                one(self.leave(v, 0, u.clone(), push(Elem::Sig(Sig::M(i as u32)))))
            }
            (Label::LBang | Label::LPar, 0) => match top {
                Some(Elem::Sig(t)) if n >= 2 => {
                    let mut nu = u.clone();
                    nu.push(t.clone());
                    one(self.leave(v, 1, nu, below()))
                }
                Some(Elem::Sig(_)) => {
                    let principal = self.idx.door_box[&v];
                    if self.box_jumps(principal) {
                        one(self.leave(principal, 1, u.clone(), stack.clone()))
                    } else {
                        none
                    }
                }
                _ => none,
            },
            (Label::LBang | Label::LPar, 1) | (Label::RBang | Label::RPar, 0) => {
                match u.split_last() {
                    Some((t, rest)) => {
                        let to = if label.is_door() { 0 } else { 1 };
                        one(self.leave(v, to, rest.to_vec(), push(Elem::Sig(t.clone()))))
                    }
                    None => none,
                }
            }
            (Label::RBang | Label::RPar, 1) => match top {
                Some(Elem::Sig(t)) if n >= 2 => {
                    let mut nu = u.clone();
                    nu.push(t.clone());
                    one(self.leave(v, 0, nu, below()))
                }
                Some(Elem::Sig(_)) if self.box_jumps(v) => Next(
                    self.net.boxes[&v]
                        .doors
                        .iter()
                        .map(|d| self.leave(*d, 0, u.clone(), stack.clone()))
                        .collect(),
                ),
                _ => none,
            },
            _ => none,
        }
    }

    /// Final-context test; `Some(holes)` means final once `holes` are `e`.
    pub fn final_requirement(&self, c: &Context) -> Option<Vec<u32>> {
        let (v, port) = self.arrival(c);
        match (self.net.label(v), c.pol) {
            (Label::W | Label::C, Pol::Plus) => positive_final(&c.v),
            (Label::D, Pol::Plus) if port == 0 => match c.v.as_slice() {
                [Elem::Sig(Sig::E)] => Some(vec![]),
                [Elem::Sig(Sig::Hole(h))] => Some(vec![*h]),
                _ => None,
            },
            (Label::P, Pol::Minus) => negative_final(&c.v),
            (Label::M, Pol::Plus) if port == 0 => match c.v.as_slice() {
                [Elem::Sig(Sig::M(i))] if *i >= 1 && (*i as usize) < self.net.arity(v) => {
                    Some(vec![])
                }
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_final(&self, c: &Context) -> bool {
        self.final_requirement(c).is_some_and(|h| h.is_empty())
    }
}
