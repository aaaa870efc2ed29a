//! Copies, canonical sequences, cardinalities and the weights `W` and `T`.
//!
//! Copies of a box-edge are discovered by running the token machine on a
//! signature made of holes: whenever a transition inspects a hole the search
//! branches over the constructors the rule accepts. Every candidate found at a
//! final context is then checked on all of its simplifications by concrete
//! runs, memoized on the full start context.

mod checks;

use std::cell::{Cell, RefCell};
use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::machine::signature::standard_signatures;
use crate::machine::{simplifications, Context, Elem, Machine, Pol, Shape, Sig, Sym, Transition};
use crate::net::{EdgeId, Label, ProofNet, VertexId};

pub use checks::{
    audit_machine, check_step, check_steps_along, normalize_weighted, theorem_two, MachineAudit,
    StepCheck, TheoremTwo,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightBudget {
    /// Machine steps allowed to one copy search (symbolic search plus verification).
    pub per_copy: u64,
    /// Machine steps allowed to a whole weight computation.
    pub total: u64,
}

impl Default for WeightBudget {
    fn default() -> Self {
        WeightBudget {
            per_copy: 1_000_000,
            total: 100_000_000,
        }
    }
}

/// Item whose canonical sequences are asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    Edge(EdgeId),
    Vertex(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceEntry {
    pub sequence: Vec<Sig>,
    pub copies: BTreeSet<Sig>,
    pub cardinality: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxWeight {
    pub edge: EdgeId,
    pub principal: VertexId,
    pub depth: usize,
    /// Doors plus principal vertex.
    pub premise_count: usize,
    pub entries: Vec<SequenceEntry>,
}

impl BoxWeight {
    pub fn cardinality_sum(&self) -> u64 {
        self.entries.iter().map(|e| e.cardinality).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    pub boxes: Vec<BoxWeight>,
    /// Sum of `|L(v)|` over vertices that are neither doors nor principal.
    pub interior: u64,
    pub w: i64,
    pub t: i64,
    pub strictly_positive: bool,
    pub acyclic: bool,
}

impl WeightReport {
    pub fn box_for(&self, e: EdgeId) -> Option<&BoxWeight> {
        self.boxes.iter().find(|b| b.edge == e)
    }
}

/// Box edge and copy sequence keying the copy memo.
type CopyKey = (EdgeId, Vec<Sig>);

/// Weight computations over one net, with shared memo tables.
pub struct Weigher<'a> {
    pub net: &'a ProofNet,
    pub machine: Machine<'a>,
    budget: WeightBudget,
    used: Cell<u64>,
    reach_memo: RefCell<HashMap<Context, bool>>,
    copy_memo: RefCell<HashMap<CopyKey, BTreeSet<Sig>>>,
    canon_memo: RefCell<HashMap<Option<VertexId>, Vec<Vec<Sig>>>>,
    cyclic: Cell<bool>,
}

struct Search {
    start: Context,
    found: BTreeSet<Sig>,
    /// Candidates reaching a final context with holes no rule inspected.
    pending: Vec<Sig>,
    next_hole: u32,
    steps: u64,
}

/// Refinement rounds allowed for candidates left with free holes.
const REFINE_ROUNDS: usize = 10_000;

fn shape_sig(s: &Shape, next: &mut u32) -> Sig {
    let mut fresh = || {
        *next += 1;
        Sig::Hole(*next - 1)
    };
    match s {
        Shape::E => Sig::E,
        Shape::L => Sig::l(fresh()),
        Shape::R => Sig::r(fresh()),
        Shape::N => {
            let a = fresh();
            let b = fresh();
            Sig::n(a, b)
        }
        Shape::M(i) => Sig::M(*i),
    }
}

impl<'a> Weigher<'a> {
    pub fn new(net: &'a ProofNet) -> Weigher<'a> {
        Weigher::with_machine(net, Machine::new(net), WeightBudget::default())
    }

    pub fn with_machine(
        net: &'a ProofNet,
        machine: Machine<'a>,
        budget: WeightBudget,
    ) -> Weigher<'a> {
        Weigher {
            net,
            machine,
            budget,
            used: Cell::new(0),
            reach_memo: RefCell::new(HashMap::new()),
            copy_memo: RefCell::new(HashMap::new()),
            canon_memo: RefCell::new(HashMap::new()),
            cyclic: Cell::new(false),
        }
    }

    pub fn with_budget(mut self, budget: WeightBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn steps_used(&self) -> u64 {
        self.used.get()
    }

    /// Whether a canonical cycle has been met so far.
    pub fn cyclic(&self) -> bool {
        self.cyclic.get()
    }

    fn tick(&self, what: impl FnOnce() -> String) -> Result<()> {
        let n = self.used.get() + 1;
        if n > self.budget.total {
            return Err(Error::BudgetExhausted(what()));
        }
        self.used.set(n);
        Ok(())
    }

    /// Existential reachability of a final context from a concrete context.
    pub fn reaches_final(&self, start: &Context) -> Result<bool> {
        if let Some(r) = self.reach_memo.borrow().get(start) {
            return Ok(*r);
        }
        let r = self.reach(start.clone(), &mut HashSet::new(), 0)?;
        self.reach_memo.borrow_mut().insert(start.clone(), r);
        Ok(r)
    }

    fn reach(&self, mut c: Context, seen: &mut HashSet<Context>, mut local: u64) -> Result<bool> {
        let mut path = Vec::new();
        let out = loop {
            if self.machine.is_final(&c) {
                break true;
            }
            if let Some(r) = self.reach_memo.borrow().get(&c) {
                break *r;
            }
            if !seen.insert(c.clone()) {
                break false;
            }
            path.push(c.clone());
            local += 1;
            if local > self.budget.per_copy {
                return Err(Error::BudgetExhausted(format!("run from {c}")));
            }
            self.tick(|| format!("run from {c}"))?;
            let mut next = self.machine.step(&c);
            match next.len() {
                0 => break false,
                1 => c = next.pop().expect("one successor"),
                _ => {
                    let mut found = false;
                    for d in next {
                        if self.reach(d, seen, local)? {
                            found = true;
                            break;
                        }
                    }
                    break found;
                }
            }
        };
        for p in path {
            seen.remove(&p);
        }
        Ok(out)
    }

    /// Candidate copies from the symbolic search, before verification.
    ///
    /// A candidate whose run ends with holes still free is refined by running
    /// its simplifications that keep those holes: their demands resolve the
    /// shared holes, and a branch that gets stuck rules the pattern out.
    pub fn candidates(&self, e: EdgeId, u: &[Sig]) -> Result<BTreeSet<Sig>> {
        let start = Context::copy_start(e, u.to_vec(), Sig::Hole(0));
        let mut s = Search {
            start: start.clone(),
            found: BTreeSet::new(),
            pending: Vec::new(),
            next_hole: 1,
            steps: 0,
        };
        self.explore(&mut s, start, Sig::Hole(0), HashSet::new(), false)?;
        let mut queue = std::mem::take(&mut s.pending);
        let mut rounds = 0;
        while let Some(pat) = queue.pop() {
            rounds += 1;
            if rounds > REFINE_ROUNDS {
                return Err(Error::Inconclusive(format!(
                    "copy search for edge {e} keeps unresolved candidates"
                )));
            }
            let mut progressed = false;
            for simp in simplifications(&pat) {
                if simp == pat || !simp.has_holes() {
                    continue;
                }
                let from = Context::copy_start(e, u.to_vec(), simp.clone());
                s.start = from.clone();
                self.explore(&mut s, from, pat.clone(), HashSet::new(), false)?;
                let pending = std::mem::take(&mut s.pending);
                if pending.contains(&pat) {
                    queue.extend(pending.into_iter().filter(|p| *p != pat));
                    continue;
                }
                queue.extend(pending);
                progressed = true;
                break;
            }
            if !progressed {
                return Err(Error::Inconclusive(format!(
                    "copy search for edge {e} on [{}] left {pat} unconstrained",
                    u.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )));
            }
        }
        Ok(s.found)
    }

    fn explore(
        &self,
        s: &mut Search,
        mut c: Context,
        cand: Sig,
        mut seen: HashSet<Context>,
        mut moved: bool,
    ) -> Result<()> {
        loop {
            if let Some(req) = self.machine.final_requirement(&c) {
                let mut t = cand.clone();
                for h in req {
                    t = t.fill(h, &Sig::E);
                }
                if t.has_holes() {
                    s.pending.push(t);
                    return Ok(());
                }
                s.found.insert(t);
                return Ok(());
            }
            if !seen.insert(c.clone()) {
                return Ok(());
            }
            if moved
                && c.edge == s.start.edge
                && c.u == s.start.u
                && c.pol == Pol::Plus
                && matches!(c.v.as_slice(), [Elem::Sig(_)])
            {
                self.cyclic.set(true);
            }
            s.steps += 1;
            if s.steps > self.budget.per_copy {
                return Err(Error::BudgetExhausted(format!(
                    "copy search from {}",
                    s.start
                )));
            }
            self.tick(|| format!("copy search from {}", s.start))?;
            match self.machine.transition(&c) {
                Transition::Next(mut next) => match next.len() {
                    0 => return Ok(()),
                    1 => {
                        c = next.pop().expect("one successor");
                        moved = true;
                    }
                    _ => {
                        for d in next {
                            self.explore(s, d, cand.clone(), seen.clone(), true)?;
                        }
                        return Ok(());
                    }
                },
                Transition::Demand { hole, options } => {
                    for o in options {
                        let by = shape_sig(&o, &mut s.next_hole);
                        self.explore(
                            s,
                            c.fill(hole, &by),
                            cand.fill(hole, &by),
                            seen.clone(),
                            moved,
                        )?;
                    }
                    return Ok(());
                }
            }
        }
    }

    /// Whether every simplification of `t` leads from `(e, U, ., +)` to a final context.
    pub fn is_copy(&self, e: EdgeId, u: &[Sig], t: &Sig) -> Result<bool> {
        if !t.is_standard() {
            return Ok(false);
        }
        for s in simplifications(t) {
            if !self.reaches_final(&Context::copy_start(e, u.to_vec(), s))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_box_edge(&self, e: EdgeId) -> Result<()> {
        self.net.box_of_edge(e).map(|_| ())
    }

    /// Copies of the box-edge `e` on `U`.
    pub fn copies(&self, e: EdgeId, u: &[Sig]) -> Result<BTreeSet<Sig>> {
        self.check_box_edge(e)?;
        let key = (e, u.to_vec());
        if let Some(c) = self.copy_memo.borrow().get(&key) {
            return Ok(c.clone());
        }
        let mut out = BTreeSet::new();
        for t in self.candidates(e, u)? {
            if self.is_copy(e, u, &t)? {
                out.insert(t);
            }
        }
        self.copy_memo.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    /// Copies checked against the generate-and-test oracle's search space.
    pub fn copies_checked(&self, e: EdgeId, u: &[Sig]) -> Result<BTreeSet<Sig>> {
        if !self
            .canonical_sequences(Item::Edge(e))?
            .iter()
            .any(|s| s == u)
        {
            return Err(Error::NonCanonical(e));
        }
        self.copies(e, u)
    }

    /// Copies found by testing every standard signature up to `max_size`.
    pub fn oracle_copies(&self, e: EdgeId, u: &[Sig], max_size: usize) -> Result<BTreeSet<Sig>> {
        self.check_box_edge(e)?;
        let mux = self
            .net
            .vertices
            .values()
            .filter(|v| v.label == Label::M)
            .map(|v| v.ports.len() as u32 - 1)
            .max()
            .unwrap_or(0);
        let mut out = BTreeSet::new();
        for t in standard_signatures(max_size, mux) {
            if self.is_copy(e, u, &t)? {
                out.insert(t);
            }
        }
        Ok(out)
    }

    fn owner(&self, item: Item) -> Result<Option<VertexId>> {
        match item {
            Item::Edge(e) => self.net.theta_edge(e),
            Item::Vertex(v) => self.net.theta_vertex(v),
        }
    }

    /// `L(item)`: canonical sequences of an edge or vertex.
    pub fn canonical_sequences(&self, item: Item) -> Result<Vec<Vec<Sig>>> {
        let owner = self.owner(item)?;
        self.inside(owner)
    }

    fn inside(&self, owner: Option<VertexId>) -> Result<Vec<Vec<Sig>>> {
        if let Some(l) = self.canon_memo.borrow().get(&owner) {
            return Ok(l.clone());
        }
        let out = match owner {
            None => vec![vec![]],
            Some(r) => {
                let p = self.net.rho(r)?;
                let mut out = Vec::new();
                for v in self.inside(self.net.theta_vertex(r)?)? {
                    for t in self.copies(p, &v)? {
                        let mut u = v.clone();
                        u.push(t);
                        out.push(u);
                    }
                }
                out
            }
        };
        self.canon_memo.borrow_mut().insert(owner, out.clone());
        Ok(out)
    }

    /// `R(e, U)`: distinct simplifications of the copies.
    pub fn cardinality(&self, e: EdgeId, u: &[Sig]) -> Result<u64> {
        let mut all = BTreeSet::new();
        for t in self.copies(e, u)? {
            all.extend(simplifications(&t));
        }
        Ok(all.len() as u64)
    }

    pub fn report(&self) -> Result<WeightReport> {
        let idx = &self.machine.idx;
        let mut boxes = Vec::new();
        let mut w = 0i64;
        let mut t = 0i64;
        let mut positive = true;
        for (r, rec) in &self.net.boxes {
            let e = self.net.rho(*r)?;
            let pg = rec.doors.len() + 1;
            let mut entries = Vec::new();
            for u in self.canonical_sequences(Item::Edge(e))? {
                let copies = self.copies(e, &u)?;
                let card = self.cardinality(e, &u)?;
                positive &= card >= 1;
                w += card as i64 - 1;
                t += pg as i64 * (2 * card as i64 - 1);
                entries.push(SequenceEntry {
                    sequence: u,
                    copies,
                    cardinality: card,
                });
            }
            boxes.push(BoxWeight {
                edge: e,
                principal: *r,
                depth: idx.edge_depth[&e],
                premise_count: pg,
                entries,
            });
        }
        let mut interior = 0u64;
        for v in self.net.interior_vertices() {
            interior += self.canonical_sequences(Item::Vertex(v))?.len() as u64;
        }
        t += interior as i64;
        boxes.sort_by_key(|b| b.edge);
        Ok(WeightReport {
            boxes,
            interior,
            w,
            t,
            strictly_positive: positive,
            acyclic: !self.cyclic.get(),
        })
    }

    /// Number of `a` symbols decides the polarity of a canonical context.
    fn parity_of(v: &[Elem]) -> Pol {
        Pol::of_parity(v.iter().filter(|x| **x == Elem::Sym(Sym::A)).count())
    }

    /// Canonicity of a context: parity, canonical `U`, and the per-signature conditions on `V`.
    pub fn is_canonical_context(&self, c: &Context) -> Result<bool> {
        if c.pol != Weigher::parity_of(&c.v) {
            return Ok(false);
        }
        if !self.canonical_sequences(Item::Edge(c.edge))?.contains(&c.u) {
            return Ok(false);
        }
        for (i, x) in c.v.iter().enumerate() {
            let Elem::Sig(t) = x else { continue };
            let placed = if i == 0 {
                t.is_quasi_standard()
            } else {
                t.is_standard()
            };
            if !placed {
                return Ok(false);
            }
            let z = &c.v[i + 1..];
            for s in simplifications(t) {
                let mut v = vec![Elem::Sig(s)];
                v.extend_from_slice(z);
                let start = Context::new(c.edge, c.u.clone(), v, Weigher::parity_of(z));
                if !self.reaches_final(&start)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Copy starts `(e, U, s, +)` for every box-edge `e`, canonical `U`,
    /// copy `t` of `e` on `U` and simplification `s` of `t`.
    pub fn canonical_starts(&self) -> Result<Vec<Context>> {
        let mut out = Vec::new();
        for e in self.net.box_edges() {
            for u in self.canonical_sequences(Item::Edge(e))? {
                for t in self.copies(e, &u)? {
                    for s in simplifications(&t) {
                        out.push(Context::copy_start(e, u.clone(), s));
                    }
                }
            }
        }
        Ok(out)
    }

    /// For every subtree of the copy `t`, some simplification of `t` reaches
    /// a context whose whole stack is that subtree, with positive polarity.
    pub fn subtree_property(&self, e: EdgeId, u: &[Sig], t: &Sig) -> Result<bool> {
        let mut reached: BTreeSet<Sig> = BTreeSet::new();
        for s in simplifications(t) {
            self.collect_positive_singletons(&Context::copy_start(e, u.to_vec(), s), &mut reached)?;
        }
        Ok(t.subtrees().iter().all(|x| reached.contains(x)))
    }

    fn collect_positive_singletons(&self, start: &Context, out: &mut BTreeSet<Sig>) -> Result<()> {
        let mut seen = HashSet::new();
        let mut stack = vec![start.clone()];
        let mut local = 0u64;
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            if let (Pol::Plus, [Elem::Sig(t)]) = (c.pol, c.v.as_slice()) {
                out.insert(t.clone());
            }
            if self.machine.is_final(&c) {
                continue;
            }
            local += 1;
            if local > self.budget.per_copy {
                return Err(Error::BudgetExhausted(format!("run from {start}")));
            }
            self.tick(|| format!("run from {start}"))?;
            stack.extend(self.machine.step(&c));
        }
        Ok(())
    }
}

/// Full weight report of a net with default budgets.
pub fn weight(net: &ProofNet) -> Result<WeightReport> {
    Weigher::new(net).report()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::frontend::{copy_example, dr_ladder, elaborate, parse_proof_term};

    #[test]
    fn ladder_has_null_weight() {
        let g = dr_ladder(4, &Formula::atom("a")).unwrap();
        let r = weight(&g).unwrap();
        assert_eq!(r.w, 0);
        assert_eq!(r.t, g.interior_vertices().len() as i64);
    }

    #[test]
    fn boxed_axiom_has_one_copy() {
        let g = elaborate(&parse_proof_term("(prom (ax a))").unwrap()).unwrap();
        let wg = Weigher::new(&g);
        let e = g.box_edges()[0];
        assert_eq!(wg.copies(e, &[]).unwrap(), BTreeSet::from([Sig::E]));
        assert_eq!(wg.cardinality(e, &[]).unwrap(), 1);
        assert_eq!(wg.report().unwrap().w, 0);
    }

    #[test]
    fn copy_example_copies() {
        let g = copy_example(&Formula::atom("a"));
        let wg = Weigher::new(&g);
        let e = g.box_edges()[0];
        let c = wg.copies(e, &[]).unwrap();
        assert!(c.contains(&Sig::l(Sig::E)) && c.contains(&Sig::r(Sig::E)));
        assert_eq!(c, wg.oracle_copies(e, &[], 4).unwrap());
        for t in &c {
            assert!(wg.subtree_property(e, &[], t).unwrap());
        }
    }
}
