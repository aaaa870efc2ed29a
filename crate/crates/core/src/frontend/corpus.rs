//! Test corpora: every net a bounded rule grammar derives up to a vertex
//! budget, plus named lambda terms and per-subsystem fixtures.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::formula::Formula;
use crate::net::{validate, ProofNet, System};
use crate::rewrite::shape_key;

use super::elaborate::elaborate_with_sequent;
use super::lambda::{from_lambda, parse_lambda};
use super::proof_term::{parse_proof_term, ProofTerm};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub net: ProofNet,
}

/// Lambda terms whose nets join the generated corpus.
pub const LAMBDA_FIXTURES: &[&str] = &[
    "\\x. x",
    "(\\x. x) y",
    "(\\x. y x x) z",
    "(\\x. \\y. x) u v",
    "(\\f. f (f z)) g",
    "\\f. \\x. f (f x)",
    "(\\x. y) z",
    "(\\x. x) ((\\y. y) z)",
];

struct Derived {
    term: ProofTerm,
    premises: Vec<Formula>,
    conclusion: Formula,
    size: usize,
}

/// Bounded closure of proof terms under the rules `system` admits.
struct Generator {
    system: System,
    max_vertices: usize,
    max_nets: usize,
    items: Vec<Derived>,
    nets: Vec<CorpusEntry>,
    seen: HashSet<String>,
    /// Indices of items concluding a banged formula.
    banged: Vec<usize>,
}

impl Generator {
    fn offer(&mut self, term: ProofTerm) {
        if self.nets.len() >= self.max_nets {
            return;
        }
        let Ok((net, premises, conclusion)) = elaborate_with_sequent(&term, self.system) else {
            return;
        };
        if net.size() > self.max_vertices || !validate(&net).is_empty() {
            return;
        }
        if !self.seen.insert(shape_key(&net)) {
            return;
        }
        if conclusion.unbang().is_some() {
            self.banged.push(self.items.len());
        }
        self.nets.push(CorpusEntry {
            name: term.to_string(),
            net: net.clone(),
        });
        self.items.push(Derived {
            term,
            premises,
            conclusion,
            size: net.size(),
        });
    }

    fn unary(&mut self, k: usize) {
        let d = &self.items[k];
        let (t, prem, size) = (d.term.clone(), d.premises.clone(), d.size);
        let boxed = |t: &ProofTerm| Box::new(t.clone());
        let one_based = 1..=prem.len();
        let mut out = Vec::new();
        if size + 2 <= self.max_vertices {
            out.push(ProofTerm::Weak(
                boxed(&t),
                Formula::bang(Formula::atom("a")),
            ));
        }
        for i in one_based.clone() {
            out.push(ProofTerm::RLolli(boxed(&t), i));
            if matches!(self.system, System::Mell) {
                out.push(ProofTerm::Der(boxed(&t), i));
                out.push(ProofTerm::Dig(boxed(&t), i));
            }
            for j in one_based.clone().filter(|j| *j > i) {
                if prem[i - 1] == prem[j - 1] && prem[i - 1].unbang().is_some() {
                    match self.system {
                        System::Sll => out.push(ProofTerm::Mux(boxed(&t), vec![i, j])),
                        _ => out.push(ProofTerm::Contr(boxed(&t), i, j)),
                    }
                }
                out.push(ProofTerm::LTensor(boxed(&t), i, j));
            }
            if self.system == System::Sll {
                out.push(ProofTerm::Mux(boxed(&t), vec![i]));
            }
        }
        match self.system {
            System::Lll => {
                if prem.len() <= 1 {
                    out.push(ProofTerm::Prom(boxed(&t)));
                }
                for k in 0..=prem.len() {
                    out.push(ProofTerm::PSec(boxed(&t), k));
                }
            }
            _ => out.push(ProofTerm::Prom(boxed(&t))),
        }
        for t in out {
            self.offer(t);
        }
    }

    fn binary(&mut self, a: usize, b: usize) {
        let (da, db) = (&self.items[a], &self.items[b]);
        if da.size + db.size > self.max_vertices + 2 {
            return;
        }
        let (ta, tb) = (Box::new(da.term.clone()), Box::new(db.term.clone()));
        let mut out = Vec::new();
        for (i, f) in db.premises.iter().enumerate() {
            if *f == da.conclusion {
                out.push(ProofTerm::Cut(ta.clone(), tb.clone(), i + 1));
            }
            out.push(ProofTerm::LLolli(ta.clone(), tb.clone(), i + 1));
        }
        out.push(ProofTerm::RTensor(ta, tb));
        for t in out {
            self.offer(t);
        }
    }

    fn close(&mut self) {
        let a = Formula::atom("a");
        self.offer(ProofTerm::Ax(a.clone()));
        self.offer(ProofTerm::Ax(Formula::bang(a)));
        let mut k = 0;
        while k < self.items.len() && self.nets.len() < self.max_nets {
            self.unary(k);
            for j in 0..=k {
                self.binary(j, k);
                if j != k {
                    self.binary(k, j);
                }
            }
            k += 1;
        }
    }

    /// Random cuts between derived terms and random rule applications on
    /// their results, keeping only nets that contain a cut.
    fn sample(&mut self, max_vertices: usize, count: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.max_vertices = max_vertices;
        let target = self.nets.len() + count;
        self.max_nets = target;
        let start = self.items.len();
        let mut attempts = 0;
        while self.nets.len() < target && attempts < 200 * count {
            attempts += 1;
            let before = self.items.len();
            if start < self.items.len() && rng.gen_bool(0.4) {
                let k = rng.gen_range(start..self.items.len());
                let saved = self.max_nets;
                self.max_nets = usize::MAX;
                let mark = self.items.len();
                self.unary(k);
                let mut items = self.items.split_off(mark);
                let mut nets = self.nets.split_off(mark);
                if !items.is_empty() {
                    let keep = rng.gen_range(0..items.len());
                    self.items.push(items.swap_remove(keep));
                    self.nets.push(nets.swap_remove(keep));
                }
                self.max_nets = saved;
            } else {
                self.banged.retain(|i| *i < self.items.len());
                let a = if !self.banged.is_empty() && rng.gen_bool(0.7) {
                    self.banged[rng.gen_range(0..self.banged.len())]
                } else {
                    rng.gen_range(0..self.items.len())
                };
                let b = rng.gen_range(0..self.items.len());
                let (da, db) = (&self.items[a], &self.items[b]);
                let slots: Vec<usize> = (0..db.premises.len())
                    .filter(|i| db.premises[*i] == da.conclusion)
                    .collect();
                if slots.is_empty() {
                    continue;
                }
                let i = slots[rng.gen_range(0..slots.len())];
                let t = ProofTerm::Cut(Box::new(da.term.clone()), Box::new(db.term.clone()), i + 1);
                self.offer(t);
            }
            if self.items.len() > before
                && crate::rewrite::find_cuts(&self.nets[self.nets.len() - 1].net).is_empty()
            {
                self.items.pop();
                self.nets.pop();
            }
        }
    }
}

fn generator(system: System, max_vertices: usize, max_nets: usize) -> Generator {
    Generator {
        system,
        max_vertices,
        max_nets,
        items: Vec::new(),
        nets: Vec::new(),
        seen: HashSet::new(),
        banged: Vec::new(),
    }
}

/// Nets derived from proof terms in `system`, deduplicated up to shape,
/// in generation order. Stops after `max_nets` nets.
pub fn proof_term_corpus(system: System, max_vertices: usize, max_nets: usize) -> Vec<CorpusEntry> {
    let mut g = generator(system, max_vertices, max_nets);
    g.close();
    g.nets
}

/// Every net of at most `exhaustive` vertices, followed by `sampled` nets
/// with cuts and at most `max_vertices` vertices built from them by seeded
/// random cuts and rule applications.
pub fn sampled_corpus(
    system: System,
    exhaustive: usize,
    max_vertices: usize,
    sampled: usize,
    seed: u64,
) -> Vec<CorpusEntry> {
    let mut g = generator(system, exhaustive, usize::MAX);
    g.close();
    g.sample(max_vertices, sampled, seed);
    g.nets
}

pub fn lambda_fixtures() -> Result<Vec<CorpusEntry>> {
    LAMBDA_FIXTURES
        .iter()
        .map(|src| {
            Ok(CorpusEntry {
                name: src.to_string(),
                net: from_lambda(&parse_lambda(src)?)?,
            })
        })
        .collect()
}

/// Hand-written fixtures for the light subsystems.
pub fn subsystem_fixture_terms(system: System) -> &'static [&'static str] {
    match system {
        System::Mell => &[],
        System::Ell => &[
            "(cut (prom (ax a)) (contr (prom (rtensor (ax a) (ax a))) 1 2) 1)",
            "(cut (prom (rlolli (ax a) 1)) (contr (rtensor (prom (ax [a -o a])) (prom (ax [a -o a]))) 1 2) 1)",
            "(cut (prom (prom (ax a))) (prom (contr (rtensor (prom (ax a)) (prom (ax a))) 1 2)) 1)",
            "(cut (prom (ax a)) (weak (ax b) [!a]) 2)",
        ],
        System::Sll => &[
            "(cut (prom (ax a)) (mux (rtensor (rtensor (ax a) (ax a)) (ax a)) 1 2 3) 1)",
            "(cut (prom (ax a)) (mux (rtensor (ax a) (ax a)) 1 2) 1)",
            "(cut (prom (prom (ax a))) (prom (mux (rtensor (ax a) (ax a)) 1 2)) 1)",
        ],
        System::Lll => &[
            "(cut (prom (prom (ax a))) (psec (contr (rtensor (prom (ax a)) (prom (ax a))) 1 2) 1) 1)",
            "(cut (prom (rlolli (ax a) 1)) (weak (ax b) [!(a -o a)]) 2)",
            "(cut (psec (ax a) 0) (psec (ax a) 0) 1)",
        ],
    }
}

/// Fixtures of `system`: the hand-written ones plus the generated nets
/// with at most `max_vertices` vertices.
pub fn subsystem_fixtures(
    system: System,
    max_vertices: usize,
    max_nets: usize,
) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for src in subsystem_fixture_terms(system) {
        let (net, _, _) = elaborate_with_sequent(&parse_proof_term(src)?, system)?;
        out.push(CorpusEntry {
            name: src.to_string(),
            net,
        });
    }
    out.extend(proof_term_corpus(system, max_vertices, max_nets));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsystems::check_membership;

    #[test]
    fn corpus_is_small_and_valid() {
        let c = proof_term_corpus(System::Mell, 8, 10_000);
        assert!(c.len() > 20);
        assert!(c
            .iter()
            .all(|e| e.net.size() <= 8 && validate(&e.net).is_empty()));
        assert!(c
            .iter()
            .any(|e| !crate::rewrite::find_cuts(&e.net).is_empty()));
    }

    #[test]
    fn fixtures_belong_to_their_system() {
        for s in [System::Ell, System::Sll, System::Lll] {
            let f = subsystem_fixtures(s, 8, 200).unwrap();
            for e in &f {
                assert_eq!(check_membership(&e.net, s), vec![], "{s}: {}", e.name);
            }
        }
        assert_eq!(lambda_fixtures().unwrap().len(), LAMBDA_FIXTURES.len());
    }
}
