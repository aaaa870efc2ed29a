use std::collections::BTreeSet;

use super::proof_term::ProofTerm;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::net::{BoxRecord, EdgeId, Label, ProofNet, System, VertexId};

/// Sub-net under construction: premise vertices in sequent order and the conclusion vertex.
struct Frag {
    premises: Vec<VertexId>,
    concl: VertexId,
    verts: BTreeSet<VertexId>,
}

struct Builder {
    net: ProofNet,
}

fn side(rule: &str, msg: impl Into<String>) -> Error {
    Error::SideCondition {
        rule: rule.to_string(),
        msg: msg.into(),
    }
}

/// System a term needs: `mux` forces SLL, paragraphs force LLL.
pub fn infer_system(t: &ProofTerm) -> System {
    fn walk(t: &ProofTerm, mux: &mut bool, par: &mut bool) {
        match t {
            ProofTerm::Mux(..) => *mux = true,
            ProofTerm::PSec(..) => *par = true,
            ProofTerm::Ax(f) | ProofTerm::Weak(_, f) | ProofTerm::LAll(_, _, f)
                if f.contains_paragraph() =>
            {
                *par = true
            }
            _ => {}
        }
        for c in t.children() {
            walk(c, mux, par);
        }
    }
    let (mut mux, mut par) = (false, false);
    walk(t, &mut mux, &mut par);
    if par {
        System::Lll
    } else if mux {
        System::Sll
    } else {
        System::Mell
    }
}

/// Builds the proof-net of a proof term.
pub fn elaborate(t: &ProofTerm) -> Result<ProofNet> {
    elaborate_in(t, infer_system(t))
}

pub fn elaborate_in(t: &ProofTerm, system: System) -> Result<ProofNet> {
    Ok(elaborate_with_sequent(t, system)?.0)
}

/// The net together with its premise formulas in sequent order and its conclusion.
pub fn elaborate_with_sequent(
    t: &ProofTerm,
    system: System,
) -> Result<(ProofNet, Vec<Formula>, Formula)> {
    let mut b = Builder {
        net: ProofNet::new(system),
    };
    let frag = b.go(t)?;
    let prem = frag.premises.iter().map(|p| b.prem_formula(*p)).collect();
    let concl = b.net.edges[&b.net.port(frag.concl, 0)].formula.clone();
    Ok((b.net, prem, concl))
}

impl Builder {
    fn add(&mut self, frag: &mut Frag, label: Label) -> VertexId {
        let v = self.net.add_vertex(label);
        frag.verts.insert(v);
        v
    }

    fn remove(&mut self, frag: &mut Frag, v: VertexId) {
        self.net.remove_vertex(v);
        frag.verts.remove(&v);
    }

    fn prem_edge(&self, p: VertexId) -> EdgeId {
        self.net.port(p, 0)
    }

    fn prem_formula(&self, p: VertexId) -> Formula {
        self.net.edges[&self.prem_edge(p)].formula.clone()
    }

    fn concl_edge(&self, f: &Frag) -> EdgeId {
        self.net.port(f.concl, 0)
    }

    fn concl_formula(&self, f: &Frag) -> Formula {
        self.net.edges[&self.concl_edge(f)].formula.clone()
    }

    fn index(&self, f: &Frag, i: usize, rule: &str) -> Result<usize> {
        if i == 0 || i > f.premises.len() {
            return Err(side(
                rule,
                format!(
                    "premise index {i} out of range ({} premises)",
                    f.premises.len()
                ),
            ));
        }
        Ok(i - 1)
    }

    /// Replaces premise `p` (edge re-sourced at `(v, port)`) by a fresh edge `p -> v:in_port`.
    fn hook(&mut self, p: VertexId, v: VertexId, port: usize, in_port: usize, formula: Formula) {
        let e = self.prem_edge(p);
        self.net.set_src(e, v, port);
        self.net.add_edge((p, 0), (v, in_port), formula);
    }

    /// Moves the conclusion edge into `(v, in_port)` and adds `v:out_port -> C`.
    fn cap(&mut self, f: &Frag, v: VertexId, in_port: usize, out_port: usize, formula: Formula) {
        let e = self.concl_edge(f);
        self.net.set_tgt(e, v, in_port);
        self.net.add_edge((v, out_port), (f.concl, 0), formula);
    }

    fn go(&mut self, t: &ProofTerm) -> Result<Frag> {
        match t {
            ProofTerm::Ax(a) => {
                let p = self.net.add_vertex(Label::P);
                let c = self.net.add_vertex(Label::C);
                self.net.add_edge((p, 0), (c, 0), a.clone());
                Ok(Frag {
                    premises: vec![p],
                    concl: c,
                    verts: BTreeSet::from([p, c]),
                })
            }
            ProofTerm::Cut(a, b, i) => {
                let fa = self.go(a)?;
                let mut fb = self.go(b)?;
                let i0 = self.index(&fb, *i, "cut")?;
                let pa = self.concl_formula(&fa);
                let pb = self.prem_formula(fb.premises[i0]);
                if !pa.alpha_eq(&pb) {
                    return Err(side(
                        "cut",
                        format!("conclusion {pa} does not match premise {i} ({pb})"),
                    ));
                }
                let ep = self.concl_edge(&fa);
                let eq = self.prem_edge(fb.premises[i0]);
                let (tv, tp) = {
                    let e = &self.net.edges[&eq];
                    (e.tgt, e.tgt_port)
                };
                self.net.remove_edge(eq);
                let pq = fb.premises.remove(i0);
                self.net.remove_vertex(pq);
                self.net.remove_vertex(fa.concl);
                self.net.set_tgt(ep, tv, tp);
                let mut verts = fa.verts;
                verts.extend(fb.verts);
                verts.remove(&pq);
                verts.remove(&fa.concl);
                let mut premises = fa.premises;
                premises.extend(fb.premises);
                Ok(Frag {
                    premises,
                    concl: fb.concl,
                    verts,
                })
            }
            ProofTerm::Weak(a, f) => {
                let mut fa = self.go(a)?;
                if f.unbang().is_none() {
                    return Err(side("weak", format!("weakened formula {f} is not banged")));
                }
                let w = self.add(&mut fa, Label::W);
                let p = self.add(&mut fa, Label::P);
                self.net.add_edge((p, 0), (w, 0), f.clone());
                fa.premises.push(p);
                Ok(fa)
            }
            ProofTerm::Contr(a, i, j) => {
                let mut fa = self.go(a)?;
                let i0 = self.index(&fa, *i, "contr")?;
                let j0 = self.index(&fa, *j, "contr")?;
                if i0 == j0 {
                    return Err(side("contr", format!("premise {i} contracted with itself")));
                }
                let fi = self.prem_formula(fa.premises[i0]);
                let fj = self.prem_formula(fa.premises[j0]);
                if fi.unbang().is_none() || !fi.alpha_eq(&fj) {
                    return Err(side(
                        "contr",
                        format!("premises {i} ({fi}) and {j} ({fj}) must be equal banged formulas"),
                    ));
                }
                let x = self.add(&mut fa, Label::X);
                let (pi, pj) = (fa.premises[i0], fa.premises[j0]);
                let ej = self.prem_edge(pj);
                self.net.set_src(ej, x, 2);
                self.remove(&mut fa, pj);
                self.hook(pi, x, 1, 0, fi);
                fa.premises.remove(j0);
                Ok(fa)
            }
            ProofTerm::RLolli(a, i) => {
                let mut fa = self.go(a)?;
                let i0 = self.index(&fa, *i, "rlolli")?;
                let p = fa.premises.remove(i0);
                let fp = self.prem_formula(p);
                let fc = self.concl_formula(&fa);
                let r = self.add(&mut fa, Label::RLolli);
                let e = self.prem_edge(p);
                self.net.set_src(e, r, 0);
                self.remove(&mut fa, p);
                self.cap(&fa, r, 1, 2, Formula::lolli(fp, fc));
                Ok(fa)
            }
            ProofTerm::LLolli(a, b, i) => {
                let fa = self.go(a)?;
                let mut fb = self.go(b)?;
                let i0 = self.index(&fb, *i, "llolli")?;
                let arg = self.concl_formula(&fa);
                let p = fb.premises.remove(i0);
                let res = self.prem_formula(p);
                let l = self.net.add_vertex(Label::LLolli);
                let ep = self.concl_edge(&fa);
                self.net.set_tgt(ep, l, 1);
                self.net.remove_vertex(fa.concl);
                self.hook(p, l, 2, 0, Formula::lolli(arg, res));
                let mut verts = fa.verts;
                verts.extend(fb.verts);
                verts.remove(&fa.concl);
                verts.insert(l);
                let mut premises = fa.premises;
                premises.extend(fb.premises);
                premises.push(p);
                Ok(Frag {
                    premises,
                    concl: fb.concl,
                    verts,
                })
            }
            ProofTerm::RTensor(a, b) => {
                let fa = self.go(a)?;
                let fb = self.go(b)?;
                let (x, y) = (self.concl_formula(&fa), self.concl_formula(&fb));
                let t = self.net.add_vertex(Label::RTensor);
                let eb = self.concl_edge(&fb);
                self.net.set_tgt(eb, t, 1);
                self.net.remove_vertex(fb.concl);
                self.cap(&fa, t, 0, 2, Formula::tensor(x, y));
                let mut verts = fa.verts;
                verts.extend(fb.verts);
                verts.remove(&fb.concl);
                verts.insert(t);
                let mut premises = fa.premises;
                premises.extend(fb.premises);
                Ok(Frag {
                    premises,
                    concl: fa.concl,
                    verts,
                })
            }
            ProofTerm::LTensor(a, i, j) => {
                let mut fa = self.go(a)?;
                let i0 = self.index(&fa, *i, "ltensor")?;
                let j0 = self.index(&fa, *j, "ltensor")?;
                if i0 == j0 {
                    return Err(side("ltensor", format!("premise {i} used twice")));
                }
                let (pi, pj) = (fa.premises[i0], fa.premises[j0]);
                let f = Formula::tensor(self.prem_formula(pi), self.prem_formula(pj));
                let l = self.add(&mut fa, Label::LTensor);
                let ej = self.prem_edge(pj);
                self.net.set_src(ej, l, 2);
                self.remove(&mut fa, pj);
                self.hook(pi, l, 1, 0, f);
                fa.premises.remove(j0);
                Ok(fa)
            }
            ProofTerm::Prom(a) => {
                let fa = self.go(a)?;
                let k = fa.premises.len();
                self.boxed(fa, k, "prom")
            }
            ProofTerm::PSec(a, k) => {
                let fa = self.go(a)?;
                if *k > fa.premises.len() {
                    return Err(side(
                        "psec",
                        format!(
                            "{k} ! doors requested but only {} premises",
                            fa.premises.len()
                        ),
                    ));
                }
                self.boxed(fa, *k, "psec")
            }
            ProofTerm::Der(a, i) => {
                let mut fa = self.go(a)?;
                let i0 = self.index(&fa, *i, "der")?;
                let p = fa.premises[i0];
                let f = self.prem_formula(p);
                let d = self.add(&mut fa, Label::D);
                self.hook(p, d, 1, 0, Formula::bang(f));
                Ok(fa)
            }
            ProofTerm::Dig(a, i) => {
                let mut fa = self.go(a)?;
                let i0 = self.index(&fa, *i, "dig")?;
                let p = fa.premises[i0];
                let f = self.prem_formula(p);
                let inner = match f.unbang().and_then(Formula::unbang) {
                    Some(x) => x.clone(),
                    None => {
                        return Err(side(
                            "dig",
                            format!("premise {i} ({f}) is not of the form !!A"),
                        ))
                    }
                };
                let n = self.add(&mut fa, Label::N);
                self.hook(p, n, 1, 0, Formula::bang(inner));
                Ok(fa)
            }
            ProofTerm::RAll(a, x) => {
                let mut fa = self.go(a)?;
                for (k, p) in fa.premises.iter().enumerate() {
                    if self.prem_formula(*p).free_vars().contains(x) {
                        return Err(side("rall", format!("{x} is free in premise {}", k + 1)));
                    }
                }
                let body = self.concl_formula(&fa);
                let r = self.add(&mut fa, Label::RAll);
                self.cap(&fa, r, 0, 1, Formula::forall(x, body));
                Ok(fa)
            }
            ProofTerm::LAll(a, i, f) => {
                let mut fa = self.go(a)?;
                let i0 = self.index(&fa, *i, "lall")?;
                let p = fa.premises[i0];
                let inst = self.prem_formula(p);
                let ok = match f {
                    Formula::Forall(x, body) => body.instance_witness(x, &inst).is_some(),
                    _ => false,
                };
                if !ok {
                    return Err(side(
                        "lall",
                        format!("premise {i} ({inst}) is not an instance of {f}"),
                    ));
                }
                let l = self.add(&mut fa, Label::LAll);
                self.hook(p, l, 1, 0, f.clone());
                Ok(fa)
            }
            ProofTerm::Mux(a, is) => {
                let mut fa = self.go(a)?;
                let mut idx = Vec::new();
                for i in is {
                    let i0 = self.index(&fa, *i, "mux")?;
                    if idx.contains(&i0) {
                        return Err(side("mux", format!("premise {i} used twice")));
                    }
                    idx.push(i0);
                }
                let f = self.prem_formula(fa.premises[idx[0]]);
                for (k, i0) in idx.iter().enumerate() {
                    if !self.prem_formula(fa.premises[*i0]).alpha_eq(&f) {
                        return Err(side(
                            "mux",
                            format!("premise {} differs from premise {}", is[k], is[0]),
                        ));
                    }
                }
                let m = self.net.add_vertex_with_arity(Label::M, idx.len() + 1);
                fa.verts.insert(m);
                for (k, i0) in idx.iter().enumerate().skip(1) {
                    let p = fa.premises[*i0];
                    let e = self.prem_edge(p);
                    self.net.set_src(e, m, k + 1);
                    self.remove(&mut fa, p);
                }
                let keep = fa.premises[idx[0]];
                self.hook(keep, m, 1, 0, Formula::bang(f));
                let drop: BTreeSet<usize> = idx[1..].iter().copied().collect();
                fa.premises = fa
                    .premises
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| !drop.contains(k))
                    .map(|(_, p)| *p)
                    .collect();
                Ok(fa)
            }
        }
    }

    /// Wraps a fragment in a box; the first `bang_doors` premises get `!` doors,
    /// the others paragraph doors (only for paragraph boxes).
    fn boxed(&mut self, mut fa: Frag, bang_doors: usize, rule: &str) -> Result<Frag> {
        let paragraph = rule == "psec";
        let mut content = fa.verts.clone();
        for p in &fa.premises {
            content.remove(p);
        }
        content.remove(&fa.concl);
        let mut doors = Vec::new();
        for (k, p) in fa.premises.clone().into_iter().enumerate() {
            let f = self.prem_formula(p);
            let (label, outer) = if k < bang_doors {
                (Label::LBang, Formula::bang(f))
            } else {
                (Label::LPar, Formula::paragraph(f))
            };
            let d = self.add(&mut fa, label);
            self.hook(p, d, 1, 0, outer);
            doors.push(d);
        }
        let body = self.concl_formula(&fa);
        let (label, out) = if paragraph {
            (Label::RPar, Formula::paragraph(body))
        } else {
            (Label::RBang, Formula::bang(body))
        };
        let r = self.add(&mut fa, label);
        self.cap(&fa, r, 0, 1, out);
        self.net.boxes.insert(r, BoxRecord { doors, content });
        Ok(fa)
    }
}
