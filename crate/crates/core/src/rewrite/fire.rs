use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{cut_kind, CutKind};
use crate::error::{Error, Result};
use crate::formula::{substitute, Formula};
use crate::net::{BoxRecord, EdgeId, Label, ProofNet, VertexId};

/// Where the items of a duplicated box went: entry `i` of each list is the
/// `i`-th copy (`0` is the original identifier, i.e. the left copy).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CopyMap {
    pub vertices: BTreeMap<VertexId, Vec<VertexId>>,
    pub edges: BTreeMap<EdgeId, Vec<EdgeId>>,
}

#[derive(Clone, Debug)]
pub struct Fired {
    pub net: ProofNet,
    pub kind: CutKind,
    /// Set for duplicating steps.
    pub copies: Option<CopyMap>,
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::PatternMismatch(msg.into())
}

fn port(net: &ProofNet, v: VertexId, p: usize) -> Result<EdgeId> {
    net.vertices
        .get(&v)
        .and_then(|x| x.ports.get(p).copied().flatten())
        .ok_or_else(|| mismatch(format!("vertex {v} has no edge on port {p}")))
}

/// Principals of the boxes containing `v`.
fn enclosing(net: &ProofNet, v: VertexId) -> Vec<VertexId> {
    net.boxes
        .iter()
        .filter(|(_, b)| b.content.contains(&v))
        .map(|(r, _)| *r)
        .collect()
}

fn add_at(net: &mut ProofNet, encl: &[VertexId], label: Label, arity: usize) -> VertexId {
    let v = net.add_vertex_with_arity(label, arity);
    for r in encl {
        net.boxes
            .get_mut(r)
            .expect("enclosing box")
            .content
            .insert(v);
    }
    v
}

/// Joins the edge entering a vanishing port with the edge leaving another one.
fn splice(net: &mut ProofNet, into: EdgeId, out_of: EdgeId) -> Result<()> {
    if into == out_of {
        return Err(mismatch(format!(
            "edge {into} closes a cycle through the redex"
        )));
    }
    let (t, tp) = {
        let e = &net.edges[&out_of];
        (e.tgt, e.tgt_port)
    };
    net.remove_edge(out_of);
    net.set_tgt(into, t, tp);
    Ok(())
}

fn splice_at(net: &mut ProofNet, into: (VertexId, usize), out_of: (VertexId, usize)) -> Result<()> {
    let a = port(net, into.0, into.1)?;
    let b = port(net, out_of.0, out_of.1)?;
    splice(net, a, b)
}

fn box_items(net: &ProofNet, r: VertexId) -> BTreeSet<VertexId> {
    let b = &net.boxes[&r];
    let mut s: BTreeSet<VertexId> = b.content.clone();
    s.insert(r);
    s.extend(b.doors.iter().copied());
    s
}

/// Adds a fresh copy of the box at `r` without its principal edge and door
/// premises; returns the vertex and edge renamings.
fn duplicate(
    net: &mut ProofNet,
    r: VertexId,
) -> (BTreeMap<VertexId, VertexId>, BTreeMap<EdgeId, EdgeId>) {
    let items = box_items(net, r);
    let doors: BTreeSet<VertexId> = net.boxes[&r].doors.iter().copied().collect();
    let encl = enclosing(net, r);
    let mut vmap = BTreeMap::new();
    for v in &items {
        let (label, arity) = (net.vertices[v].label, net.vertices[v].ports.len());
        vmap.insert(*v, add_at(net, &encl, label, arity));
    }
    let inner: Vec<(EdgeId, crate::net::Edge)> = net
        .edges
        .iter()
        .filter(|(_, e)| {
            items.contains(&e.src)
                && items.contains(&e.tgt)
                && !(e.src == r && e.src_port == 1)
                && !(doors.contains(&e.tgt) && e.tgt_port == 0)
        })
        .map(|(id, e)| (*id, e.clone()))
        .collect();
    let mut emap = BTreeMap::new();
    for (id, e) in inner {
        let new = net.add_edge(
            (vmap[&e.src], e.src_port),
            (vmap[&e.tgt], e.tgt_port),
            e.formula,
        );
        emap.insert(id, new);
    }
    let records: Vec<(VertexId, BoxRecord)> = net
        .boxes
        .iter()
        .filter(|(p, _)| items.contains(p))
        .map(|(p, b)| (*p, b.clone()))
        .collect();
    for (p, b) in records {
        net.boxes.insert(
            vmap[&p],
            BoxRecord {
                doors: b.doors.iter().map(|d| vmap[d]).collect(),
                content: b.content.iter().map(|c| vmap[c]).collect(),
            },
        );
    }
    (vmap, emap)
}

/// Vertex and edge renaming of one box copy.
type Renaming = (BTreeMap<VertexId, VertexId>, BTreeMap<EdgeId, EdgeId>);

fn record_copies(
    map: &mut CopyMap,
    items: &BTreeSet<VertexId>,
    edges: &[EdgeId],
    copies: &[Renaming],
) {
    for v in items {
        let mut l = vec![*v];
        l.extend(copies.iter().map(|(vm, _)| vm[v]));
        map.vertices.insert(*v, l);
    }
    for e in edges {
        let mut l = vec![*e];
        l.extend(copies.iter().map(|(_, em)| em[e]));
        map.edges.insert(*e, l);
    }
}

/// Removes the vertices and every edge touching them.
fn erase(net: &mut ProofNet, vs: &BTreeSet<VertexId>) {
    let dead: Vec<EdgeId> = net
        .edges
        .iter()
        .filter(|(_, e)| vs.contains(&e.src) || vs.contains(&e.tgt))
        .map(|(id, _)| *id)
        .collect();
    for e in dead {
        net.remove_edge(e);
    }
    for v in vs {
        net.remove_vertex(*v);
    }
}

/// Substitutes `b` for the eigenvariable `x` along the edges reachable from
/// `start` through edges where `x` is free, without crossing `stop`.
fn substitute_component(net: &mut ProofNet, start: EdgeId, stop: VertexId, x: &str, b: &Formula) {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(e) = queue.pop_front() {
        let (s, t) = (net.edges[&e].src, net.edges[&e].tgt);
        for v in [s, t] {
            if v == stop {
                continue;
            }
            for f in net.vertices[&v].ports.iter().flatten() {
                if !seen.contains(f) && net.edges[f].formula.free_vars().contains(x) {
                    seen.insert(*f);
                    queue.push_back(*f);
                }
            }
        }
    }
    for e in seen {
        let f = substitute(&net.edges[&e].formula, x, b);
        net.edges.get_mut(&e).expect("edge").formula = f;
    }
}

/// Applies the rewriting rule of the cut at `edge`.
pub fn fire(net: &ProofNet, edge: EdgeId) -> Result<Fired> {
    let kind = cut_kind(net, edge).ok_or(Error::CutNotPresent(edge))?;
    let mut g = net.clone();
    let (src, tgt) = (g.edges[&edge].src, g.edges[&edge].tgt);
    let mut copies = None;
    match kind {
        CutKind::Lolli => {
            splice_at(&mut g, (tgt, 1), (src, 0))?;
            splice_at(&mut g, (src, 1), (tgt, 2))?;
            erase(&mut g, &BTreeSet::from([src, tgt]));
        }
        CutKind::Tensor => {
            splice_at(&mut g, (src, 0), (tgt, 1))?;
            splice_at(&mut g, (src, 1), (tgt, 2))?;
            erase(&mut g, &BTreeSet::from([src, tgt]));
        }
        CutKind::Forall => {
            let (x, body) = match &g.edges[&edge].formula {
                Formula::Forall(x, body) => (x.clone(), (**body).clone()),
                other => return Err(mismatch(format!("forall cut carries {other}"))),
            };
            let inst = g.edges[&port(&g, tgt, 1)?].formula.clone();
            let witness = body.instance_witness(&x, &inst).ok_or_else(|| {
                mismatch(format!(
                    "{inst} is not an instance of {}",
                    g.edges[&edge].formula
                ))
            })?;
            let premise = port(&g, src, 0)?;
            if let Some(b) = witness {
                substitute_component(&mut g, premise, src, &x, &b);
            }
            {
                let out = port(&g, tgt, 1)?;
                splice(&mut g, premise, out)?
            };
            erase(&mut g, &BTreeSet::from([src, tgt]));
        }
        CutKind::W => {
            let encl = enclosing(&g, src);
            let doors = g.boxes[&src].doors.clone();
            for d in &doors {
                let e = port(&g, *d, 0)?;
                let w = add_at(&mut g, &encl, Label::W, 1);
                g.set_tgt(e, w, 0);
            }
            let mut dead = box_items(&g, src);
            dead.insert(tgt);
            erase(&mut g, &dead);
        }
        CutKind::D => {
            let doors = g.boxes[&src].doors.clone();
            splice_at(&mut g, (src, 0), (tgt, 1))?;
            erase(&mut g, &BTreeSet::from([src, tgt]));
            for d in doors {
                g.vertices.get_mut(&d).expect("door").label = Label::D;
            }
        }
        CutKind::Bang => {
            let outer = g
                .boxes
                .iter()
                .find(|(_, b)| b.doors.contains(&tgt))
                .map(|(r, _)| *r)
                .ok_or_else(|| mismatch(format!("door {tgt} belongs to no box")))?;
            let inner = g.boxes[&src].clone();
            let pos = g.boxes[&outer]
                .doors
                .iter()
                .position(|d| *d == tgt)
                .expect("door listed");
            splice_at(&mut g, (src, 0), (tgt, 1))?;
            erase(&mut g, &BTreeSet::from([src, tgt]));
            let rec = g.boxes.get_mut(&outer).expect("outer box");
            let mut doors = rec.doors.clone();
            doors.splice(pos..pos, inner.doors.iter().copied());
            rec.doors = doors;
            rec.content.extend(inner.content.iter().copied());
        }
        CutKind::N => {
            let encl = enclosing(&g, src);
            let items = box_items(&g, src);
            let doors = g.boxes[&src].doors.clone();
            let r = add_at(&mut g, &encl, Label::RBang, 2);
            let out = port(&g, tgt, 1)?;
            g.set_src(out, r, 1);
            g.set_tgt(edge, r, 0);
            let mut new_doors = Vec::new();
            for d in &doors {
                let e = port(&g, *d, 0)?;
                let f = g.edges[&e].formula.clone();
                let n = add_at(&mut g, &encl, Label::N, 2);
                let dd = add_at(&mut g, &encl, Label::LBang, 2);
                g.set_tgt(e, n, 0);
                g.add_edge((n, 1), (dd, 0), Formula::bang(f.clone()));
                g.add_edge((dd, 1), (*d, 0), f);
                new_doors.push(dd);
            }
            g.remove_vertex(tgt);
            g.boxes.insert(
                r,
                BoxRecord {
                    doors: new_doors,
                    content: items,
                },
            );
        }
        CutKind::X => {
            let encl = enclosing(&g, src);
            let items = box_items(&g, src);
            let doors = g.boxes[&src].doors.clone();
            let inner_edges: Vec<EdgeId> = g
                .edges
                .iter()
                .filter(|(_, e)| {
                    items.contains(&e.src)
                        && items.contains(&e.tgt)
                        && !(e.src == src && e.src_port == 1)
                        && !(doors.contains(&e.tgt) && e.tgt_port == 0)
                })
                .map(|(id, _)| *id)
                .collect();
            let dup = duplicate(&mut g, src);
            {
                let out = port(&g, tgt, 1)?;
                splice(&mut g, edge, out)?
            };
            let right = port(&g, tgt, 2)?;
            g.set_src(right, dup.0[&src], 1);
            for d in &doors {
                let e = port(&g, *d, 0)?;
                let f = g.edges[&e].formula.clone();
                let x = add_at(&mut g, &encl, Label::X, 3);
                g.set_tgt(e, x, 0);
                g.add_edge((x, 1), (*d, 0), f.clone());
                g.add_edge((x, 2), (dup.0[d], 0), f);
            }
            g.remove_vertex(tgt);
            let mut map = CopyMap::default();
            record_copies(&mut map, &items, &inner_edges, &[dup]);
            copies = Some(map);
        }
        CutKind::M => {
            let k = g.vertices[&tgt].ports.len() - 1;
            let encl = enclosing(&g, src);
            let items = box_items(&g, src);
            let doors = g.boxes[&src].doors.clone();
            if k == 0 {
                for d in &doors {
                    let e = port(&g, *d, 0)?;
                    let m = add_at(&mut g, &encl, Label::M, 1);
                    g.set_tgt(e, m, 0);
                }
                let mut dead = items;
                dead.insert(tgt);
                erase(&mut g, &dead);
            } else {
                let inner_edges: Vec<EdgeId> = g
                    .edges
                    .iter()
                    .filter(|(_, e)| {
                        items.contains(&e.src)
                            && items.contains(&e.tgt)
                            && !(e.src == src && e.src_port == 1)
                            && !(doors.contains(&e.tgt) && e.tgt_port == 0)
                    })
                    .map(|(id, _)| *id)
                    .collect();
                let dups: Vec<_> = (1..k).map(|_| duplicate(&mut g, src)).collect();
                let mut map = CopyMap::default();
                record_copies(&mut map, &items, &inner_edges, &dups);
                let principal = |i: usize| if i == 0 { src } else { dups[i - 1].0[&src] };
                let door_copy = |i: usize, d: VertexId| if i == 0 { d } else { dups[i - 1].0[&d] };
                g.remove_edge(edge);
                for i in 0..k {
                    splice_at(&mut g, (principal(i), 0), (tgt, i + 1))?;
                }
                for d in &doors {
                    let e = port(&g, *d, 0)?;
                    let m = add_at(&mut g, &encl, Label::M, k + 1);
                    g.set_tgt(e, m, 0);
                    for i in 0..k {
                        let dc = door_copy(i, *d);
                        let inner = port(&g, dc, 1)?;
                        g.set_src(inner, m, i + 1);
                    }
                }
                let mut dead = BTreeSet::from([tgt]);
                for i in 0..k {
                    dead.insert(principal(i));
                    for d in &doors {
                        dead.insert(door_copy(i, *d));
                    }
                }
                erase(&mut g, &dead);
                copies = Some(map);
            }
        }
    }
    Ok(Fired {
        net: g,
        kind,
        copies,
    })
}
