use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write;

use crate::net::{Label, ProofNet, VertexId};

/// A string identifying the net up to renaming of vertices and edges.
///
/// Vertices are numbered breadth-first from the conclusion, then from the
/// premises in identifier order, following ports in order.
pub fn canonical_key(net: &ProofNet) -> String {
    key(net, true)
}

/// Like [`canonical_key`], ignoring the formulas carried by edges.
pub fn shape_key(net: &ProofNet) -> String {
    key(net, false)
}

fn key(net: &ProofNet, formulas: bool) -> String {
    let mut num: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut order = Vec::new();
    let roots = net
        .vertices
        .iter()
        .filter(|(_, v)| v.label == Label::C)
        .chain(net.vertices.iter().filter(|(_, v)| v.label == Label::P))
        .chain(net.vertices.iter())
        .map(|(id, _)| *id)
        .collect::<Vec<_>>();
    for root in roots {
        if num.contains_key(&root) {
            continue;
        }
        num.insert(root, order.len());
        order.push(root);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for e in net.vertices[&v].ports.iter().flatten() {
                let edge = &net.edges[e];
                for w in [edge.src, edge.tgt] {
                    if let Entry::Vacant(slot) = num.entry(w) {
                        slot.insert(order.len());
                        order.push(w);
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let mut out = String::new();
    let _ = write!(out, "{}|", net.system);
    for v in &order {
        let vx = &net.vertices[v];
        let _ = write!(out, "{}/{},", vx.label, vx.ports.len());
    }
    let mut edges: Vec<String> = net
        .edges
        .values()
        .map(|e| {
            let mut s = format!(
                "{}:{}>{}:{}",
                num[&e.src], e.src_port, num[&e.tgt], e.tgt_port
            );
            if formulas {
                let _ = write!(s, ":{}", e.formula);
            }
            s
        })
        .collect();
    edges.sort();
    out.push('|');
    out.push_str(&edges.join(","));
    let mut boxes: Vec<String> = net
        .boxes
        .iter()
        .map(|(r, b)| {
            let mut d: Vec<usize> = b.doors.iter().map(|x| num[x]).collect();
            let mut c: Vec<usize> = b.content.iter().map(|x| num[x]).collect();
            d.sort_unstable();
            c.sort_unstable();
            format!("{}{:?}{:?}", num[r], d, c)
        })
        .collect();
    boxes.sort();
    out.push('|');
    out.push_str(&boxes.join(","));
    out
}
