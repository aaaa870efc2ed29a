use std::collections::BTreeMap;
use std::fmt::Write;

use pnlab_core::rewrite::find_cuts;
use pnlab_core::{ProofNet, VertexId};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Innermost box holding each vertex. Doors and principal vertices are drawn
/// inside their own box.
fn placement(net: &ProofNet) -> BTreeMap<VertexId, Option<VertexId>> {
    let mut place = BTreeMap::new();
    for v in net.vertices.keys() {
        let mut best: Option<(usize, VertexId)> = None;
        for (r, b) in &net.boxes {
            if *r == *v || b.doors.contains(v) || b.content.contains(v) {
                let size = b.content.len();
                if best.is_none_or(|(s, _)| size < s) {
                    best = Some((size, *r));
                }
            }
        }
        place.insert(*v, best.map(|(_, r)| r));
    }
    place
}

/// Box containing box `r`, if any.
fn parent(net: &ProofNet, r: VertexId) -> Option<VertexId> {
    net.boxes
        .iter()
        .filter(|(o, b)| **o != r && b.content.contains(&r))
        .min_by_key(|(_, b)| b.content.len())
        .map(|(o, _)| *o)
}

fn cluster(
    out: &mut String,
    net: &ProofNet,
    owner: Option<VertexId>,
    place: &BTreeMap<VertexId, Option<VertexId>>,
    indent: usize,
) {
    let pad = "  ".repeat(indent);
    for (v, o) in place {
        if *o == owner {
            let _ = writeln!(
                out,
                "{pad}v{v} [label={}];",
                quote(&format!("{} {v}", net.label(*v)))
            );
        }
    }
    for r in net.boxes.keys() {
        if parent(net, *r) == owner {
            let _ = writeln!(out, "{pad}subgraph cluster_{r} {{");
            let _ = writeln!(out, "{pad}  label={};", quote(&format!("box {r}")));
            let _ = writeln!(out, "{pad}  style=rounded;");
            cluster(out, net, Some(*r), place, indent + 1);
            let _ = writeln!(out, "{pad}}}");
        }
    }
}

/// Graphviz rendering: vertices with labels, boxes as nested clusters, cuts in red.
pub fn to_dot(net: &ProofNet) -> String {
    let cuts: Vec<_> = find_cuts(net).into_iter().map(|c| c.edge).collect();
    let mut out = String::from("digraph proofnet {\n  node [shape=box];\n");
    cluster(&mut out, net, None, &placement(net), 1);
    for (id, e) in &net.edges {
        let style = if cuts.contains(id) {
            ", color=red, penwidth=2"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  v{} -> v{} [label={}{style}];",
            e.src,
            e.tgt,
            quote(&format!("{id}: {}", e.formula))
        );
    }
    out.push_str("}\n");
    out
}
