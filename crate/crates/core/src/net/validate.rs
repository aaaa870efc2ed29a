use std::fmt;

use serde::Serialize;

use super::{Dir, EdgeId, Label, ProofNet, System, VertexId};
use crate::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Subject {
    Net,
    Vertex(VertexId),
    Edge(EdgeId),
    Box(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub subject: Subject,
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subject {
            Subject::Net => write!(f, "net")?,
            Subject::Vertex(v) => write!(f, "vertex {v}")?,
            Subject::Edge(e) => write!(f, "edge {e}")?,
            Subject::Box(r) => write!(f, "box {r}")?,
        }
        write!(f, ": [{}] {}", self.rule, self.message)
    }
}

struct Collector(Vec<Diagnostic>);

impl Collector {
    fn push(&mut self, subject: Subject, rule: &'static str, message: impl Into<String>) {
        self.0.push(Diagnostic {
            subject,
            rule,
            message: message.into(),
        });
    }
}

/// Local structural checks: ports, typing, box nesting, unique conclusion.
pub fn validate(net: &ProofNet) -> Vec<Diagnostic> {
    let mut out = Collector(Vec::new());
    check_ports(net, &mut out);
    if !out.0.is_empty() {
        return out.0;
    }
    check_typing(net, &mut out);
    check_boxes(net, &mut out);
    if out.0.iter().all(|d| d.rule != "nesting" && d.rule != "box") {
        check_depths(net, &mut out);
    }
    out.0
}

fn check_ports(net: &ProofNet, out: &mut Collector) {
    let concl = net
        .vertices
        .values()
        .filter(|v| v.label == Label::C)
        .count();
    if concl != 1 {
        out.push(
            Subject::Net,
            "conclusion",
            format!("expected exactly one C vertex, found {concl}"),
        );
    }
    for (id, v) in &net.vertices {
        match v.label.fixed_arity() {
            Some(n) if n != v.ports.len() => {
                out.push(
                    Subject::Vertex(*id),
                    "arity",
                    format!("{} needs {n} ports, has {}", v.label, v.ports.len()),
                );
                continue;
            }
            None if v.ports.is_empty() => {
                out.push(Subject::Vertex(*id), "arity", "M needs a conclusion port");
                continue;
            }
            _ => {}
        }
        for (p, e) in v.ports.iter().enumerate() {
            let Some(e) = e else {
                out.push(
                    Subject::Vertex(*id),
                    "port",
                    format!("port {p} is dangling"),
                );
                continue;
            };
            let Some(edge) = net.edges.get(e) else {
                out.push(
                    Subject::Vertex(*id),
                    "port",
                    format!("port {p} refers to missing edge {e}"),
                );
                continue;
            };
            let as_src = edge.src == *id && edge.src_port == p;
            let as_tgt = edge.tgt == *id && edge.tgt_port == p;
            let want = v.label.port_dir(p);
            if !(as_src && want == Dir::Out || as_tgt && want == Dir::In) {
                out.push(
                    Subject::Vertex(*id),
                    "port",
                    format!(
                        "port {p} of {} must be {:?}going for edge {e}",
                        v.label, want
                    ),
                );
            }
        }
    }
    for (id, e) in &net.edges {
        for (v, p) in [(e.src, e.src_port), (e.tgt, e.tgt_port)] {
            match net.vertices.get(&v) {
                None => out.push(
                    Subject::Edge(*id),
                    "endpoint",
                    format!("missing vertex {v}"),
                ),
                Some(vx) if vx.ports.get(p) != Some(&Some(*id)) => out.push(
                    Subject::Edge(*id),
                    "endpoint",
                    format!("vertex {v} port {p} does not list this edge"),
                ),
                _ => {}
            }
        }
    }
}

fn check_typing(net: &ProofNet, out: &mut Collector) {
    let f = |v: VertexId, p: usize| -> &Formula { &net.edges[&net.port(v, p)].formula };
    for (id, v) in &net.vertices {
        let ok = match v.label {
            Label::P | Label::C => true,
            Label::RLolli => *f(*id, 2) == Formula::lolli(f(*id, 0).clone(), f(*id, 1).clone()),
            Label::LLolli => *f(*id, 0) == Formula::lolli(f(*id, 1).clone(), f(*id, 2).clone()),
            Label::RTensor => *f(*id, 2) == Formula::tensor(f(*id, 0).clone(), f(*id, 1).clone()),
            Label::LTensor => *f(*id, 0) == Formula::tensor(f(*id, 1).clone(), f(*id, 2).clone()),
            Label::RAll => match f(*id, 1) {
                Formula::Forall(_, body) => body.alpha_eq(f(*id, 0)),
                _ => false,
            },
            Label::LAll => match f(*id, 0) {
                Formula::Forall(x, body) => body.instance_witness(x, f(*id, 1)).is_some(),
                _ => false,
            },
            Label::X => {
                f(*id, 0).unbang().is_some() && f(*id, 0) == f(*id, 1) && f(*id, 0) == f(*id, 2)
            }
            Label::D | Label::LBang => f(*id, 0).unbang() == Some(f(*id, 1)),
            Label::N => match f(*id, 0).unbang() {
                Some(a) => *f(*id, 1) == Formula::bang(Formula::bang(a.clone())),
                None => false,
            },
            Label::W => f(*id, 0).unbang().is_some(),
            Label::RBang => f(*id, 1).unbang() == Some(f(*id, 0)),
            Label::LPar => f(*id, 0).unparagraph() == Some(f(*id, 1)),
            Label::RPar => f(*id, 1).unparagraph() == Some(f(*id, 0)),
            Label::M => match f(*id, 0).unbang() {
                Some(a) => (1..v.ports.len()).all(|i| f(*id, i) == a),
                None => false,
            },
        };
        if !ok {
            let shown: Vec<String> = (0..v.ports.len()).map(|p| f(*id, p).to_string()).collect();
            out.push(
                Subject::Vertex(*id),
                "typing",
                format!(
                    "{} with port formulas [{}] is ill-typed",
                    v.label,
                    shown.join(", ")
                ),
            );
        }
    }
    if net.system != System::Lll {
        for (id, e) in &net.edges {
            if e.formula.contains_paragraph() {
                out.push(
                    Subject::Edge(*id),
                    "typing",
                    "paragraph formulas require LLL mode",
                );
            }
        }
    }
}

fn check_boxes(net: &ProofNet, out: &mut Collector) {
    for (id, v) in &net.vertices {
        if v.label.is_principal() && !net.boxes.contains_key(id) {
            out.push(
                Subject::Vertex(*id),
                "box",
                "principal vertex without a box record",
            );
        }
        if v.label.is_door() {
            let owners = net.boxes.values().filter(|b| b.doors.contains(id)).count();
            if owners != 1 {
                out.push(
                    Subject::Vertex(*id),
                    "box",
                    format!("door belongs to {owners} boxes"),
                );
            }
        }
    }
    for (r, b) in &net.boxes {
        let Some(rv) = net.vertices.get(r) else {
            out.push(Subject::Box(*r), "box", "principal vertex missing");
            continue;
        };
        if !rv.label.is_principal() {
            out.push(
                Subject::Box(*r),
                "box",
                format!("principal vertex is labelled {}", rv.label),
            );
        }
        for d in &b.doors {
            match net.vertices.get(d).map(|x| x.label) {
                Some(Label::LBang) => {}
                Some(Label::LPar) if rv.label == Label::RPar => {}
                other => out.push(
                    Subject::Box(*r),
                    "box",
                    format!("door {d} has label {other:?}"),
                ),
            }
        }
        if b.content.contains(r) || b.doors.iter().any(|d| b.content.contains(d)) {
            out.push(Subject::Box(*r), "nesting", "box contains its own border");
        }
        for c in &b.content {
            if !net.vertices.contains_key(c) {
                out.push(
                    Subject::Box(*r),
                    "box",
                    format!("content vertex {c} missing"),
                );
            }
        }
    }
    let keys: Vec<VertexId> = net.boxes.keys().copied().collect();
    for (i, a) in keys.iter().enumerate() {
        for b in &keys[i + 1..] {
            let ba = &net.boxes[a];
            let bb = &net.boxes[b];
            let border_a = |x: &VertexId| x == a || ba.doors.contains(x);
            let border_b = |x: &VertexId| x == b || bb.doors.contains(x);
            let a_in_b = bb.content.contains(a);
            let b_in_a = ba.content.contains(b);
            let ok = if a_in_b {
                ba.doors.iter().all(|d| bb.content.contains(d)) && ba.content.is_subset(&bb.content)
            } else if b_in_a {
                bb.doors.iter().all(|d| ba.content.contains(d)) && bb.content.is_subset(&ba.content)
            } else {
                ba.content.is_disjoint(&bb.content)
                    && !ba.content.iter().any(border_b)
                    && !bb.content.iter().any(border_a)
            };
            if !ok {
                out.push(
                    Subject::Box(*a),
                    "nesting",
                    format!("box overlaps box {b} without nesting"),
                );
            }
        }
    }
}

fn check_depths(net: &ProofNet, out: &mut Collector) {
    let idx = net.index();
    for (id, e) in &net.edges {
        let a = net.endpoint_owner(&idx, e.src, e.src_port);
        let b = net.endpoint_owner(&idx, e.tgt, e.tgt_port);
        if a != b {
            out.push(
                Subject::Edge(*id),
                "nesting",
                format!("edge crosses a box border outside a door (owners {a:?} and {b:?})"),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::net::BoxRecord;
    use std::collections::BTreeSet;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn axiom_is_valid() {
        let mut g = ProofNet::new(System::Mell);
        let p = g.add_vertex(Label::P);
        let c = g.add_vertex(Label::C);
        g.add_edge((p, 0), (c, 0), f("a"));
        assert!(validate(&g).is_empty());
    }

    #[test]
    fn typing_mismatch_reported() {
        let mut g = ProofNet::new(System::Mell);
        let p = g.add_vertex(Label::P);
        let d = g.add_vertex(Label::D);
        let c = g.add_vertex(Label::C);
        g.add_edge((p, 0), (d, 0), f("!a"));
        g.add_edge((d, 1), (c, 0), f("b"));
        let diags = validate(&g);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].rule, "typing");
        assert_eq!(diags[0].subject, Subject::Vertex(d));
    }

    #[test]
    fn overlapping_boxes_reported() {
        // Two sibling boxes whose contents share a vertex.
        let mut g = ProofNet::new(System::Mell);
        let c = g.add_vertex(Label::C);
        let t = g.add_vertex(Label::RTensor);
        let r1 = g.add_vertex(Label::RBang);
        let r2 = g.add_vertex(Label::RBang);
        let p1 = g.add_vertex(Label::P);
        let p2 = g.add_vertex(Label::P);
        g.add_edge((p1, 0), (r1, 0), f("a"));
        g.add_edge((p2, 0), (r2, 0), f("a"));
        g.add_edge((r1, 1), (t, 0), f("!a"));
        g.add_edge((r2, 1), (t, 1), f("!a"));
        g.add_edge((t, 2), (c, 0), f("!a * !a"));
        g.boxes.insert(
            r1,
            BoxRecord {
                doors: vec![],
                content: BTreeSet::from([p1, p2]),
            },
        );
        g.boxes.insert(
            r2,
            BoxRecord {
                doors: vec![],
                content: BTreeSet::from([p2]),
            },
        );
        let diags = validate(&g);
        assert!(diags.iter().any(|d| d.rule == "nesting"), "{diags:?}");
    }
}
