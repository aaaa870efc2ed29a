//! Proof-nets: labelled directed graphs with ordered ports and explicit boxes.
//!
//! Edges run from the premise side to the conclusion side. Each vertex keeps
//! its incident edges in port order; the port layout of every label is fixed
//! by [`Label::port_dirs`]. A box is keyed by its principal (`Rbang`/`Rpar`)
//! vertex and records its doors and the set of vertices strictly inside it
//! (including nested boxes). Doors and principal vertices sit at the depth of
//! the box itself; the edges on their inner ports lie one level deeper.

mod format;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;

pub use format::parse_net;
pub use validate::{validate, Diagnostic};

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum System {
    Mell,
    Ell,
    Sll,
    Lll,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Mell => "MELL",
            System::Ell => "ELL",
            System::Sll => "SLL",
            System::Lll => "LLL",
        })
    }
}

impl FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<System> {
        match s.to_ascii_uppercase().as_str() {
            "MELL" => Ok(System::Mell),
            "ELL" => Ok(System::Ell),
            "SLL" => Ok(System::Sll),
            "LLL" => Ok(System::Lll),
            _ => Err(Error::InvalidArgument(format!("unknown system `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    RLolli,
    LLolli,
    RTensor,
    LTensor,
    RAll,
    LAll,
    RBang,
    LBang,
    W,
    X,
    D,
    N,
    P,
    C,
    M,
    RPar,
    LPar,
}

/// Whether the vertex is the source (`Out`) or target (`In`) of the edge at a port.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    In,
    Out,
}

use Dir::{In, Out};

impl Label {
    pub const ALL: [Label; 17] = [
        Label::RLolli,
        Label::LLolli,
        Label::RTensor,
        Label::LTensor,
        Label::RAll,
        Label::LAll,
        Label::RBang,
        Label::LBang,
        Label::W,
        Label::X,
        Label::D,
        Label::N,
        Label::P,
        Label::C,
        Label::M,
        Label::RPar,
        Label::LPar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Label::RLolli => "Rlolli",
            Label::LLolli => "Llolli",
            Label::RTensor => "Rtensor",
            Label::LTensor => "Ltensor",
            Label::RAll => "Rall",
            Label::LAll => "Lall",
            Label::RBang => "Rbang",
            Label::LBang => "Lbang",
            Label::W => "W",
            Label::X => "X",
            Label::D => "D",
            Label::N => "N",
            Label::P => "P",
            Label::C => "C",
            Label::M => "M",
            Label::RPar => "Rpar",
            Label::LPar => "Lpar",
        }
    }

    /// Port directions; `M` is given for arity 0 and extended by `port_dir`.
    pub fn port_dirs(self) -> &'static [Dir] {
        match self {
            Label::P => &[Out],
            Label::C | Label::W => &[In],
            Label::RLolli => &[Out, In, Out],
            Label::LLolli => &[In, In, Out],
            Label::RTensor => &[In, In, Out],
            Label::LTensor => &[In, Out, Out],
            Label::RAll | Label::LAll => &[In, Out],
            Label::X => &[In, Out, Out],
            Label::D | Label::N => &[In, Out],
            Label::LBang | Label::LPar => &[In, Out],
            Label::RBang | Label::RPar => &[In, Out],
            Label::M => &[In],
        }
    }

    pub fn port_dir(self, port: usize) -> Dir {
        match self {
            Label::M if port > 0 => Out,
            _ => self.port_dirs()[port],
        }
    }

    pub fn fixed_arity(self) -> Option<usize> {
        match self {
            Label::M => None,
            _ => Some(self.port_dirs().len()),
        }
    }

    pub fn is_principal(self) -> bool {
        matches!(self, Label::RBang | Label::RPar)
    }

    pub fn is_door(self) -> bool {
        matches!(self, Label::LBang | Label::LPar)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Label> {
        Label::ALL
            .iter()
            .copied()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex label `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub label: Label,
    pub ports: Vec<Option<EdgeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: VertexId,
    pub src_port: usize,
    pub tgt: VertexId,
    pub tgt_port: usize,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BoxRecord {
    pub doors: Vec<VertexId>,
    /// Vertices strictly inside the box, nested boxes included.
    pub content: BTreeSet<VertexId>,
}

#[derive(Clone, Debug)]
pub struct ProofNet {
    pub system: System,
    pub vertices: BTreeMap<VertexId, Vertex>,
    pub edges: BTreeMap<EdgeId, Edge>,
    pub boxes: BTreeMap<VertexId, BoxRecord>,
    next_vertex: VertexId,
    next_edge: EdgeId,
}

impl PartialEq for ProofNet {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system
            && self.vertices == other.vertices
            && self.edges == other.edges
            && self.boxes == other.boxes
    }
}

impl Eq for ProofNet {}

/// Derived box structure: depths, owners, door membership.
#[derive(Clone, Debug, Default)]
pub struct NetIndex {
    pub vertex_owner: HashMap<VertexId, Option<VertexId>>,
    pub vertex_depth: HashMap<VertexId, usize>,
    pub edge_owner: HashMap<EdgeId, Option<VertexId>>,
    pub edge_depth: HashMap<EdgeId, usize>,
    pub door_box: HashMap<VertexId, VertexId>,
}

impl ProofNet {
    pub fn new(system: System) -> ProofNet {
        ProofNet {
            system,
            vertices: BTreeMap::new(),
            edges: BTreeMap::new(),
            boxes: BTreeMap::new(),
            next_vertex: 0,
            next_edge: 0,
        }
    }

    pub fn add_vertex(&mut self, label: Label) -> VertexId {
        let arity = label.fixed_arity().unwrap_or(1);
        self.add_vertex_with_arity(label, arity)
    }

    pub fn add_vertex_with_arity(&mut self, label: Label, arity: usize) -> VertexId {
        let id = self.next_vertex;
        self.insert_vertex(id, label, arity);
        id
    }

    pub(crate) fn insert_vertex(&mut self, id: VertexId, label: Label, arity: usize) {
        self.vertices.insert(
            id,
            Vertex {
                label,
                ports: vec![None; arity],
            },
        );
        self.next_vertex = self.next_vertex.max(id + 1);
    }

    pub fn add_edge(
        &mut self,
        src: (VertexId, usize),
        tgt: (VertexId, usize),
        formula: Formula,
    ) -> EdgeId {
        let id = self.next_edge;
        self.insert_edge(id, src, tgt, formula);
        id
    }

    pub(crate) fn insert_edge(
        &mut self,
        id: EdgeId,
        src: (VertexId, usize),
        tgt: (VertexId, usize),
        formula: Formula,
    ) {
        self.edges.insert(
            id,
            Edge {
                src: src.0,
                src_port: src.1,
                tgt: tgt.0,
                tgt_port: tgt.1,
                formula,
            },
        );
        self.attach(src.0, src.1, id);
        self.attach(tgt.0, tgt.1, id);
        self.next_edge = self.next_edge.max(id + 1);
    }

    fn attach(&mut self, v: VertexId, port: usize, e: EdgeId) {
        if let Some(vx) = self.vertices.get_mut(&v) {
            if vx.ports.len() <= port {
                vx.ports.resize(port + 1, None);
            }
            vx.ports[port] = Some(e);
        }
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Option<Edge> {
        let edge = self.edges.remove(&e)?;
        for (v, p) in [(edge.src, edge.src_port), (edge.tgt, edge.tgt_port)] {
            if let Some(vx) = self.vertices.get_mut(&v) {
                if vx.ports.get(p) == Some(&Some(e)) {
                    vx.ports[p] = None;
                }
            }
        }
        Some(edge)
    }

    /// Removes a vertex together with every box-table reference to it.
    pub fn remove_vertex(&mut self, v: VertexId) -> Option<Vertex> {
        let vx = self.vertices.remove(&v)?;
        self.boxes.remove(&v);
        for b in self.boxes.values_mut() {
            b.content.remove(&v);
            b.doors.retain(|d| *d != v);
        }
        Some(vx)
    }

    /// Re-targets one end of an edge to a new (vertex, port).
    pub fn set_src(&mut self, e: EdgeId, v: VertexId, port: usize) {
        let old = {
            let edge = &self.edges[&e];
            (edge.src, edge.src_port)
        };
        if let Some(vx) = self.vertices.get_mut(&old.0) {
            if vx.ports.get(old.1) == Some(&Some(e)) {
                vx.ports[old.1] = None;
            }
        }
        let edge = self.edges.get_mut(&e).expect("edge exists");
        edge.src = v;
        edge.src_port = port;
        self.attach(v, port, e);
    }

    pub fn set_tgt(&mut self, e: EdgeId, v: VertexId, port: usize) {
        let old = {
            let edge = &self.edges[&e];
            (edge.tgt, edge.tgt_port)
        };
        if let Some(vx) = self.vertices.get_mut(&old.0) {
            if vx.ports.get(old.1) == Some(&Some(e)) {
                vx.ports[old.1] = None;
            }
        }
        let edge = self.edges.get_mut(&e).expect("edge exists");
        edge.tgt = v;
        edge.tgt_port = port;
        self.attach(v, port, e);
    }

    pub fn fresh_vertex_id(&self) -> VertexId {
        self.next_vertex
    }

    pub fn fresh_edge_id(&self) -> EdgeId {
        self.next_edge
    }

    pub fn vertex(&self, v: VertexId) -> Result<&Vertex> {
        self.vertices.get(&v).ok_or(Error::UnknownVertex(v))
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(&e).ok_or(Error::UnknownEdge(e))
    }

    pub fn label(&self, v: VertexId) -> Label {
        self.vertices[&v].label
    }

    /// Edge at a port; panics on a dangling port (validated nets have none).
    pub fn port(&self, v: VertexId, port: usize) -> EdgeId {
        self.vertices[&v].ports[port].unwrap_or_else(|| panic!("dangling port {v}:{port}"))
    }

    pub fn arity(&self, v: VertexId) -> usize {
        self.vertices[&v].ports.len()
    }

    /// Endpoint at the other side of the edge plugged into `(v, port)`.
    pub fn opposite(&self, v: VertexId, port: usize) -> (VertexId, usize) {
        let e = &self.edges[&self.port(v, port)];
        if e.src == v && e.src_port == port {
            (e.tgt, e.tgt_port)
        } else {
            (e.src, e.src_port)
        }
    }

    pub fn conclusion(&self) -> Option<VertexId> {
        self.vertices
            .iter()
            .find(|(_, v)| v.label == Label::C)
            .map(|(id, _)| *id)
    }

    pub fn premises(&self) -> Vec<VertexId> {
        self.vertices
            .iter()
            .filter(|(_, v)| v.label == Label::P)
            .map(|(id, _)| *id)
            .collect()
    }

    /// Formulas of the premises (in id order) and of the conclusion.
    pub fn sequent(&self) -> (Vec<Formula>, Option<Formula>) {
        let prem = self
            .premises()
            .into_iter()
            .filter_map(|p| self.vertices[&p].ports[0].map(|e| self.edges[&e].formula.clone()))
            .collect();
        let concl = self
            .conclusion()
            .and_then(|c| self.vertices[&c].ports[0].map(|e| self.edges[&e].formula.clone()));
        (prem, concl)
    }

    /// `|G|`.
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn index(&self) -> NetIndex {
        let mut idx = NetIndex::default();
        for (r, b) in &self.boxes {
            for d in &b.doors {
                idx.door_box.insert(*d, *r);
            }
        }
        for v in self.vertices.keys() {
            let containing: Vec<(&VertexId, &BoxRecord)> = self
                .boxes
                .iter()
                .filter(|(_, b)| b.content.contains(v))
                .collect();
            let owner = containing
                .iter()
                .min_by_key(|(_, b)| b.content.len())
                .map(|(r, _)| **r);
            idx.vertex_owner.insert(*v, owner);
            idx.vertex_depth.insert(*v, containing.len());
        }
        for (id, e) in &self.edges {
            let owner = self.endpoint_owner(&idx, e.src, e.src_port);
            let depth = match owner {
                Some(r) => idx.vertex_depth.get(&r).copied().unwrap_or(0) + 1,
                None => 0,
            };
            idx.edge_owner.insert(*id, owner);
            idx.edge_depth.insert(*id, depth);
        }
        idx
    }

    /// Innermost box seen from one end of an edge.
    pub(crate) fn endpoint_owner(
        &self,
        idx: &NetIndex,
        v: VertexId,
        port: usize,
    ) -> Option<VertexId> {
        match self.vertices.get(&v).map(|x| x.label) {
            Some(l) if l.is_door() && port == 1 => idx.door_box.get(&v).copied(),
            Some(l) if l.is_principal() && port == 0 => Some(v),
            _ => idx.vertex_owner.get(&v).copied().flatten(),
        }
    }

    /// Box-depth of a vertex.
    pub fn vertex_depth(&self, v: VertexId) -> Result<usize> {
        self.vertex(v)?;
        Ok(self
            .boxes
            .values()
            .filter(|b| b.content.contains(&v))
            .count())
    }

    /// Box-depth of an edge.
    pub fn edge_depth(&self, e: EdgeId) -> Result<usize> {
        self.edge(e)?;
        Ok(self.index().edge_depth[&e])
    }

    /// `∂(G)`: maximal depth over edges and vertices.
    pub fn max_depth(&self) -> usize {
        let idx = self.index();
        idx.edge_depth
            .values()
            .chain(idx.vertex_depth.values())
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Principal vertex of the innermost box containing the edge, if any.
    pub fn theta_edge(&self, e: EdgeId) -> Result<Option<VertexId>> {
        self.edge(e)?;
        Ok(self.index().edge_owner[&e])
    }

    pub fn theta_vertex(&self, v: VertexId) -> Result<Option<VertexId>> {
        self.vertex(v)?;
        Ok(self.index().vertex_owner[&v])
    }

    /// Principal edge of the box whose principal vertex is `r`.
    pub fn rho(&self, r: VertexId) -> Result<EdgeId> {
        let vx = self.vertex(r)?;
        if !vx.label.is_principal() {
            return Err(Error::WrongLabel {
                vertex: r,
                expected: "Rbang".into(),
                found: vx.label.to_string(),
            });
        }
        vx.ports[1]
            .ok_or_else(|| Error::PatternMismatch(format!("principal {r} has no conclusion")))
    }

    /// Principal edge of the innermost box around the edge.
    pub fn sigma_edge(&self, e: EdgeId) -> Result<Option<EdgeId>> {
        match self.theta_edge(e)? {
            Some(r) => self.rho(r).map(Some),
            None => Ok(None),
        }
    }

    pub fn sigma_vertex(&self, v: VertexId) -> Result<Option<EdgeId>> {
        match self.theta_vertex(v)? {
            Some(r) => self.rho(r).map(Some),
            None => Ok(None),
        }
    }

    /// `B_G`: principal edges of all boxes.
    pub fn box_edges(&self) -> Vec<EdgeId> {
        self.boxes
            .keys()
            .filter_map(|r| self.rho(*r).ok())
            .collect()
    }

    /// Box whose principal edge is `e`.
    pub fn box_of_edge(&self, e: EdgeId) -> Result<VertexId> {
        let edge = self.edge(e)?;
        if self.boxes.contains_key(&edge.src) && edge.src_port == 1 {
            Ok(edge.src)
        } else {
            Err(Error::NotBoxEdge(e))
        }
    }

    /// `I_G`: vertices that are neither doors nor principal vertices.
    pub fn interior_vertices(&self) -> Vec<VertexId> {
        self.vertices
            .iter()
            .filter(|(_, v)| !v.label.is_door() && !v.label.is_principal())
            .map(|(id, _)| *id)
            .collect()
    }

    /// `P_G(e)`: the vertices delimiting the box, i.e. its doors plus the principal vertex.
    pub fn premise_count(&self, e: EdgeId) -> Result<usize> {
        let r = self.box_of_edge(e)?;
        Ok(self.boxes[&r].doors.len() + 1)
    }

    pub fn door_count(&self, e: EdgeId) -> Result<usize> {
        let r = self.box_of_edge(e)?;
        Ok(self.boxes[&r].doors.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn axiom() -> ProofNet {
        let mut g = ProofNet::new(System::Mell);
        let p = g.add_vertex(Label::P);
        let c = g.add_vertex(Label::C);
        g.add_edge((p, 0), (c, 0), parse_formula("a").unwrap());
        g
    }

    fn boxed_axiom() -> (ProofNet, VertexId) {
        let mut g = ProofNet::new(System::Mell);
        let p = g.add_vertex(Label::P);
        let d = g.add_vertex(Label::LBang);
        let r = g.add_vertex(Label::RBang);
        let c = g.add_vertex(Label::C);
        g.add_edge((p, 0), (d, 0), parse_formula("!a").unwrap());
        g.add_edge((d, 1), (r, 0), parse_formula("a").unwrap());
        g.add_edge((r, 1), (c, 0), parse_formula("!a").unwrap());
        g.boxes.insert(
            r,
            BoxRecord {
                doors: vec![d],
                content: BTreeSet::new(),
            },
        );
        (g, r)
    }

    #[test]
    fn axiom_accessors() {
        let g = axiom();
        assert_eq!(g.edge_depth(0).unwrap(), 0);
        assert!(g.box_edges().is_empty());
        assert_eq!(g.interior_vertices().len(), 2);
        assert_eq!(g.size(), 2);
        assert_eq!(g.theta_edge(0).unwrap(), None);
    }

    #[test]
    fn boxed_axiom_accessors() {
        let (g, r) = boxed_axiom();
        assert_eq!(g.edge_depth(1).unwrap(), 1);
        assert_eq!(g.edge_depth(2).unwrap(), 0);
        assert_eq!(g.theta_edge(1).unwrap(), Some(r));
        assert_eq!(g.sigma_edge(1).unwrap(), Some(2));
        assert_eq!(g.box_edges(), vec![2]);
        assert_eq!(g.premise_count(2).unwrap(), 2);
        assert!(matches!(g.premise_count(0), Err(Error::NotBoxEdge(0))));
        assert!(matches!(g.rho(0), Err(Error::WrongLabel { .. })));
        assert!(matches!(g.edge_depth(99), Err(Error::UnknownEdge(99))));
    }

    #[test]
    fn interior_and_box_vertices_partition() {
        let (g, _) = boxed_axiom();
        let interior: BTreeSet<_> = g.interior_vertices().into_iter().collect();
        let bordering: BTreeSet<_> = g
            .boxes
            .iter()
            .flat_map(|(r, b)| std::iter::once(*r).chain(b.doors.iter().copied()))
            .collect();
        assert!(interior.is_disjoint(&bordering));
        assert_eq!(interior.len() + bordering.len(), g.size());
    }
}
