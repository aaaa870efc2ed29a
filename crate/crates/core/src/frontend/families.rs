//! Built-in parametric nets.
//!
//! * `dr-ladder`: the left-nested application `I_1 I_2 ... I_n` of linear
//!   identities, typed so that the whole net concludes `A -o A`.
//! * `copy-example`: the net of `(\x. y x x) z` with `y : !A -o !A -o A`
//!   linear and `z : !A` boxed; its box is duplicated once.
//! * `jump-example`: a box `B` whose only door is cut against a box holding
//!   nothing but a closed box; `B` itself is contracted. The inner box is
//!   duplicated even though no path leads from it to the contraction.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::net::{BoxRecord, Label, ProofNet, System, VertexId};

pub const FAMILIES: &[&str] = &["dr-ladder", "copy-example", "jump-example"];

pub fn gen_family(name: &str, n: usize, base: &Formula) -> Result<ProofNet> {
    match name {
        "dr-ladder" => dr_ladder(n, base),
        "copy-example" => Ok(copy_example(base)),
        "jump-example" => Ok(jump_example(base)),
        _ => Err(Error::UnknownFamily(name.to_string())),
    }
}

/// Adds an `R-o` vertex whose premise ports are joined by an axiom edge on `a`.
fn looped_identity(g: &mut ProofNet, a: &Formula) -> VertexId {
    let r = g.add_vertex(Label::RLolli);
    g.add_edge((r, 0), (r, 1), a.clone());
    r
}

pub fn dr_ladder(n: usize, base: &Formula) -> Result<ProofNet> {
    if n == 0 {
        return Err(Error::InvalidArgument("dr-ladder needs n >= 1".into()));
    }
    // types[k] is the type of the k-th identity's argument, 1-based.
    let mut types = vec![base.clone(); n + 1];
    for k in (1..n).rev() {
        types[k] = Formula::lolli(types[k + 1].clone(), types[k + 1].clone());
    }
    let mut g = ProofNet::new(System::Mell);
    let mut head = looped_identity(&mut g, &types[1]);
    let mut head_port = 2;
    let mut head_type = Formula::lolli(types[1].clone(), types[1].clone());
    for (k, ty) in types.iter().enumerate().take(n + 1).skip(2) {
        let u = looped_identity(&mut g, ty);
        let w = g.add_vertex(Label::LLolli);
        g.add_edge((head, head_port), (w, 0), head_type);
        g.add_edge((u, 2), (w, 1), Formula::lolli(ty.clone(), ty.clone()));
        head = w;
        head_port = 2;
        head_type = types[k - 1].clone();
    }
    let c = g.add_vertex(Label::C);
    g.add_edge((head, head_port), (c, 0), head_type);
    Ok(g)
}

pub fn copy_example(base: &Formula) -> ProofNet {
    let a = base.clone();
    let ba = Formula::bang(a.clone());
    let mut g = ProofNet::new(System::Mell);
    let py = g.add_vertex(Label::P);
    let pz = g.add_vertex(Label::P);
    let door = g.add_vertex(Label::LBang);
    let principal = g.add_vertex(Label::RBang);
    let lam = g.add_vertex(Label::RLolli);
    let x = g.add_vertex(Label::X);
    let app1 = g.add_vertex(Label::LLolli);
    let app2 = g.add_vertex(Label::LLolli);
    let outer = g.add_vertex(Label::LLolli);
    let c = g.add_vertex(Label::C);

    let fun = Formula::lolli(ba.clone(), a.clone());
    g.add_edge((py, 0), (app1, 0), Formula::lolli(ba.clone(), fun.clone()));
    g.add_edge((app1, 2), (app2, 0), fun.clone());
    g.add_edge((app2, 2), (lam, 1), a.clone());
    g.add_edge((lam, 0), (x, 0), ba.clone());
    g.add_edge((x, 1), (app1, 1), ba.clone());
    g.add_edge((x, 2), (app2, 1), ba.clone());
    g.add_edge((lam, 2), (outer, 0), fun);
    g.add_edge((pz, 0), (door, 0), ba.clone());
    g.add_edge((door, 1), (principal, 0), a.clone());
    g.add_edge((principal, 1), (outer, 1), ba);
    g.add_edge((outer, 2), (c, 0), a);
    g.boxes.insert(
        principal,
        BoxRecord {
            doors: vec![door],
            content: BTreeSet::new(),
        },
    );
    g
}

pub fn jump_example(base: &Formula) -> ProofNet {
    let a = base.clone();
    let id = Formula::lolli(a.clone(), a.clone());
    let mut g = ProofNet::new(System::Mell);

    let inner_id = looped_identity(&mut g, &a);
    let inner_r = g.add_vertex(Label::RBang);
    let outer_r = g.add_vertex(Label::RBang);
    g.add_edge((inner_id, 2), (inner_r, 0), id.clone());
    g.add_edge((inner_r, 1), (outer_r, 0), Formula::bang(id.clone()));

    let door = g.add_vertex(Label::LBang);
    let w = g.add_vertex(Label::W);
    let body = looped_identity(&mut g, &a);
    let r = g.add_vertex(Label::RBang);
    g.add_edge(
        (outer_r, 1),
        (door, 0),
        Formula::bang(Formula::bang(id.clone())),
    );
    g.add_edge((door, 1), (w, 0), Formula::bang(id.clone()));
    g.add_edge((body, 2), (r, 0), id.clone());

    let x = g.add_vertex(Label::X);
    let t = g.add_vertex(Label::RTensor);
    let c = g.add_vertex(Label::C);
    let bid = Formula::bang(id);
    g.add_edge((r, 1), (x, 0), bid.clone());
    g.add_edge((x, 1), (t, 0), bid.clone());
    g.add_edge((x, 2), (t, 1), bid.clone());
    g.add_edge((t, 2), (c, 0), Formula::tensor(bid.clone(), bid));

    g.boxes.insert(
        inner_r,
        BoxRecord {
            doors: vec![],
            content: BTreeSet::from([inner_id]),
        },
    );
    g.boxes.insert(
        outer_r,
        BoxRecord {
            doors: vec![],
            content: BTreeSet::from([inner_id, inner_r]),
        },
    );
    g.boxes.insert(
        r,
        BoxRecord {
            doors: vec![door],
            content: BTreeSet::from([w, body]),
        },
    );
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::validate;

    #[test]
    fn ladder_sizes_and_types() {
        let a = Formula::atom("a");
        for n in 1..=6 {
            let g = dr_ladder(n, &a).unwrap();
            assert_eq!(validate(&g), vec![], "n = {n}");
            assert_eq!(g.size(), 2 * n);
            assert_eq!(g.sequent().1.unwrap().to_string(), "a -o a");
        }
        assert!(dr_ladder(0, &a).is_err());
    }

    #[test]
    fn examples_validate() {
        let a = Formula::atom("a");
        let g = copy_example(&a);
        assert_eq!(validate(&g), vec![]);
        assert_eq!(g.vertices.len(), 10);
        assert_eq!(g.box_edges().len(), 1);
        let j = jump_example(&a);
        assert_eq!(validate(&j), vec![]);
        assert_eq!(j.vertices.len(), 10);
        assert_eq!(j.box_edges().len(), 3);
        assert!(matches!(
            gen_family("nope", 1, &a),
            Err(Error::UnknownFamily(_))
        ));
    }
}
