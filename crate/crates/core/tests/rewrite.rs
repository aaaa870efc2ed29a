use pnlab_core::frontend::{copy_example, dr_ladder, elaborate, jump_example, parse_proof_term};
use pnlab_core::rewrite::{
    canonical_key, find_cuts, fire, normalize, permitted_cuts, reduction_metrics, CutKind,
    MetricsBudget, Strategy,
};
use pnlab_core::{validate, Formula, Label, ProofNet};

fn net(src: &str) -> ProofNet {
    let g = elaborate(&parse_proof_term(src).unwrap()).unwrap();
    assert_eq!(validate(&g), vec![], "{src}");
    g
}

const REDEXES: &[(&str, CutKind)] = &[
    (
        "(cut (rlolli (ax a) 1) (llolli (ax a) (ax a) 1) 2)",
        CutKind::Lolli,
    ),
    (
        "(cut (rtensor (ax a) (ax b)) (ltensor (rtensor (ax a) (ax b)) 1 2) 1)",
        CutKind::Tensor,
    ),
    (
        "(cut (rall (rlolli (ax a) 1) a) (lall (ax [b -o b]) 1 [forall x. x -o x]) 1)",
        CutKind::Forall,
    ),
    ("(cut (prom (ax a)) (weak (ax b) [!a]) 2)", CutKind::W),
    ("(cut (prom (ax a)) (der (ax a) 1) 1)", CutKind::D),
    (
        "(cut (prom (ax a)) (dig (der (ax [!a]) 1) 1) 1)",
        CutKind::N,
    ),
    (
        "(cut (prom (ax a)) (contr (weak (weak (ax b) [!a]) [!a]) 2 3) 2)",
        CutKind::X,
    ),
    ("(cut (prom (ax a)) (prom (ax a)) 1)", CutKind::Bang),
    (
        "(cut (prom (ax a)) (mux (rtensor (ax a) (ax a)) 1 2) 1)",
        CutKind::M,
    ),
];

/// Fires every cut of every reachable net and validates each result.
fn explore_all(g: &ProofNet, depth: usize) {
    for c in find_cuts(g) {
        let h = fire(g, c.edge).unwrap_or_else(|e| panic!("{e}\n{g}"));
        assert_eq!(
            validate(&h.net),
            vec![],
            "after {} on {}:\n{g}\n=>\n{}",
            c.kind,
            c.edge,
            h.net
        );
        if c.kind == CutKind::W {
            for d in find_cuts(&h.net) {
                let before = find_cuts(g).iter().any(|x| x.edge == d.edge);
                assert!(
                    before || d.kind == CutKind::W,
                    "W step introduced a {} cut",
                    d.kind
                );
            }
        }
        if depth > 0 {
            explore_all(&h.net, depth - 1);
        }
    }
}

#[test]
fn each_rule_fires_to_a_valid_net() {
    for (src, kind) in REDEXES {
        let g = net(src);
        let cuts = find_cuts(&g);
        assert_eq!(cuts.len(), 1, "{src}");
        assert_eq!(cuts[0].kind, *kind, "{src}");
        explore_all(&g, 6);
    }
}

#[test]
fn weakening_erases_the_box() {
    let g = net("(cut (prom (ax a)) (weak (ax b) [!a]) 2)");
    let h = fire(&g, find_cuts(&g)[0].edge).unwrap().net;
    assert!(h.boxes.is_empty());
    assert_eq!(
        h.vertices.values().filter(|v| v.label == Label::W).count(),
        1
    );
}

#[test]
fn dereliction_opens_the_box() {
    let g = net("(cut (prom (ax a)) (der (ax a) 1) 1)");
    let h = fire(&g, find_cuts(&g)[0].edge).unwrap().net;
    assert!(h.boxes.is_empty());
    assert_eq!(
        h.vertices.values().filter(|v| v.label == Label::D).count(),
        1
    );
}

#[test]
fn contraction_duplicates_with_provenance() {
    let g = net("(cut (prom (ax a)) (contr (weak (weak (ax b) [!a]) [!a]) 2 3) 2)");
    let f = fire(&g, find_cuts(&g)[0].edge).unwrap();
    assert_eq!(f.net.boxes.len(), 2);
    let map = f.copies.unwrap();
    assert!(map.vertices.values().all(|c| c.len() == 2));
}

#[test]
fn digging_builds_a_box_around_the_box() {
    let g = net("(cut (prom (ax a)) (dig (der (ax [!a]) 1) 1) 1)");
    let h = fire(&g, find_cuts(&g)[0].edge).unwrap().net;
    assert_eq!(h.boxes.len(), 2);
    assert_eq!(h.max_depth(), 2);
}

#[test]
fn ladder_normalizes_linearly() {
    let a = Formula::atom("a");
    let g1 = canonical_key(&dr_ladder(1, &a).unwrap());
    for n in 1..=12 {
        let g = dr_ladder(n, &a).unwrap();
        for s in Strategy::ALL {
            let r = normalize(&g, s, 100_000).unwrap();
            assert!(r.complete);
            assert_eq!(r.steps(), n - 1);
            assert!(r.trace.iter().all(|t| t.kind == CutKind::Lolli));
            assert_eq!(canonical_key(&r.net), g1);
        }
    }
}

#[test]
fn strategies_are_nested() {
    let nets = [
        copy_example(&Formula::atom("a")),
        jump_example(&Formula::atom("a")),
    ];
    for g in nets {
        let mut cur = vec![g];
        for _ in 0..10 {
            let mut next = Vec::new();
            for g in &cur {
                let arrow = permitted_cuts(g, Strategy::Arrow);
                let double = permitted_cuts(g, Strategy::Double);
                let tri = permitted_cuts(g, Strategy::Triangle);
                assert!(double.iter().all(|c| arrow.contains(c)));
                assert!(tri.iter().all(|c| double.contains(c)));
                assert_eq!(arrow.is_empty(), tri.is_empty());
                for c in arrow {
                    next.push(fire(g, c.edge).unwrap().net);
                }
            }
            cur = next;
        }
    }
}

#[test]
fn metrics_on_small_nets() {
    let a = Formula::atom("a");
    let g = net("(ax a)");
    let m = reduction_metrics(&g, Strategy::Arrow, MetricsBudget::default()).unwrap();
    assert_eq!((m.steps_max, m.size_max), (0, 2));
    let g = dr_ladder(3, &a).unwrap();
    for s in [Strategy::Arrow, Strategy::Double] {
        assert_eq!(
            reduction_metrics(&g, s, MetricsBudget::default())
                .unwrap()
                .steps_max,
            2
        );
    }
    let g = copy_example(&a);
    let arrow = reduction_metrics(&g, Strategy::Arrow, MetricsBudget::default()).unwrap();
    let double = reduction_metrics(&g, Strategy::Double, MetricsBudget::default()).unwrap();
    assert_eq!(arrow.steps_max, double.steps_max);
    assert_eq!(arrow.size_max, double.size_max);
}

#[test]
fn copy_example_normal_form() {
    let g = copy_example(&Formula::atom("a"));
    let r = normalize(&g, Strategy::Triangle, 1000).unwrap();
    assert!(r.complete);
    assert_eq!(validate(&r.net), vec![]);
    let kinds: Vec<CutKind> = r.trace.iter().map(|t| t.kind).collect();
    println!("{kinds:?}");
    assert_eq!(r.net.boxes.len(), 2);
    assert_eq!(
        r.net
            .vertices
            .values()
            .filter(|v| v.label == Label::X)
            .count(),
        1
    );
}

#[test]
fn jump_example_trace() {
    let g = jump_example(&Formula::atom("a"));
    let r = normalize(&g, Strategy::Triangle, 1000).unwrap();
    assert!(r.complete);
    assert_eq!(validate(&r.net), vec![]);
    let kinds: Vec<CutKind> = r.trace.iter().map(|t| t.kind).collect();
    println!("{kinds:?}");
}
