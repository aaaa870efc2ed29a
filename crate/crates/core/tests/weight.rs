use std::collections::BTreeSet;

use pnlab_core::frontend::{copy_example, dr_ladder, elaborate, jump_example, parse_proof_term};
use pnlab_core::machine::{Machine, Sig};
use pnlab_core::rewrite::{find_cuts, CutKind};
use pnlab_core::weight::{check_step, theorem_two, weight, Item, Weigher, WeightBudget};
use pnlab_core::{Error, Formula, ProofNet};

fn net(src: &str) -> ProofNet {
    elaborate(&parse_proof_term(src).unwrap()).unwrap()
}

fn atom() -> Formula {
    Formula::atom("a")
}

#[test]
fn cut_free_boxes_have_the_trivial_copy() {
    for src in [
        "(prom (ax a))",
        "(prom (prom (ax a)))",
        "(prom (rlolli (ax a) 1))",
    ] {
        let g = net(src);
        let wg = Weigher::new(&g);
        for e in g.box_edges() {
            for u in wg.canonical_sequences(Item::Edge(e)).unwrap() {
                assert!(u.iter().all(|s| *s == Sig::E), "{src}");
                assert_eq!(wg.copies(e, &u).unwrap(), BTreeSet::from([Sig::E]), "{src}");
            }
        }
        let r = wg.report().unwrap();
        assert_eq!(r.w, 0);
        assert!(r.strictly_positive && r.acyclic);
    }
}

#[test]
fn ladder_weights() {
    for n in 1..=8 {
        let g = dr_ladder(n, &atom()).unwrap();
        let r = weight(&g).unwrap();
        assert_eq!((r.w, r.t), (0, g.size() as i64), "n = {n}");
    }
}

#[test]
fn copy_example_is_duplicated_once() {
    let g = copy_example(&atom());
    let wg = Weigher::new(&g);
    let e = g.box_edges()[0];
    let copies = wg.copies(e, &[]).unwrap();
    assert_eq!(copies, BTreeSet::from([Sig::l(Sig::E), Sig::r(Sig::E)]));
    assert_eq!(copies, wg.oracle_copies(e, &[], 4).unwrap());
    assert_eq!(wg.cardinality(e, &[]).unwrap(), 2);
    let t2 = theorem_two(&g, 100).unwrap();
    assert_eq!((t2.weight, t2.exponential_steps), (1, 1));
    assert!(t2.holds());
}

#[test]
fn jump_example_needs_jumps() {
    let g = jump_example(&atom());
    let with = weight(&g).unwrap();
    let without = Weigher::with_machine(
        &g,
        Machine::new(&g).without_jumps(),
        WeightBudget::default(),
    )
    .report()
    .unwrap();
    assert!(with.acyclic);
    assert_eq!(with.w, 2);
    assert!(without.w < with.w);
}

#[test]
fn non_canonical_sequences_are_rejected() {
    let g = copy_example(&atom());
    let wg = Weigher::new(&g);
    let e = g.box_edges()[0];
    assert!(matches!(
        wg.copies_checked(e, &[Sig::E]),
        Err(Error::NonCanonical(_))
    ));
    assert!(wg.copies(0, &[]).is_err());
}

#[test]
fn budget_exhaustion_is_reported() {
    let g = copy_example(&atom());
    let wg = Weigher::new(&g).with_budget(WeightBudget {
        per_copy: 2,
        total: 2,
    });
    assert!(matches!(wg.report(), Err(Error::BudgetExhausted(_))));
}

#[test]
fn linear_and_duplicating_steps_follow_the_identities() {
    for src in [
        "(cut (rlolli (ax a) 1) (llolli (ax a) (ax a) 1) 2)",
        "(cut (prom (ax a)) (weak (ax b) [!a]) 2)",
        "(cut (prom (ax a)) (der (ax a) 1) 1)",
        "(cut (prom (ax a)) (dig (der (ax [!a]) 1) 1) 1)",
        "(cut (prom (ax a)) (contr (weak (weak (ax b) [!a]) [!a]) 2 3) 2)",
    ] {
        let g = net(src);
        let s = check_step(&g, find_cuts(&g)[0]).unwrap();
        assert!(s.holds(), "{src}: {s:?}");
    }
}

#[test]
fn box_merging_keeps_the_weight() {
    let g = net("(cut (prom (ax a)) (prom (ax a)) 1)");
    let s = check_step(&g, find_cuts(&g)[0]).unwrap();
    assert_eq!(s.cut.kind, CutKind::Bang);
    assert_eq!((s.before.w, s.after.w), (0, 0));
    assert!(s.t_decreases());
}

#[test]
fn canonical_contexts_and_subtrees() {
    let g = copy_example(&atom());
    let wg = Weigher::new(&g);
    let e = g.box_edges()[0];
    for t in wg.copies(e, &[]).unwrap() {
        assert!(wg.subtree_property(e, &[], &t).unwrap());
        let c = pnlab_core::machine::Context::copy_start(e, vec![], t);
        assert!(wg.is_canonical_context(&c).unwrap());
    }
    let bad = pnlab_core::machine::Context::copy_start(e, vec![], Sig::E);
    assert!(!wg.is_canonical_context(&bad).unwrap());
}

#[test]
fn weighted_trace_ends_at_zero() {
    let g = copy_example(&atom());
    let n =
        pnlab_core::weight::normalize_weighted(&g, pnlab_core::rewrite::Strategy::Triangle, 100)
            .unwrap();
    assert!(n.complete);
    let last = n.trace.last().unwrap();
    assert_eq!(last.weight_after, Some(0));
    assert!(n.trace.windows(2).all(|w| w[0].t_after > w[1].t_after));
}

#[test]
fn demand_search_agrees_with_the_oracle_on_lambda_nets() {
    use pnlab_core::frontend::{from_lambda, parse_lambda};
    for src in [
        "(\\x. y x x) z",
        "(\\x. x) y",
        "(\\f. f (f z)) g",
        "(\\x. \\y. x) u v",
    ] {
        let g = from_lambda(&parse_lambda(src).unwrap()).unwrap();
        let wg = Weigher::new(&g);
        for e in g.box_edges() {
            for u in wg.canonical_sequences(Item::Edge(e)).unwrap() {
                let fast: BTreeSet<Sig> = wg
                    .copies(e, &u)
                    .unwrap()
                    .into_iter()
                    .filter(|t| t.size() <= 4)
                    .collect();
                assert_eq!(
                    fast,
                    wg.oracle_copies(e, &u, 4).unwrap(),
                    "{src}, edge {e}, U = {u:?}"
                );
            }
        }
        let r = wg.report().unwrap();
        println!("{src}: W = {}, T = {}, boxes = {}", r.w, r.t, r.boxes.len());
    }
}
