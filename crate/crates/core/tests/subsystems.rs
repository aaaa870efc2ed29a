use num_bigint::BigUint;

use pnlab_core::frontend::{
    copy_example, elaborate_in, lambda_fixtures, parse_proof_term, proof_term_corpus,
    sampled_corpus, subsystem_fixtures,
};
use pnlab_core::machine::Machine;
use pnlab_core::rewrite::{find_cuts, shape_key, CutKind, Strategy};
use pnlab_core::subsystems::{
    bound, check_determinacy, check_membership, levels, mell_bound, verify_soundness,
};
use pnlab_core::weight::{audit_machine, check_steps_along, Weigher, WeightBudget};
use pnlab_core::{validate, Formula, ProofNet, System};

fn net(src: &str, system: System) -> ProofNet {
    elaborate_in(&parse_proof_term(src).unwrap(), system).unwrap()
}

#[test]
fn membership_follows_the_profiles() {
    let der = net("(der (ax a) 1)", System::Mell);
    assert!(check_membership(&der, System::Mell).is_empty());
    for s in [System::Ell, System::Sll, System::Lll] {
        assert_eq!(check_membership(&der, s).len(), 1, "{s}");
    }
    let two_doors = net("(prom (rtensor (ax a) (ax b)))", System::Mell);
    assert!(check_membership(&two_doors, System::Ell).is_empty());
    assert!(!check_membership(&two_doors, System::Lll).is_empty());
}

#[test]
fn bounds_by_hand() {
    // SLL: |G|^(depth + 2).
    assert_eq!(
        bound(System::Sll, 1, 5).exact(),
        Some(&BigUint::from(125u32))
    );
    // LLL at x = 2: q_0 = 2, r_1 = 2, q_1 = 4, p_1 = 2 * 2 * 4.
    let l = levels(System::Lll, 1, 2);
    assert_eq!(l.q[1].exact(), Some(&BigUint::from(4u32)));
    assert_eq!(
        bound(System::Lll, 1, 2).exact(),
        Some(&BigUint::from(16u32))
    );
    // ELL at x = 1: q_0 = 2^2, p_0 = 1 * 1 * 4.
    assert_eq!(bound(System::Ell, 0, 1).exact(), Some(&BigUint::from(4u32)));
    assert_eq!(mell_bound(1, 3), BigUint::from(42u32));
}

#[test]
fn fixtures_are_sound() {
    for s in [System::Ell, System::Sll, System::Lll] {
        for e in subsystem_fixtures(s, 6, 150).unwrap() {
            let r = verify_soundness(&e.net, s).unwrap();
            assert!(r.passed(), "{s} {}: {:?}", e.name, r.checks);
        }
    }
}

#[test]
fn copy_example_is_deterministic() {
    let g = copy_example(&Formula::atom("a"));
    assert!(check_determinacy(&g).unwrap().is_none());
    let shared = net(
        "(cut (prom (rtensor (ax a) (ax b))) (weak (ax c) [!(a * b)]) 2)",
        System::Mell,
    );
    let w = Weigher::new(&shared);
    assert!(w.canonical_starts().unwrap().iter().all(|c| c.u.is_empty()));
}

#[test]
fn corpora_are_valid_and_deduplicated() {
    let c = sampled_corpus(System::Mell, 5, 9, 100, 3);
    assert!(c
        .iter()
        .all(|e| validate(&e.net).is_empty() && e.net.size() <= 9));
    let keys: std::collections::HashSet<String> = c.iter().map(|e| shape_key(&e.net)).collect();
    assert_eq!(keys.len(), c.len());
    let again = sampled_corpus(System::Mell, 5, 9, 100, 3);
    assert_eq!(
        c.iter().map(|e| &e.name).collect::<Vec<_>>(),
        again.iter().map(|e| &e.name).collect::<Vec<_>>()
    );
    let sampled = &c[proof_term_corpus(System::Mell, 5, usize::MAX).len()..];
    assert!(!sampled.is_empty());
    assert!(sampled.iter().all(|e| !find_cuts(&e.net).is_empty()));
    assert!(lambda_fixtures()
        .unwrap()
        .iter()
        .all(|e| validate(&e.net).is_empty()));
}

#[test]
fn step_checks_isolate_box_merging() {
    let g = net("(cut (prom (ax a)) (prom (ax a)) 1)", System::Mell);
    let steps = check_steps_along(&g, Strategy::Double, 100).unwrap();
    assert_eq!(steps.len(), 1);
    let s = &steps[0];
    assert_eq!(s.cut.kind, CutKind::Bang);
    assert!(s.t_decreases());
    assert_eq!((s.before.w, s.after.w, s.expected_drop), (0, 0, Some(1)));

    let c = copy_example(&Formula::atom("a"));
    assert!(check_steps_along(&c, Strategy::Double, 100)
        .unwrap()
        .iter()
        .all(|s| s.holds()));
}

#[test]
fn audit_passes_on_small_nets() {
    for g in [
        copy_example(&Formula::atom("a")),
        net(
            "(cut (prom (ax a)) (contr (rtensor (ax [!a]) (ax [!a])) 1 2) 1)",
            System::Mell,
        ),
    ] {
        let w = Weigher::with_machine(&g, Machine::new(&g).audited(), WeightBudget::default());
        let a = audit_machine(&w).unwrap();
        assert!(a.passed(), "{a:?}");
        assert!(a.transitions > 0);
    }
    let g = copy_example(&Formula::atom("a"));
    assert!(audit_machine(&Weigher::new(&g)).is_err());
}
