use pnlab_core::frontend::{
    dr_ladder, elaborate, elaborate_with_sequent, from_lambda, gen_family, parse_lambda,
    parse_proof_term,
};
use pnlab_core::machine::{Context, Elem, Machine, Pol, RunOutcome, Runner, Sig, Sym};
use pnlab_core::{validate, Formula, Label, System};

fn ladder_run(n: usize) -> (u64, Vec<Context>) {
    let g = dr_ladder(n, &Formula::atom("a")).unwrap();
    let c = g.conclusion().unwrap();
    let e = g.port(c, 0);
    let m = Machine::new(&g);
    let runner = Runner::new(&m, 1 << 24).with_trace();
    let start = Context::new(
        e,
        vec![],
        vec![Elem::Sig(Sig::E), Elem::Sym(Sym::A)],
        Pol::Minus,
    );
    let out = runner.run(&start);
    let steps = match out {
        RunOutcome::Final { steps, .. } | RunOutcome::Stuck { steps, .. } => steps,
        other => panic!("unexpected outcome {other:?}"),
    };
    (steps, runner.trace())
}

#[test]
fn ladder_round_trip_length() {
    for n in 1..=10usize {
        let (steps, trace) = ladder_run(n);
        let last = trace.last().unwrap();
        assert_eq!(
            last.v,
            vec![Elem::Sig(Sig::E), Elem::Sym(Sym::O)],
            "n = {n}"
        );
        assert_eq!(last.pol, Pol::Plus);
        assert_eq!(last.edge, trace[0].edge);
        assert_eq!(steps, 8 * (1u64 << (n - 1)) - 6, "n = {n}");
    }
}

#[test]
fn elaborated_sequent_matches_net() {
    for src in [
        "(cut (prom (ax a)) (weak (ax b) [!a]) 2)",
        "(llolli (ax a) (rtensor (ax b) (ax c)) 1)",
        "(contr (weak (weak (ax b) [!a]) [!a]) 2 3)",
    ] {
        let t = parse_proof_term(src).unwrap();
        let (g, prem, concl) = elaborate_with_sequent(&t, System::Mell).unwrap();
        assert_eq!(validate(&g), vec![]);
        let (mut net_prem, net_concl) = g.sequent();
        let mut prem_sorted = prem.clone();
        prem_sorted.sort_by_key(|f| f.to_string());
        net_prem.sort_by_key(|f| f.to_string());
        assert_eq!(prem_sorted, net_prem, "{src}");
        assert_eq!(Some(concl), net_concl);
    }
}

#[test]
fn promotion_gives_one_box_with_one_premise() {
    let g = elaborate(&parse_proof_term("(prom (ax a))").unwrap()).unwrap();
    let boxes = g.box_edges();
    assert_eq!(boxes.len(), 1);
    assert_eq!(g.premise_count(boxes[0]).unwrap(), 2);
    assert_eq!(g.door_count(boxes[0]).unwrap(), 1);
}

#[test]
fn lambda_example_has_one_contraction() {
    let g = from_lambda(&parse_lambda("(\\x. y x x) z").unwrap()).unwrap();
    assert_eq!(validate(&g), vec![]);
    assert_eq!(
        g.vertices.values().filter(|v| v.label == Label::X).count(),
        1
    );
}

#[test]
fn families_validate() {
    let a = Formula::atom("a");
    for name in ["copy-example", "jump-example"] {
        assert_eq!(validate(&gen_family(name, 1, &a).unwrap()), vec![]);
    }
    assert_eq!(gen_family("dr-ladder", 5, &a).unwrap().size(), 10);
    assert!(gen_family("dr-ladder", 0, &a).is_err());
}
