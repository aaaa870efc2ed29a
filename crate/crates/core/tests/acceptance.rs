//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use pnlab_core::frontend::{
    copy_example, dr_ladder, elaborate_with_sequent, jump_example, lambda_fixtures,
    parse_proof_term, sampled_corpus, subsystem_fixture_terms, CorpusEntry,
};
use pnlab_core::machine::{Context, Elem, Machine, Pol, RunOutcome, Runner, Sig, Sym};
use pnlab_core::rewrite::{normalize, reduction_metrics, CutKind, MetricsBudget, Strategy};
use pnlab_core::subsystems::{
    bound, check_determinacy, check_membership, check_stratification, mell_bound,
};
use pnlab_core::weight::{
    audit_machine, check_steps_along, theorem_two, Item, StepCheck, Weigher, WeightBudget,
};
use pnlab_core::{Formula, ProofNet, Result, System};

const SEED: u64 = 7;
const EXHAUSTIVE_VERTICES: usize = 7;
const MAX_VERTICES: usize = 12;
const SAMPLED: usize = 4000;
const SUBSYSTEM_EXHAUSTIVE: usize = 6;
const SUBSYSTEM_SAMPLED: usize = 300;
const ORACLE_VERTICES: usize = 10;
const ORACLE_SIZE: usize = 4;
const STEP_BUDGET: u64 = 10_000;

type Outcome = std::result::Result<String, String>;

fn atom() -> Formula {
    Formula::atom("a")
}

fn corpus() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut c = sampled_corpus(
            System::Mell,
            EXHAUSTIVE_VERTICES,
            MAX_VERTICES,
            SAMPLED,
            SEED,
        );
        c.extend(lambda_fixtures().expect("lambda fixtures"));
        c
    })
}

fn fixtures(system: System) -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = subsystem_fixture_terms(system)
        .iter()
        .map(|src| {
            let (net, _, _) =
                elaborate_with_sequent(&parse_proof_term(src).expect("fixture parses"), system)
                    .expect("fixture elaborates");
            CorpusEntry {
                name: src.to_string(),
                net,
            }
        })
        .collect();
    out.extend(sampled_corpus(
        system,
        SUBSYSTEM_EXHAUSTIVE,
        MAX_VERTICES,
        SUBSYSTEM_SAMPLED,
        SEED,
    ));
    out
}

/// Runs `check` on every entry in parallel; the first failure (by corpus order) wins.
fn over_corpus<F>(entries: &[CorpusEntry], check: F) -> std::result::Result<usize, String>
where
    F: Fn(&ProofNet) -> Result<std::result::Result<(), String>> + Sync,
{
    let failures: Vec<(usize, String)> = entries
        .par_iter()
        .enumerate()
        .filter_map(|(i, e)| match check(&e.net) {
            Ok(Ok(())) => None,
            Ok(Err(why)) => Some((i, format!("{}: {why}", e.name))),
            Err(err) => Some((i, format!("{}: {err}", e.name))),
        })
        .collect();
    let count = failures.len();
    match failures.into_iter().min_by_key(|f| f.0) {
        None => Ok(entries.len()),
        Some((_, why)) => Err(format!(
            "{count} of {} nets fail; first {why}",
            entries.len()
        )),
    }
}

fn ladder_paths() -> Outcome {
    for n in 1..=12 {
        let g = dr_ladder(n, &atom()).map_err(|e| e.to_string())?;
        let e = g.port(g.conclusion().ok_or("no conclusion")?, 0);
        let m = Machine::new(&g);
        let start = Context::new(
            e,
            vec![],
            vec![Elem::Sig(Sig::E), Elem::Sym(Sym::A)],
            Pol::Minus,
        );
        let expected = 8 * (1u64 << (n - 1)) - 6;
        match Runner::new(&m, 1 << 24).run(&start) {
            RunOutcome::Final { context, steps }
                if steps == expected
                    && context.edge == e
                    && context.pol == Pol::Plus
                    && context.v == vec![Elem::Sig(Sig::E), Elem::Sym(Sym::O)] => {}
            other => return Err(format!("n = {n}: expected {expected} steps, got {other:?}")),
        }
    }
    Ok("n = 1..12".into())
}

fn ladder_normalization() -> Outcome {
    for n in 1..=12 {
        let g = dr_ladder(n, &atom()).map_err(|e| e.to_string())?;
        let r = normalize(&g, Strategy::Double, STEP_BUDGET).map_err(|e| e.to_string())?;
        let w = Weigher::new(&g).report().map_err(|e| e.to_string())?.w;
        if !r.complete
            || r.steps() != n - 1
            || r.trace.iter().any(|s| s.kind != CutKind::Lolli)
            || w != 0
        {
            return Err(format!("n = {n}: {} steps, W = {w}", r.steps()));
        }
    }
    Ok("n = 1..12".into())
}

fn copy_example_counts() -> Outcome {
    let g = copy_example(&atom());
    let wg = Weigher::new(&g);
    let e = *g.box_edges().first().ok_or("no box")?;
    let copies = wg.copies(e, &[]).map_err(|e| e.to_string())?;
    let r = wg.cardinality(e, &[]).map_err(|e| e.to_string())?;
    let w = wg.report().map_err(|e| e.to_string())?.w;
    let t2 = theorem_two(&g, STEP_BUDGET).map_err(|e| e.to_string())?;
    let expected: BTreeSet<Sig> = [Sig::E, Sig::l(Sig::E), Sig::r(Sig::E)].into();
    let shown = copies
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    let detail = format!(
        "copies {{{shown}}}, R = {r}, W = {w}, exponential steps = {}",
        t2.exponential_steps
    );
    if copies == expected && r == 3 && w == 2 && t2.exponential_steps == 2 {
        Ok(detail)
    } else {
        Err(format!(
            "{detail}; expected copies {{e, l(e), r(e)}}, R = 3, W = 2, 2 exponential steps"
        ))
    }
}

fn metrics_budget() -> MetricsBudget {
    MetricsBudget {
        max_states: 200_000,
    }
}

fn standardization() -> Outcome {
    over_corpus(corpus(), |g| {
        let a = reduction_metrics(g, Strategy::Arrow, metrics_budget())?;
        let d = reduction_metrics(g, Strategy::Double, metrics_budget())?;
        Ok(if (a.steps_max, a.size_max) == (d.steps_max, d.size_max) {
            Ok(())
        } else {
            Err(format!(
                "arrow ({}, {}) vs double ({}, {})",
                a.steps_max, a.size_max, d.steps_max, d.size_max
            ))
        })
    })
    .map(|n| format!("{n} nets"))
}

fn monotonicity() -> Outcome {
    let checked = AtomicUsize::new(0);
    let failing = Mutex::new(BTreeMap::<String, usize>::new());
    over_corpus(corpus(), |g| {
        let steps = check_steps_along(g, Strategy::Double, STEP_BUDGET)?;
        checked.fetch_add(steps.len(), Ordering::Relaxed);
        let bad: Vec<&StepCheck> = steps.iter().filter(|s| !s.holds()).collect();
        for s in &bad {
            *failing
                .lock()
                .expect("tally")
                .entry(s.cut.kind.to_string())
                .or_default() += 1;
        }
        Ok(match bad.first() {
            None => Ok(()),
            Some(s) => Err(format!(
                "{} step on edge {}: W {} -> {} (expected drop {:?}), T {} -> {}",
                s.cut.kind,
                s.cut.edge,
                s.before.w,
                s.after.w,
                s.expected_drop,
                s.before.t,
                s.after.t
            )),
        })
    })
    .map(|n| format!("{n} nets, {} steps", checked.load(Ordering::Relaxed)))
    .map_err(|why| {
        let kinds = failing
            .lock()
            .expect("tally")
            .iter()
            .map(|(k, n)| format!("{k}: {n}"))
            .collect::<Vec<_>>();
        format!("{why}; failing steps by kind {{{}}}", kinds.join(", "))
    })
}

fn theorem_one() -> Outcome {
    over_corpus(corpus(), |g| {
        let w = Weigher::new(g).report()?.w.max(0) as u64;
        let b = mell_bound(w, g.size() as u64);
        let m = reduction_metrics(g, Strategy::Arrow, metrics_budget())?;
        Ok(
            if BigUint::from(m.steps_max) <= b && BigUint::from(m.size_max) <= b {
                Ok(())
            } else {
                Err(format!(
                    "steps {}, size {}, bound {b}",
                    m.steps_max, m.size_max
                ))
            },
        )
    })
    .map(|n| format!("{n} nets"))
}

fn theorem_two_corpus() -> Outcome {
    over_corpus(corpus(), |g| {
        let t = theorem_two(g, STEP_BUDGET)?;
        Ok(if t.holds() {
            Ok(())
        } else {
            Err(format!(
                "W = {}, {} exponential of {} steps",
                t.weight, t.exponential_steps, t.steps
            ))
        })
    })
    .map(|n| format!("{n} nets"))
}

fn cardinality_bound() -> Outcome {
    over_corpus(corpus(), |g| {
        let r = Weigher::new(g).report()?;
        for b in &r.boxes {
            if b.cardinality_sum() as i64 > r.w + 1 {
                return Ok(Err(format!(
                    "edge {}: sum of R = {} > W + 1 = {}",
                    b.edge,
                    b.cardinality_sum(),
                    r.w + 1
                )));
            }
        }
        Ok(Ok(()))
    })
    .map(|n| format!("{n} nets"))
}

fn machine_properties() -> Outcome {
    let transitions = AtomicU64::new(0);
    over_corpus(corpus(), |g| {
        let w = Weigher::with_machine(g, Machine::new(g).audited(), WeightBudget::default());
        let a = audit_machine(&w)?;
        transitions.fetch_add(a.transitions, Ordering::Relaxed);
        Ok(if a.cyclic {
            Err("canonical cycle".into())
        } else if let Some((c, d)) = a.irreversible {
            Err(format!("{c} -> {d} is not reversible"))
        } else if let Some(c) = a.non_canonical {
            Err(format!("non-canonical context {c} on a canonical run"))
        } else if let Some(c) = a.stuck {
            Err(format!("stuck context {c}"))
        } else {
            Ok(())
        })
    })
    .map(|n| {
        format!(
            "{n} nets, {} audited transitions",
            transitions.load(Ordering::Relaxed)
        )
    })
}

fn subtree_property() -> Outcome {
    over_corpus(corpus(), |g| {
        let w = Weigher::new(g);
        for e in g.box_edges() {
            for u in w.canonical_sequences(Item::Edge(e))? {
                for t in w.copies(e, &u)? {
                    if !w.subtree_property(e, &u, &t)? {
                        return Ok(Err(format!("copy {t} of edge {e}")));
                    }
                }
            }
        }
        Ok(Ok(()))
    })
    .map(|n| format!("{n} nets"))
}

fn oracle_agreement() -> Outcome {
    let small: Vec<CorpusEntry> = corpus()
        .iter()
        .filter(|e| e.net.size() <= ORACLE_VERTICES)
        .cloned()
        .collect();
    over_corpus(&small, |g| {
        let w = Weigher::new(g);
        for e in g.box_edges() {
            for u in w.canonical_sequences(Item::Edge(e))? {
                let (found, oracle) = (w.copies(e, &u)?, w.oracle_copies(e, &u, ORACLE_SIZE)?);
                if found != oracle {
                    return Ok(Err(format!(
                        "edge {e}: search {found:?}, oracle {oracle:?}"
                    )));
                }
            }
        }
        Ok(Ok(()))
    })
    .map(|n| format!("{n} nets"))
}

fn weight_within(g: &ProofNet, system: System) -> Result<std::result::Result<i64, String>> {
    let w = Weigher::new(g).report()?.w;
    let b = bound(system, g.max_depth(), g.size() as u64);
    Ok(if b.admits_i64(w) {
        Ok(w)
    } else {
        Err(format!("W = {w} exceeds {b}"))
    })
}

fn member(g: &ProofNet, system: System) -> std::result::Result<(), String> {
    match check_membership(g, system).first() {
        Some(v) => Err(format!("not in {system}: {v}")),
        None => Ok(()),
    }
}

fn ell() -> Outcome {
    over_corpus(&fixtures(System::Ell), |g| {
        if let Err(why) = member(g, System::Ell) {
            return Ok(Err(why));
        }
        if let (_, Some((c, d))) = check_stratification(g)? {
            return Ok(Err(format!("{c} -> {d} changes the signature count")));
        }
        Ok(weight_within(g, System::Ell)?.map(|_| ()))
    })
    .map(|n| format!("{n} fixtures"))
}

fn sll() -> Outcome {
    over_corpus(&fixtures(System::Sll), |g| {
        if let Err(why) = member(g, System::Sll) {
            return Ok(Err(why));
        }
        let r = Weigher::new(g).report()?;
        for b in &r.boxes {
            if let Some(en) = b.entries.iter().find(|en| en.cardinality > g.size() as u64) {
                return Ok(Err(format!(
                    "edge {}: R = {} > |G| = {}",
                    b.edge,
                    en.cardinality,
                    g.size()
                )));
            }
        }
        Ok(weight_within(g, System::Sll)?.map(|_| ()))
    })
    .map(|n| format!("{n} fixtures"))
}

fn lll() -> Outcome {
    over_corpus(&fixtures(System::Lll), |g| {
        if let Err(why) = member(g, System::Lll) {
            return Ok(Err(why));
        }
        if let Some(c) = check_determinacy(g)? {
            return Ok(Err(format!("{c} has several successors")));
        }
        Ok(weight_within(g, System::Lll)?.map(|_| ()))
    })
    .map(|n| format!("{n} fixtures"))
}

fn jump_regression() -> Outcome {
    let g = jump_example(&atom());
    let without = Weigher::with_machine(
        &g,
        Machine::new(&g).without_jumps(),
        WeightBudget::default(),
    )
    .report()
    .map_err(|e| e.to_string())?
    .w;
    let t2 = theorem_two(&g, STEP_BUDGET).map_err(|e| e.to_string())?;
    let detail = format!(
        "without jumps W = {without}; with jumps W = {}, {} exponential of {} steps",
        t2.weight, t2.exponential_steps, t2.steps
    );
    if (without as usize) < t2.exponential_steps && t2.holds() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("exponential-path family", ladder_paths),
        ("ladder normalization", ladder_normalization),
        ("copy example", copy_example_counts),
        ("standardization", standardization),
        ("monotonicity", monotonicity),
        ("step and size bound", theorem_one),
        ("exponential steps equal the weight", theorem_two_corpus),
        ("cardinality sum at most W + 1", cardinality_bound),
        ("machine properties", machine_properties),
        ("subtree property", subtree_property),
        ("search agrees with oracle", oracle_agreement),
        ("ELL stratification and bound", ell),
        ("SLL cardinality and bound", sll),
        ("LLL determinacy and bound", lll),
        ("jump regression", jump_regression),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
