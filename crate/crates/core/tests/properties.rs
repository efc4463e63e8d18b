//! Invariants checked over generated specs, formulas, relations and CNFs.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lasso_bmc::alloy::{emit_alloy_spec, validate_alloy};
use lasso_bmc::embed::{axiomatize_trace, EmbedOptions, Idiom};
use lasso_bmc::engine::{run_command, EngineOptions};
use lasso_bmc::lang::{parse_spec, pretty_print};
use lasso_bmc::nnf::{is_nnf, nnf};
use lasso_bmc::oracle::eval_fo::{closure, join};
use lasso_bmc::oracle::random::{random_case, random_trace, RandomCase, SpecShape};
use lasso_bmc::oracle::{eval_ltl_lasso, EnumOptions, Relation};
use lasso_bmc::sat::{export_dimacs, parse_dimacs, solve, Cnf, SolveResult};
use lasso_bmc::spec::{CommandKind, Formula};

fn case(seed: u64) -> (RandomCase, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_case(&mut rng, SpecShape::default(), EnumOptions::default());
    (c, rng)
}

fn relation() -> impl Strategy<Value = Relation> {
    prop::collection::btree_set(prop::collection::vec(0u32..5, 2), 0..10)
}

fn cnf() -> impl Strategy<Value = Cnf> {
    (1u32..12).prop_flat_map(|n| {
        let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
        prop::collection::vec(prop::collection::vec(lit, 1..4), 0..40).prop_map(move |clauses| Cnf {
            num_vars: n,
            clauses,
        })
    })
}

fn negations(f: &Formula) -> usize {
    match f {
        Formula::Not(g) => 1 + negations(g),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Until(a, b)
        | Formula::Release(a, b) => negations(a) + negations(b),
        Formula::Quant(_, _, _, b)
        | Formula::Next(b)
        | Formula::WeakNext(b)
        | Formula::Always(b)
        | Formula::Eventually(b) => negations(b),
        _ => 0,
    }
}

/// Transitive closure by repeated squaring until nothing changes.
fn naive_closure(r: &Relation) -> Relation {
    let mut c = r.clone();
    loop {
        let step: Relation = c.union(&join(&c, &c)).cloned().collect();
        if step == c {
            return c;
        }
        c = step;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pretty_print_round_trips(seed in any::<u64>()) {
        let (c, _) = case(seed);
        let ast = parse_spec(&c.source).unwrap();
        let printed = pretty_print(&ast);
        let again = parse_spec(&printed).unwrap();
        prop_assert_eq!(&again, &ast, "{}", printed);
        prop_assert_eq!(pretty_print(&again), printed);
    }

    #[test]
    fn nnf_is_idempotent_normal_form(seed in any::<u64>()) {
        let (c, _) = case(seed);
        let f = c.goal();
        let g = nnf(&f);
        prop_assert!(is_nnf(&g));
        prop_assert_eq!(nnf(&g), g.clone());
        prop_assert_eq!(nnf(&Formula::not(Formula::not(f.clone()))), g.clone());
        // negations only move inward, never multiply
        prop_assert!(negations(&g) <= negations(&f) + count_atoms(&f));
    }

    #[test]
    fn nnf_preserves_lasso_semantics(seed in any::<u64>()) {
        let (c, mut rng) = case(seed);
        let f = c.goal();
        let g = nnf(&f);
        for _ in 0..5 {
            let t = random_trace(&mut rng, &c.spec, &c.scopes, c.k, true);
            for i in 0..t.k() {
                prop_assert_eq!(eval_ltl_lasso(&f, &t, i), eval_ltl_lasso(&g, &t, i));
            }
        }
    }

    #[test]
    fn closure_matches_fixpoint(r in relation()) {
        let c = closure(&r);
        prop_assert_eq!(&c, &naive_closure(&r));
        prop_assert!(r.is_subset(&c));
        prop_assert!(join(&c, &c).is_subset(&c));
    }

    #[test]
    fn solver_agrees_with_varisat(cnf in cnf()) {
        let ours = solve(&cnf);
        let mut other = varisat::Solver::new();
        other.add_dimacs_cnf(export_dimacs(&cnf).as_bytes()).unwrap();
        let theirs = other.solve().unwrap();
        prop_assert_eq!(ours.is_sat(), theirs);
        if let SolveResult::Sat(m) = ours {
            prop_assert!(cnf.satisfied_by(&m));
        }
    }

    #[test]
    fn dimacs_round_trips(cnf in cnf()) {
        prop_assert_eq!(parse_dimacs(&export_dimacs(&cnf)).unwrap(), cnf);
    }

    #[test]
    fn lasso_successor_is_total(k in 1usize..6, l in 0usize..6) {
        let t = axiomatize_trace(k);
        let lp = Some(l % k);
        for i in 0..k {
            let n = t.next(i, lp).unwrap();
            let expected = if i + 1 < k { i + 1 } else { l % k };
            prop_assert_eq!(n, expected);
        }
        prop_assert_eq!(t.next(k - 1, None), None);
        let reach: BTreeSet<usize> = t.reach(k - 1, lp).into_iter().collect();
        prop_assert_eq!(reach, (l % k..k).collect::<BTreeSet<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exported_specs_validate(seed in any::<u64>()) {
        let (c, _) = case(seed);
        let mut spec = c.spec.clone();
        spec.commands.push(c.command(CommandKind::Run));
        for idiom in [Idiom::Local, Idiom::Global] {
            let opts = EmbedOptions { idiom, ..EmbedOptions::default() };
            let text = emit_alloy_spec(&spec, "random", opts);
            prop_assert!(validate_alloy(&text).is_ok(), "{:?}\n{}", validate_alloy(&text), text);
        }
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let (c, _) = case(seed);
        let cmd = c.command(CommandKind::Check);
        let opts = EngineOptions::default();
        if let (Ok(a), Ok(b)) = (run_command(&c.spec, &cmd, &opts), run_command(&c.spec, &cmd, &opts)) {
            prop_assert_eq!(a.report(&c.spec).to_text(), b.report(&c.spec).to_text());
            prop_assert_eq!(a.report(&c.spec).to_json(), b.report(&c.spec).to_json());
        }
    }

    #[test]
    fn global_and_local_idioms_agree(seed in any::<u64>()) {
        let (c, _) = case(seed);
        let cmd = c.command(CommandKind::Run);
        let local = run_command(&c.spec, &cmd, &EngineOptions::default());
        let global = run_command(&c.spec, &cmd, &EngineOptions {
            embed: EmbedOptions { idiom: Idiom::Global, ..EmbedOptions::default() },
            ..EngineOptions::default()
        });
        if let (Ok(a), Ok(b)) = (local, global) {
            prop_assert_eq!(a.exit_code(), b.exit_code());
        }
    }
}

fn count_atoms(f: &Formula) -> usize {
    match f {
        Formula::Not(g)
        | Formula::Quant(_, _, _, g)
        | Formula::Next(g)
        | Formula::WeakNext(g)
        | Formula::Always(g)
        | Formula::Eventually(g) => count_atoms(g),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Until(a, b)
        | Formula::Release(a, b) => count_atoms(a) + count_atoms(b),
        _ => 1,
    }
}
