//! Brute-force semantics used to cross-check the pipeline: direct
//! evaluation of first-order trace formulas, textbook LTL on lassos, and
//! exhaustive trace enumeration.

pub mod diff;
pub mod enumerate;
pub mod eval_fo;
pub mod eval_ltl;
pub mod instance;
pub mod random;
pub mod report;

pub use diff::{diff_scope, DiffError, DiffOutcome};
pub use enumerate::{candidate_count, enumerate_traces, for_each_trace, EnumOptions, EnumerateError, DEFAULT_CAP};
pub use eval_fo::{eval_fo, eval_fo_expr};
pub use eval_ltl::{eval_ltl_lasso, eval_ltl_positions, eval_state_formula};
pub use instance::{Relation, TraceInstance};
pub use report::{Disagreement, FidelityReport};

use crate::embed::{EmbedOptions, Embedder, FoExpr};
use crate::nnf::nnf;
use crate::spec::{Formula, Spec};

/// Compares the embedding of `nnf(f)` at `first` with the LTL semantics of
/// `nnf(f)` at position 0 and files the outcome into `report`.
///
/// The bounded prefix semantics is only meaningful for NNF formulas (on a
/// prefix `not G p` and `F not p` differ), so both sides see the NNF.
pub fn compare_fidelity(spec: &Spec, f: &Formula, t: &TraceInstance, report: &mut FidelityReport) {
    let g = nnf(f);
    let fo = Embedder::new(spec, EmbedOptions::default())
        .embed(&g, &FoExpr::First)
        .expect("nnf output embeds");
    let fo_verdict = eval_fo(&fo, t);
    let ltl_verdict = eval_ltl_lasso(&g, t, 0);
    report.compared += 1;
    if fo_verdict == ltl_verdict {
        report.agreed += 1;
        return;
    }
    let d = Disagreement {
        formula: spec.show(f).to_string(),
        trace: t.summary(spec),
        fo_verdict,
        ltl_verdict,
    };
    if t.loop_to.is_some() && g.has_until_or_release() {
        report.until_release_lasso.push(d);
    } else {
        report.violations.push(d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{FoFormula, Idiom};
    use crate::ground::build_universe_unchecked;
    use crate::lang::load_spec;
    use crate::spec::{FieldId, Scope};

    fn spec() -> Spec {
        load_spec("sig A { var p : set A }").unwrap()
    }

    /// A over one atom; `p` holds (is nonempty) at the listed positions.
    fn trace(spec: &Spec, k: usize, loop_to: Option<usize>, holds: &[usize]) -> TraceInstance {
        let u = build_universe_unchecked(spec, &[Scope::exactly(1)], k);
        let a = u.sig_atoms[0][0];
        let mut t = TraceInstance::empty(spec, u, loop_to);
        for &i in holds {
            t.value_mut(FieldId(0), i).insert(vec![a, a]);
        }
        t
    }

    fn ltl(spec: &Spec, src: &str, t: &TraceInstance) -> bool {
        let full = format!("sig A {{ var p : set A }} pred Q {{ {src} }}");
        let s2 = load_spec(&full).unwrap();
        eval_ltl_lasso(&s2.pred("Q").unwrap().body, t, 0) && spec.sigs.len() == 1
    }

    #[test]
    fn infinite_predicate() {
        let s = spec();
        assert!(eval_fo(&FoFormula::Infinite, &trace(&s, 2, Some(1), &[])));
        assert!(!eval_fo(&FoFormula::Infinite, &trace(&s, 2, None, &[])));
    }

    #[test]
    fn last_has_no_successor_without_loop() {
        let s = spec();
        let t = trace(&s, 3, None, &[]);
        let f = FoFormula::Card(crate::spec::CardOp::Some, FoExpr::join(FoExpr::Last, FoExpr::Next));
        assert!(!eval_fo(&f, &t));
        assert!(eval_fo(&f, &trace(&s, 3, Some(0), &[])));
    }

    #[test]
    fn always_needs_a_loop() {
        let s = spec();
        assert!(ltl(&s, "G some p", &trace(&s, 2, Some(0), &[0, 1])));
        assert!(!ltl(&s, "G some p", &trace(&s, 2, None, &[0, 1])));
    }

    #[test]
    fn eventually_within_prefix() {
        let s = spec();
        assert!(ltl(&s, "F some p", &trace(&s, 2, None, &[1])));
        assert!(!ltl(&s, "F some p", &trace(&s, 2, None, &[])));
    }

    #[test]
    fn eventually_sees_loop_states() {
        // from position 2 of a loop back to 0, position 0 comes again
        let s = spec();
        let t = trace(&s, 3, Some(0), &[0]);
        let f = load_spec("sig A { var p : set A } pred Q { F some p }").unwrap();
        let v = eval_ltl_positions(&f.pred("Q").unwrap().body, &t);
        assert_eq!(v, vec![true, true, true]);
    }

    #[test]
    fn until_on_lasso() {
        let s = spec();
        // p at 0 only, then loop 1 -> 1 where p never holds
        let t = trace(&s, 2, Some(1), &[0]);
        assert!(ltl(&s, "(some p U some p)", &t));
        assert!(!ltl(&s, "(some p U no A)", &t));
        assert!(ltl(&s, "(no A R no p)", &trace(&s, 2, Some(0), &[])));
        // on a prefix R needs its releasing witness
        assert!(!ltl(&s, "(no A R no p)", &trace(&s, 2, None, &[])));
        assert!(ltl(&s, "(no p R no p)", &trace(&s, 2, None, &[])));
    }

    #[test]
    fn weak_next_holds_at_the_end() {
        let s = spec();
        let t = trace(&s, 1, None, &[]);
        let f = Formula::WeakNext(Box::new(Formula::False));
        assert!(eval_ltl_lasso(&f, &t, 0));
        assert!(!eval_ltl_lasso(&Formula::Next(Box::new(Formula::True)), &t, 0));
    }

    #[test]
    fn prefix_breaks_always_eventually_duality() {
        // p everywhere, no loop: not G p holds but F not p does not
        let s = spec();
        let t = trace(&s, 2, None, &[0, 1]);
        assert!(ltl(&s, "not G some p", &t));
        assert!(!ltl(&s, "F not some p", &t));
    }

    #[test]
    fn embedding_agrees_on_simple_formulas() {
        let s = load_spec("sig A { var p : set A } pred Q { G F some p } pred W { X (some p U no p) }").unwrap();
        let mut report = FidelityReport::default();
        for lp in [None, Some(0), Some(1), Some(2)] {
            for mask in 0..8usize {
                let holds: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
                let t = trace(&s, 3, lp, &holds);
                compare_fidelity(&s, &s.pred("Q").unwrap().body, &t, &mut report);
                if lp.is_none() {
                    compare_fidelity(&s, &s.pred("W").unwrap().body, &t, &mut report);
                }
            }
        }
        assert!(report.violations.is_empty(), "{}", report.lines());
    }

    #[test]
    fn idioms_agree() {
        let s = load_spec("sig A { var p : set A } pred Q { all x : A | F x in A.p }").unwrap();
        let f = nnf(&s.pred("Q").unwrap().body);
        let t = trace(&s, 2, Some(0), &[1]);
        for idiom in [Idiom::Local, Idiom::Global] {
            let opts = EmbedOptions { idiom, finite_traces: false };
            let fo = Embedder::new(&s, opts).embed(&f, &FoExpr::First).unwrap();
            assert!(eval_fo(&fo, &t));
        }
    }
}
