//! Negation normal form.
//!
//! Negations are pushed down to relational atoms and cardinality tests, and
//! `implies` is eliminated. Negated next becomes the weak next `Xw`, since the
//! strong `X` is false at the last state of a loop-free prefix and its plain
//! negation would not be.

use crate::spec::Formula;

pub fn nnf(f: &Formula) -> Formula {
    pos(f)
}

/// Whether `f` is already in negation normal form.
pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::In(..) | Formula::Eq(..) | Formula::Card(..) => {
            true
        }
        Formula::Not(g) => matches!(**g, Formula::In(..) | Formula::Eq(..) | Formula::Card(..)),
        Formula::Implies(..) => false,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) | Formula::Release(a, b) => {
            is_nnf(a) && is_nnf(b)
        }
        Formula::Next(g) | Formula::WeakNext(g) | Formula::Always(g) | Formula::Eventually(g) => {
            is_nnf(g)
        }
        Formula::Quant(_, _, _, body) => is_nnf(body),
    }
}

fn pos(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::In(..) | Formula::Eq(..) | Formula::Card(..) => {
            f.clone()
        }
        Formula::Not(g) => neg(g),
        Formula::And(a, b) => Formula::and(pos(a), pos(b)),
        Formula::Or(a, b) => Formula::or(pos(a), pos(b)),
        Formula::Implies(a, b) => Formula::or(neg(a), pos(b)),
        Formula::Quant(q, v, d, body) => Formula::quant(*q, v.clone(), d.clone(), pos(body)),
        Formula::Next(g) => Formula::Next(Box::new(pos(g))),
        Formula::WeakNext(g) => Formula::WeakNext(Box::new(pos(g))),
        Formula::Always(g) => Formula::Always(Box::new(pos(g))),
        Formula::Eventually(g) => Formula::Eventually(Box::new(pos(g))),
        Formula::Until(a, b) => Formula::Until(Box::new(pos(a)), Box::new(pos(b))),
        Formula::Release(a, b) => Formula::Release(Box::new(pos(a)), Box::new(pos(b))),
    }
}

/// NNF of `not f`.
fn neg(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::In(..) | Formula::Eq(..) | Formula::Card(..) => Formula::not(f.clone()),
        Formula::Not(g) => pos(g),
        Formula::And(a, b) => Formula::or(neg(a), neg(b)),
        Formula::Or(a, b) => Formula::and(neg(a), neg(b)),
        Formula::Implies(a, b) => Formula::and(pos(a), neg(b)),
        Formula::Quant(q, v, d, body) => {
            Formula::quant(q.dual(), v.clone(), d.clone(), neg(body))
        }
        Formula::Next(g) => Formula::WeakNext(Box::new(neg(g))),
        Formula::WeakNext(g) => Formula::Next(Box::new(neg(g))),
        Formula::Always(g) => Formula::Eventually(Box::new(neg(g))),
        Formula::Eventually(g) => Formula::Always(Box::new(neg(g))),
        Formula::Until(a, b) => Formula::Release(Box::new(neg(a)), Box::new(neg(b))),
        Formula::Release(a, b) => Formula::Until(Box::new(neg(a)), Box::new(neg(b))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::load_spec;
    use crate::spec::Spec;

    fn spec() -> Spec {
        load_spec(
            "sig M {} sig C { var e : set M }
             assert A1 { not (G some e) }
             assert A2 { not (some e U no e) }
             assert A3 { not (all m : M | F (m in C.e)) }
             assert A4 { not X (some e) }
             assert A5 { not (some e implies no e) }",
        )
        .unwrap()
    }

    fn show(spec: &Spec, name: &str) -> String {
        spec.show(&nnf(spec.assertion(name).unwrap())).to_string()
    }

    #[test]
    fn temporal_dualities() {
        let s = spec();
        assert_eq!(show(&s, "A1"), "F not some e");
        assert_eq!(show(&s, "A2"), "(not some e R not no e)");
        assert_eq!(show(&s, "A3"), "some m : M | G not m in C.e");
        assert_eq!(show(&s, "A4"), "Xw not some e");
        assert_eq!(show(&s, "A5"), "some e and not no e");
    }

    #[test]
    fn output_is_nnf_and_idempotent() {
        let s = spec();
        for a in &s.asserts {
            let once = nnf(&a.formula);
            assert!(is_nnf(&once));
            assert_eq!(nnf(&once), once);
            assert!(once.size() <= 2 * a.formula.size());
        }
    }
}
