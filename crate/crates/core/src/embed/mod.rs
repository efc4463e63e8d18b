//! Embedding of temporal formulas into first-order relational logic over an
//! explicit trace.
//!
//! A formula is evaluated at a state term `s`. Temporal operators become
//! quantifications over `s.*next`, mutable fields get their State column
//! joined with the current state, and primed fields with the successor.

pub mod fo;
pub mod trace;

use crate::nnf::nnf;
use crate::spec::{Expr, Formula, Quant, Spec, Var};

pub use fo::{FoExpr, FoFormula, Idiom};
pub use trace::{axiomatize_trace, total_order, TraceAxioms};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EmbedOptions {
    pub idiom: Idiom,
    /// Plain total order semantics: `G` loses its `infinite` conjunct, so it
    /// only needs to hold on the prefix.
    pub finite_traces: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("formula is not in negation normal form: {0}")]
    NotNnf(String),
    #[error("primed field `{0}` outside the transition constraint")]
    StrayPrime(String),
}

/// Embeds formulas of one spec. Fresh state variables get ids above every
/// variable of the spec, so they never capture user variables.
pub struct Embedder<'a> {
    spec: &'a Spec,
    opts: EmbedOptions,
    next_var: u32,
}

impl<'a> Embedder<'a> {
    pub fn new(spec: &'a Spec, opts: EmbedOptions) -> Self {
        Embedder {
            spec,
            opts,
            next_var: spec.max_var_id() + 1,
        }
    }

    pub fn options(&self) -> EmbedOptions {
        self.opts
    }

    pub fn fresh_state(&mut self, name: &str) -> Var {
        let v = Var::new(self.next_var, name);
        self.next_var += 1;
        v
    }

    /// Facts and run targets: the embedding of the NNF at `first`.
    pub fn translate_positive(&mut self, f: &Formula) -> FoFormula {
        self.embed(&nnf(f), &FoExpr::First)
            .expect("nnf output embeds")
    }

    /// The counterexample query of a check: the embedding of the NNF of its
    /// negation at `first`.
    pub fn check_query(&mut self, f: &Formula) -> FoFormula {
        self.translate_positive(&Formula::not(f.clone()))
    }

    /// What an assertion means as a fact: the negated counterexample query.
    pub fn translate_check(&mut self, f: &Formula) -> FoFormula {
        FoFormula::not(self.check_query(f))
    }

    /// `all s : State | all s' : s.next | t` with unprimed mutable fields at
    /// `s` and primed ones at `s'`.
    pub fn desugar_trans(&mut self, t: &Formula) -> Result<FoFormula, EmbedError> {
        let s = self.fresh_state("s");
        let s2 = self.fresh_state("s'");
        let here = FoExpr::Var(s.clone());
        let succ = FoExpr::Var(s2.clone());
        let body = self.formula(&nnf(t), &here, Some(&succ), true)?;
        Ok(FoFormula::quant(
            Quant::All,
            s,
            FoExpr::State,
            FoFormula::quant(Quant::All, s2, FoExpr::join(here, FoExpr::Next), body),
        ))
    }

    /// Embeds an NNF formula at state term `s`. Primes refer to `s.next`.
    pub fn embed(&mut self, f: &Formula, s: &FoExpr) -> Result<FoFormula, EmbedError> {
        self.formula(f, s, None, false)
    }

    fn formula(
        &mut self,
        f: &Formula,
        s: &FoExpr,
        succ: Option<&FoExpr>,
        primes_ok: bool,
    ) -> Result<FoFormula, EmbedError> {
        let sub = |me: &mut Self, g: &Formula, at: &FoExpr| me.formula(g, at, succ, primes_ok);
        Ok(match f {
            Formula::True => FoFormula::True,
            Formula::False => FoFormula::False,
            Formula::In(a, b) => FoFormula::In(
                self.expr(a, s, succ, primes_ok)?,
                self.expr(b, s, succ, primes_ok)?,
            ),
            Formula::Eq(a, b) => FoFormula::Eq(
                self.expr(a, s, succ, primes_ok)?,
                self.expr(b, s, succ, primes_ok)?,
            ),
            Formula::Card(op, e) => FoFormula::Card(*op, self.expr(e, s, succ, primes_ok)?),
            Formula::Not(g) => match g.as_ref() {
                Formula::In(..) | Formula::Eq(..) | Formula::Card(..) => {
                    FoFormula::not(sub(self, g, s)?)
                }
                _ => return Err(self.not_nnf(f)),
            },
            Formula::Implies(..) => return Err(self.not_nnf(f)),
            Formula::And(a, b) => FoFormula::and(sub(self, a, s)?, sub(self, b, s)?),
            Formula::Or(a, b) => FoFormula::or(sub(self, a, s)?, sub(self, b, s)?),
            Formula::Quant(q, v, d, body) => FoFormula::quant(
                *q,
                v.clone(),
                self.expr(d, s, succ, primes_ok)?,
                sub(self, body, s)?,
            ),
            Formula::Next(g) => {
                let n = FoExpr::join(s.clone(), FoExpr::Next);
                FoFormula::and(FoFormula::Card(crate::spec::CardOp::Some, n.clone()), sub(self, g, &n)?)
            }
            Formula::WeakNext(g) => {
                let n = FoExpr::join(s.clone(), FoExpr::Next);
                FoFormula::or(FoFormula::Card(crate::spec::CardOp::No, n.clone()), sub(self, g, &n)?)
            }
            Formula::Always(g) => self.always(g, s, succ, primes_ok)?,
            Formula::Eventually(g) => {
                let s1 = self.fresh_state("s'");
                let at = FoExpr::Var(s1.clone());
                let body = sub(self, g, &at)?;
                FoFormula::quant(Quant::Some, s1, reach(s), body)
            }
            Formula::Until(a, b) => {
                // some s' : s.*next | b@s' and all s'' : s.*next & ^next.s' | a@s''
                let s1 = self.fresh_state("s'");
                let s2 = self.fresh_state("s''");
                let at1 = FoExpr::Var(s1.clone());
                let at2 = FoExpr::Var(s2.clone());
                let between = FoExpr::inter(
                    reach(s),
                    FoExpr::join(FoExpr::closure(FoExpr::Next), at1.clone()),
                );
                let hold = FoFormula::quant(Quant::All, s2, between, sub(self, a, &at2)?);
                FoFormula::quant(Quant::Some, s1, reach(s), FoFormula::and(sub(self, b, &at1)?, hold))
            }
            Formula::Release(a, b) => {
                // G b or some s' : s.*next | a@s' and all s'' : s.*next & *next.s' | b@s''
                let forever = self.always(b, s, succ, primes_ok)?;
                let s1 = self.fresh_state("s'");
                let s2 = self.fresh_state("s''");
                let at1 = FoExpr::Var(s1.clone());
                let at2 = FoExpr::Var(s2.clone());
                let upto = FoExpr::inter(
                    reach(s),
                    FoExpr::join(FoExpr::rclosure(FoExpr::Next), at1.clone()),
                );
                let hold = FoFormula::quant(Quant::All, s2, upto, sub(self, b, &at2)?);
                let witness =
                    FoFormula::quant(Quant::Some, s1, reach(s), FoFormula::and(sub(self, a, &at1)?, hold));
                FoFormula::or(forever, witness)
            }
        })
    }

    fn always(
        &mut self,
        g: &Formula,
        s: &FoExpr,
        succ: Option<&FoExpr>,
        primes_ok: bool,
    ) -> Result<FoFormula, EmbedError> {
        let s1 = self.fresh_state("s'");
        let at = FoExpr::Var(s1.clone());
        let body = self.formula(g, &at, succ, primes_ok)?;
        let all = FoFormula::quant(Quant::All, s1, reach(s), body);
        Ok(if self.opts.finite_traces {
            all
        } else {
            FoFormula::and(FoFormula::Infinite, all)
        })
    }

    fn not_nnf(&self, f: &Formula) -> EmbedError {
        EmbedError::NotNnf(self.spec.show(f).to_string())
    }

    /// Relational expression at state `s`.
    pub fn expr(
        &mut self,
        e: &Expr,
        s: &FoExpr,
        succ: Option<&FoExpr>,
        primes_ok: bool,
    ) -> Result<FoExpr, EmbedError> {
        let sub = |me: &mut Self, x: &Expr| me.expr(x, s, succ, primes_ok);
        Ok(match e {
            Expr::Sig(id) => FoExpr::Sig(*id),
            Expr::Var(v) => FoExpr::Var(v.clone()),
            Expr::None(n) => FoExpr::None(*n),
            Expr::Field { id, arity } => {
                if self.spec.field(*id).mutable {
                    self.at_state(*id, *arity, s.clone())
                } else {
                    FoExpr::Field {
                        id: *id,
                        arity: *arity,
                        state: None,
                    }
                }
            }
            Expr::Primed { id, arity } => {
                if !primes_ok && succ.is_none() {
                    // Outside `trans` a prime still means the successor.
                    let n = FoExpr::join(s.clone(), FoExpr::Next);
                    return Ok(self.at_state(*id, *arity, n));
                }
                let target = match succ {
                    Some(t) => t.clone(),
                    None => return Err(EmbedError::StrayPrime(self.spec.field(*id).name.clone())),
                };
                self.at_state(*id, *arity, target)
            }
            Expr::Join(a, b) => FoExpr::join(sub(self, a)?, sub(self, b)?),
            Expr::Union(a, b) => FoExpr::Union(Box::new(sub(self, a)?), Box::new(sub(self, b)?)),
            Expr::Inter(a, b) => FoExpr::inter(sub(self, a)?, sub(self, b)?),
            Expr::Diff(a, b) => FoExpr::Diff(Box::new(sub(self, a)?), Box::new(sub(self, b)?)),
            Expr::Product(a, b) => {
                FoExpr::Product(Box::new(sub(self, a)?), Box::new(sub(self, b)?))
            }
            Expr::Closure(a) => FoExpr::closure(sub(self, a)?),
            Expr::RClosure(a) => FoExpr::rclosure(sub(self, a)?),
        })
    }

    /// Leaf rule: `x.s` in the local idiom, `s.x` in the global one.
    pub fn at_state(&self, id: crate::spec::FieldId, arity: usize, s: FoExpr) -> FoExpr {
        let rel = FoExpr::Field {
            id,
            arity: arity + 1,
            state: Some(self.opts.idiom),
        };
        match self.opts.idiom {
            Idiom::Local => FoExpr::join(rel, s),
            Idiom::Global => FoExpr::join(s, rel),
        }
    }
}

/// `s.*next`
fn reach(s: &FoExpr) -> FoExpr {
    FoExpr::join(s.clone(), FoExpr::rclosure(FoExpr::Next))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::load_spec;

    const SPEC: &str = "
        sig M {}
        sig C { var messages : set M }
        sig P { port : one C }
        assert Gp { G (some messages) }
        assert Xp { X (some messages) }
        assert Loc { all p : P, m : M | G (m in p.port.messages) }
        assert Up { (some messages U no messages) }
        assert Rp { (some messages R no messages) }
        trans { messages' = messages }
    ";

    fn show(spec: &Spec, opts: EmbedOptions, name: &str) -> String {
        let mut e = Embedder::new(spec, opts);
        let f = e.translate_positive(spec.assertion(name).unwrap());
        fo::show(spec, &f)
    }

    #[test]
    fn always_requires_a_loop() {
        let spec = load_spec(SPEC).unwrap();
        assert_eq!(
            show(&spec, EmbedOptions::default(), "Gp"),
            "infinite and (all s' : first.*next | some messages.s')"
        );
        let finite = EmbedOptions {
            finite_traces: true,
            ..Default::default()
        };
        assert_eq!(
            show(&spec, finite, "Gp"),
            "all s' : first.*next | some messages.s'"
        );
    }

    #[test]
    fn strong_next() {
        let spec = load_spec(SPEC).unwrap();
        assert_eq!(
            show(&spec, EmbedOptions::default(), "Xp"),
            "some first.next and some messages.(first.next)"
        );
    }

    #[test]
    fn leaf_rule_only_indexes_mutable_fields() {
        let spec = load_spec(SPEC).unwrap();
        assert_eq!(
            show(&spec, EmbedOptions::default(), "Loc"),
            "all p : P | all m : M | infinite and (all s' : first.*next | m in p.port.(messages.s'))"
        );
        let global = EmbedOptions {
            idiom: Idiom::Global,
            ..Default::default()
        };
        assert_eq!(
            show(&spec, global, "Loc"),
            "all p : P | all m : M | infinite and (all s' : first.*next | m in p.port.(s'.messages))"
        );
    }

    #[test]
    fn until_and_release() {
        let spec = load_spec(SPEC).unwrap();
        assert_eq!(
            show(&spec, EmbedOptions::default(), "Up"),
            "some s' : first.*next | no messages.s' and (all s'' : first.*next & ^next.s' | some messages.s'')"
        );
        assert_eq!(
            show(&spec, EmbedOptions::default(), "Rp"),
            "infinite and (all s' : first.*next | no messages.s') or (some s'_2 : first.*next | some messages.s'_2 and (all s'' : first.*next & *next.s'_2 | no messages.s''))"
        );
    }

    #[test]
    fn check_negates_before_normalising() {
        let spec = load_spec(SPEC).unwrap();
        let mut e = Embedder::new(&spec, EmbedOptions::default());
        let q = e.check_query(spec.assertion("Gp").unwrap());
        assert_eq!(fo::show(&spec, &q), "some s' : first.*next | not some messages.s'");
        let mut e = Embedder::new(&spec, EmbedOptions::default());
        assert_eq!(e.check_query(&Formula::True), FoFormula::False);
    }

    #[test]
    fn transition_uses_explicit_successor() {
        let spec = load_spec(SPEC).unwrap();
        let mut e = Embedder::new(&spec, EmbedOptions::default());
        let t = e.desugar_trans(spec.trans.as_ref().unwrap()).unwrap();
        assert_eq!(
            fo::show(&spec, &t),
            "all s : State | all s' : s.next | messages.s' = messages.s"
        );
        assert!(t.free_vars().is_empty());
    }

    #[test]
    fn rejects_non_nnf() {
        let spec = load_spec(SPEC).unwrap();
        let mut e = Embedder::new(&spec, EmbedOptions::default());
        let f = Formula::not(spec.assertion("Gp").unwrap().clone());
        assert!(matches!(e.embed(&f, &FoExpr::First), Err(EmbedError::NotNnf(_))));
    }
}
