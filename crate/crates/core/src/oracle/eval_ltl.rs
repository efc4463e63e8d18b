//! Textbook LTL on a concrete trace.
//!
//! With a back loop the trace denotes the infinite word `stem . loop^ω` and
//! every operator gets its usual meaning; `U` and `R` are computed as least
//! and greatest fixpoints over the `k` positions. Without a loop we use the
//! bounded prefix semantics: `X` needs a successor, `G` never holds, `F` and
//! `U` need a witness inside the prefix.
//!
//! Sub-formulas are evaluated to one truth value per position, so every
//! temporal operator costs `O(k)` per fixpoint round.

use std::collections::{BTreeSet, HashMap};

use super::eval_fo::{closure, join, product};
use super::instance::{Relation, TraceInstance};
use crate::ground::AtomId;
use crate::spec::{Expr, Formula, Quant};

/// Truth of `f` at position `i`.
pub fn eval_ltl_lasso(f: &Formula, t: &TraceInstance, i: usize) -> bool {
    assert!(i < t.k(), "position {i} outside a trace of length {}", t.k());
    eval_ltl_positions(f, t)[i]
}

/// Truth of `f` at every position.
pub fn eval_ltl_positions(f: &Formula, t: &TraceInstance) -> Vec<bool> {
    Ltl {
        t,
        env: HashMap::new(),
    }
    .formula(f)
}

/// Truth of a formula without temporal operators at position `i`. Only
/// states `i` and its successor (for primed fields) are read, so the rest of
/// the trace may still be unassigned.
pub fn eval_state_formula(f: &Formula, t: &TraceInstance, i: usize) -> bool {
    Ltl {
        t,
        env: HashMap::new(),
    }
    .at(f, i)
}

struct Ltl<'a> {
    t: &'a TraceInstance,
    env: HashMap<u32, AtomId>,
}

impl Ltl<'_> {
    fn k(&self) -> usize {
        self.t.k()
    }

    fn succ(&self, i: usize) -> Option<usize> {
        self.t.next(i)
    }

    fn formula(&mut self, f: &Formula) -> Vec<bool> {
        let k = self.k();
        match f {
            Formula::True => vec![true; k],
            Formula::False => vec![false; k],
            Formula::In(a, b) => (0..k)
                .map(|i| self.expr(a, i).is_subset(&self.expr(b, i)))
                .collect(),
            Formula::Eq(a, b) => (0..k).map(|i| self.expr(a, i) == self.expr(b, i)).collect(),
            Formula::Card(op, e) => (0..k).map(|i| op.holds(self.expr(e, i).len())).collect(),
            Formula::Not(g) => self.formula(g).into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => zip(self.formula(a), self.formula(b), |x, y| x && y),
            Formula::Or(a, b) => zip(self.formula(a), self.formula(b), |x, y| x || y),
            Formula::Implies(a, b) => zip(self.formula(a), self.formula(b), |x, y| !x || y),
            Formula::Quant(q, v, d, body) => self.quant(*q, v.id, d, body),
            Formula::Next(g) => {
                let inner = self.formula(g);
                (0..k).map(|i| self.succ(i).is_some_and(|j| inner[j])).collect()
            }
            Formula::WeakNext(g) => {
                let inner = self.formula(g);
                (0..k).map(|i| self.succ(i).is_none_or(|j| inner[j])).collect()
            }
            Formula::Always(g) => {
                let inner = self.formula(g);
                match self.t.loop_to {
                    None => vec![false; k],
                    Some(l) => (0..k).map(|i| (i.min(l)..k).all(|j| inner[j])).collect(),
                }
            }
            Formula::Eventually(g) => {
                let inner = self.formula(g);
                let start = |i: usize| self.t.loop_to.map_or(i, |l| i.min(l));
                (0..k).map(|i| (start(i)..k).any(|j| inner[j])).collect()
            }
            Formula::Until(a, b) => {
                let (pa, pb) = (self.formula(a), self.formula(b));
                // least fixpoint of u = b or (a and X u)
                self.fixpoint(false, |i, u, succ| pb[i] || (pa[i] && succ.is_some_and(|j| u[j])))
            }
            Formula::Release(a, b) => {
                let (pa, pb) = (self.formula(a), self.formula(b));
                // greatest fixpoint of r = b and (a or X r); on a prefix the
                // last position has no successor, so only `a and b` releases
                self.fixpoint(true, |i, r, succ| pb[i] && (pa[i] || succ.is_some_and(|j| r[j])))
            }
        }
    }

    fn at(&mut self, f: &Formula, i: usize) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::In(a, b) => self.expr(a, i).is_subset(&self.expr(b, i)),
            Formula::Eq(a, b) => self.expr(a, i) == self.expr(b, i),
            Formula::Card(op, e) => op.holds(self.expr(e, i).len()),
            Formula::Not(g) => !self.at(g, i),
            Formula::And(a, b) => self.at(a, i) && self.at(b, i),
            Formula::Or(a, b) => self.at(a, i) || self.at(b, i),
            Formula::Implies(a, b) => !self.at(a, i) || self.at(b, i),
            Formula::Quant(q, v, d, body) => {
                let saved = self.env.get(&v.id).copied();
                let mut result = matches!(q, Quant::All);
                for tuple in self.expr(d, i) {
                    self.env.insert(v.id, tuple[0]);
                    if self.at(body, i) != result {
                        result = !result;
                        break;
                    }
                }
                match saved {
                    Some(a) => self.env.insert(v.id, a),
                    None => self.env.remove(&v.id),
                };
                result
            }
            _ => self.formula(f)[i],
        }
    }

    /// Iterates `step` from the constant `init` until nothing changes.
    fn fixpoint(&self, init: bool, step: impl Fn(usize, &[bool], Option<usize>) -> bool) -> Vec<bool> {
        let k = self.k();
        let mut v = vec![init; k];
        loop {
            let mut changed = false;
            for i in (0..k).rev() {
                let b = step(i, &v, self.succ(i));
                if b != v[i] {
                    v[i] = b;
                    changed = true;
                }
            }
            if !changed {
                return v;
            }
        }
    }

    fn quant(&mut self, q: Quant, var: u32, domain: &Expr, body: &Formula) -> Vec<bool> {
        let k = self.k();
        let doms: Vec<Relation> = (0..k).map(|i| self.expr(domain, i)).collect();
        let atoms: BTreeSet<AtomId> = doms.iter().flatten().map(|t| t[0]).collect();
        let saved = self.env.get(&var).copied();
        let mut out = vec![matches!(q, Quant::All); k];
        for a in atoms {
            self.env.insert(var, a);
            let vals = self.formula(body);
            for i in 0..k {
                if doms[i].contains(&vec![a]) {
                    match q {
                        Quant::All => out[i] &= vals[i],
                        Quant::Some => out[i] |= vals[i],
                    }
                }
            }
        }
        match saved {
            Some(a) => self.env.insert(var, a),
            None => self.env.remove(&var),
        };
        out
    }

    /// Value of `e` at position `i`. A primed field reads the successor and
    /// is empty where there is none.
    fn expr(&self, e: &Expr, i: usize) -> Relation {
        let t = self.t;
        match e {
            Expr::Sig(s) => t.atoms_of(*s).map(|a| vec![a]).collect(),
            Expr::Var(v) => [vec![self.env[&v.id]]].into(),
            Expr::None(_) => Relation::new(),
            Expr::Field { id, .. } => t.value(*id, i).clone(),
            Expr::Primed { id, .. } => match self.succ(i) {
                Some(j) => t.value(*id, j).clone(),
                None => Relation::new(),
            },
            Expr::Join(a, b) => join(&self.expr(a, i), &self.expr(b, i)),
            Expr::Union(a, b) => self.expr(a, i).union(&self.expr(b, i)).cloned().collect(),
            Expr::Inter(a, b) => self.expr(a, i).intersection(&self.expr(b, i)).cloned().collect(),
            Expr::Diff(a, b) => self.expr(a, i).difference(&self.expr(b, i)).cloned().collect(),
            Expr::Product(a, b) => product(&self.expr(a, i), &self.expr(b, i)),
            Expr::Closure(a) => closure(&self.expr(a, i)),
            Expr::RClosure(a) => {
                let mut c = closure(&self.expr(a, i));
                c.extend(t.present_atoms().map(|x| vec![x, x]));
                c
            }
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}
