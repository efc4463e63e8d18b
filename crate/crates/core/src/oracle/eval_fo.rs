//! Set-based evaluation of first-order trace formulas on a concrete trace.

use std::collections::HashMap;

use super::instance::{Relation, TraceInstance};
use crate::embed::{FoExpr, FoFormula, Idiom};
use crate::ground::AtomId;
use crate::spec::Quant;

pub fn eval_fo(f: &FoFormula, t: &TraceInstance) -> bool {
    Eval {
        t,
        env: HashMap::new(),
    }
    .formula(f)
}

pub fn eval_fo_expr(e: &FoExpr, t: &TraceInstance) -> Relation {
    Eval {
        t,
        env: HashMap::new(),
    }
    .expr(e)
}

struct Eval<'a> {
    t: &'a TraceInstance,
    env: HashMap<u32, AtomId>,
}

impl Eval<'_> {
    fn formula(&mut self, f: &FoFormula) -> bool {
        match f {
            FoFormula::True => true,
            FoFormula::False => false,
            FoFormula::Infinite => self.t.loop_to.is_some(),
            FoFormula::Finite => self.t.loop_to.is_none(),
            FoFormula::In(a, b) => self.expr(a).is_subset(&self.expr(b)),
            FoFormula::Eq(a, b) => self.expr(a) == self.expr(b),
            FoFormula::Card(op, e) => op.holds(self.expr(e).len()),
            FoFormula::Not(g) => !self.formula(g),
            FoFormula::And(a, b) => self.formula(a) && self.formula(b),
            FoFormula::Or(a, b) => self.formula(a) || self.formula(b),
            FoFormula::Quant(q, v, d, body) => {
                let dom = self.expr(d);
                let saved = self.env.get(&v.id).copied();
                let mut result = matches!(q, Quant::All);
                for tuple in dom {
                    self.env.insert(v.id, tuple[0]);
                    let b = self.formula(body);
                    if b != result {
                        result = b;
                        break;
                    }
                }
                match saved {
                    Some(a) => self.env.insert(v.id, a),
                    None => self.env.remove(&v.id),
                };
                result
            }
        }
    }

    fn expr(&mut self, e: &FoExpr) -> Relation {
        let t = self.t;
        let u = &t.universe;
        match e {
            FoExpr::Sig(s) => t.atoms_of(*s).map(|a| vec![a]).collect(),
            FoExpr::State => u.state_atoms.iter().map(|&a| vec![a]).collect(),
            FoExpr::First => [vec![u.state(0)]].into(),
            FoExpr::Last => [vec![u.state(t.k() - 1)]].into(),
            FoExpr::Var(v) => [vec![self.env[&v.id]]].into(),
            FoExpr::None(_) => Relation::new(),
            FoExpr::Next => (0..t.k())
                .filter_map(|i| t.next(i).map(|j| vec![u.state(i), u.state(j)]))
                .collect(),
            FoExpr::Field { id, state, .. } => match state {
                None => t.value(*id, 0).clone(),
                Some(idiom) => {
                    let mut out = Relation::new();
                    for i in 0..t.k() {
                        let s = u.state(i);
                        for tuple in t.value(*id, i) {
                            let mut t2 = tuple.clone();
                            match idiom {
                                Idiom::Local => t2.push(s),
                                Idiom::Global => t2.insert(0, s),
                            }
                            out.insert(t2);
                        }
                    }
                    out
                }
            },
            FoExpr::Join(a, b) => join(&self.expr(a), &self.expr(b)),
            FoExpr::Union(a, b) => self.expr(a).union(&self.expr(b)).cloned().collect(),
            FoExpr::Inter(a, b) => self.expr(a).intersection(&self.expr(b)).cloned().collect(),
            FoExpr::Diff(a, b) => self.expr(a).difference(&self.expr(b)).cloned().collect(),
            FoExpr::Product(a, b) => product(&self.expr(a), &self.expr(b)),
            FoExpr::Closure(a) => closure(&self.expr(a)),
            FoExpr::RClosure(a) => {
                let mut c = closure(&self.expr(a));
                c.extend(t.present_atoms().map(|x| vec![x, x]));
                c
            }
        }
    }
}

pub fn join(a: &Relation, b: &Relation) -> Relation {
    let mut out = Relation::new();
    for ta in a {
        for tb in b {
            if ta.last() == tb.first() {
                let mut t = ta[..ta.len() - 1].to_vec();
                t.extend_from_slice(&tb[1..]);
                out.insert(t);
            }
        }
    }
    out
}

pub fn product(a: &Relation, b: &Relation) -> Relation {
    let mut out = Relation::new();
    for ta in a {
        for tb in b {
            let mut t = ta.clone();
            t.extend_from_slice(tb);
            out.insert(t);
        }
    }
    out
}

/// Transitive closure by saturation.
pub fn closure(r: &Relation) -> Relation {
    let mut out = r.clone();
    loop {
        let step = join(&out, r);
        let before = out.len();
        out.extend(step);
        if out.len() == before {
            return out;
        }
    }
}
