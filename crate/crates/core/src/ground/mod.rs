//! Grounding of first-order trace formulas to CNF over a finite universe.
//!
//! Relational expressions become sparse boolean matrices (tuple to circuit
//! literal), quantifiers are expanded over their domain matrices, and the
//! resulting circuit is Tseitin-encoded. Primary variables (relation tuples,
//! atom presence, loop choice) come first and are listed in the [`VarMap`].

pub mod circuit;
mod mult;
pub mod universe;

use std::collections::{BTreeMap, HashMap};

use crate::embed::{FoExpr, FoFormula, TraceAxioms};
use crate::sat::Cnf;
use crate::spec::{CardOp, FieldId, Quant, Spec};

pub use circuit::{Circuit, Lit};
pub use mult::{encode_multiplicities, field_multiplicity};
pub use universe::{build_universe, build_universe_unchecked, command_scopes, AtomId, Universe};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroundError {
    #[error("arity mismatch in `{0}`")]
    Arity(String),
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

/// A sparse boolean relation: tuples absent from the map are false.
pub type Matrix = BTreeMap<Vec<AtomId>, Lit>;

/// What a primary variable stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarMeaning {
    /// A tuple of a relation; `state` is set for mutable fields.
    Fact {
        field: FieldId,
        state: Option<usize>,
        tuple: Vec<AtomId>,
    },
    Present(AtomId),
    /// The back loop goes to this state.
    Loop(usize),
}

/// Bijection between primary variables (`1..=len`) and their meaning.
#[derive(Debug, Clone, Default)]
pub struct VarMap {
    meanings: Vec<VarMeaning>,
    index: HashMap<VarMeaning, u32>,
}

impl VarMap {
    fn add(&mut self, m: VarMeaning) -> u32 {
        self.meanings.push(m.clone());
        let v = self.meanings.len() as u32;
        self.index.insert(m, v);
        v
    }

    pub fn len(&self) -> usize {
        self.meanings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.meanings.is_empty()
    }

    pub fn meaning(&self, var: u32) -> Option<&VarMeaning> {
        self.meanings.get(var.checked_sub(1)? as usize)
    }

    pub fn var(&self, m: &VarMeaning) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &VarMeaning)> {
        self.meanings.iter().enumerate().map(|(i, m)| (i as u32 + 1, m))
    }

    /// Number of relation-tuple variables.
    pub fn fact_count(&self) -> usize {
        self.meanings
            .iter()
            .filter(|m| matches!(m, VarMeaning::Fact { .. }))
            .count()
    }
}

/// Everything needed to solve one bounded problem and decode its models.
#[derive(Debug, Clone)]
pub struct Grounding {
    pub cnf: Cnf,
    pub vars: VarMap,
    pub universe: Universe,
    pub axioms: TraceAxioms,
}

/// Grounds `f` (closed) over `u` and the trace skeleton `t`.
pub fn ground(spec: &Spec, u: &Universe, t: TraceAxioms, f: &FoFormula) -> Result<Grounding, GroundError> {
    let mut g = Grounder::new(spec, u, t);
    let root = g.formula(f)?;
    let mut roots = g.structural.clone();
    roots.push(root);
    let cnf = g.circuit.to_cnf(&roots, g.vars.len() as u32);
    Ok(Grounding {
        cnf,
        vars: g.vars,
        universe: u.clone(),
        axioms: t,
    })
}

pub struct Grounder<'a> {
    spec: &'a Spec,
    u: &'a Universe,
    t: TraceAxioms,
    pub circuit: Circuit,
    pub vars: VarMap,
    /// Constraints that hold in every instance: presence and loop shape.
    pub structural: Vec<Lit>,
    presence: Vec<Lit>,
    loops: Vec<Lit>,
    /// Per field: static matrix, or one per state.
    statics: BTreeMap<FieldId, Matrix>,
    mutables: BTreeMap<FieldId, Vec<Matrix>>,
    env: HashMap<u32, AtomId>,
    cache: HashMap<&'static str, Matrix>,
}

impl<'a> Grounder<'a> {
    pub fn new(spec: &'a Spec, u: &'a Universe, t: TraceAxioms) -> Self {
        assert_eq!(u.k(), t.k, "universe and trace disagree on k");
        let mut g = Grounder {
            spec,
            u,
            t,
            circuit: Circuit::new(),
            vars: VarMap::default(),
            structural: Vec::new(),
            presence: vec![Lit::TRUE; u.atoms.len()],
            loops: Vec::new(),
            statics: BTreeMap::new(),
            mutables: BTreeMap::new(),
            env: HashMap::new(),
            cache: HashMap::new(),
        };
        g.allocate();
        g
    }

    /// Primary variables in a fixed order: relation tuples field by field
    /// (states innermost for mutable fields), then presence, then loops.
    fn allocate(&mut self) {
        let (spec, u) = (self.spec, self.u);
        for fid in (0..spec.fields.len()).map(FieldId) {
            let pools = u.column_pools(spec, fid);
            let ts = universe::tuples(&pools);
            if spec.field(fid).mutable {
                let mut per_state = vec![Matrix::new(); u.k()];
                for tuple in &ts {
                    for (i, m) in per_state.iter_mut().enumerate() {
                        let v = self.vars.add(VarMeaning::Fact {
                            field: fid,
                            state: Some(i),
                            tuple: tuple.clone(),
                        });
                        m.insert(tuple.clone(), self.circuit.input(v));
                    }
                }
                self.mutables.insert(fid, per_state);
            } else {
                let mut m = Matrix::new();
                for tuple in ts {
                    let v = self.vars.add(VarMeaning::Fact {
                        field: fid,
                        state: None,
                        tuple: tuple.clone(),
                    });
                    m.insert(tuple, self.circuit.input(v));
                }
                self.statics.insert(fid, m);
            }
        }
        for a in 0..u.atoms.len() as AtomId {
            if u.is_optional(a) {
                let v = self.vars.add(VarMeaning::Present(a));
                self.presence[a as usize] = self.circuit.input(v);
            }
        }
        if self.t.loops {
            for l in 0..self.t.k {
                let v = self.vars.add(VarMeaning::Loop(l));
                let lit = self.circuit.input(v);
                self.loops.push(lit);
            }
        }
        // Present atoms form a prefix of each pool, so instances differing
        // only by a renaming of absent atoms are not searched twice.
        for pool in &u.sig_atoms {
            for w in pool.windows(2) {
                let (a, b) = (self.presence[w[0] as usize], self.presence[w[1] as usize]);
                let c = self.circuit.implies(b, a);
                self.structural.push(c);
            }
        }
        // Tuples only mention present atoms.
        let mut tuple_guards = Vec::new();
        for m in self.statics.values().chain(self.mutables.values().flatten()) {
            for (tuple, &lit) in m {
                for &a in tuple {
                    tuple_guards.push((lit, self.presence[a as usize]));
                }
            }
        }
        for (lit, p) in tuple_guards {
            if p != Lit::TRUE {
                let c = self.circuit.implies(lit, p);
                self.structural.push(c);
            }
        }
        let loops = self.loops.clone();
        let amo = self.circuit.at_most_one(&loops);
        self.structural.push(amo);
    }

    pub fn loop_lits(&self) -> &[Lit] {
        &self.loops
    }

    pub fn infinite(&mut self) -> Lit {
        let loops = self.loops.clone();
        self.circuit.or(loops)
    }

    pub fn formula(&mut self, f: &FoFormula) -> Result<Lit, GroundError> {
        Ok(match f {
            FoFormula::True => Lit::TRUE,
            FoFormula::False => Lit::FALSE,
            FoFormula::Infinite => self.infinite(),
            FoFormula::Finite => !self.infinite(),
            FoFormula::In(a, b) => {
                let (ma, mb) = (self.expr(a)?, self.expr(b)?);
                self.subset(&ma, &mb)
            }
            FoFormula::Eq(a, b) => {
                let (ma, mb) = (self.expr(a)?, self.expr(b)?);
                let l = self.subset(&ma, &mb);
                let r = self.subset(&mb, &ma);
                self.circuit.and2(l, r)
            }
            FoFormula::Card(op, e) => {
                let m = self.expr(e)?;
                let lits: Vec<Lit> = m.values().copied().collect();
                match op {
                    CardOp::No => {
                        let some = self.circuit.or(lits);
                        !some
                    }
                    CardOp::Some => self.circuit.or(lits),
                    CardOp::Lone => self.circuit.at_most_one(&lits),
                    CardOp::One => {
                        let some = self.circuit.or(lits.iter().copied());
                        let amo = self.circuit.at_most_one(&lits);
                        self.circuit.and2(some, amo)
                    }
                }
            }
            FoFormula::Not(g) => !self.formula(g)?,
            FoFormula::And(a, b) => {
                let l = self.formula(a)?;
                if l == Lit::FALSE {
                    return Ok(Lit::FALSE);
                }
                let r = self.formula(b)?;
                self.circuit.and2(l, r)
            }
            FoFormula::Or(a, b) => {
                let l = self.formula(a)?;
                if l == Lit::TRUE {
                    return Ok(Lit::TRUE);
                }
                let r = self.formula(b)?;
                self.circuit.or2(l, r)
            }
            FoFormula::Quant(q, v, d, body) => {
                let dom = self.expr(d)?;
                if d.arity() != 1 {
                    return Err(GroundError::Arity(format!("domain of {}", v.name)));
                }
                let saved = self.env.get(&v.id).copied();
                let mut parts = Vec::with_capacity(dom.len());
                for (tuple, guard) in dom {
                    self.env.insert(v.id, tuple[0]);
                    let b = self.formula(body)?;
                    let part = match q {
                        Quant::All => self.circuit.implies(guard, b),
                        Quant::Some => self.circuit.and2(guard, b),
                    };
                    let decisive = match q {
                        Quant::All => part == Lit::FALSE,
                        Quant::Some => part == Lit::TRUE,
                    };
                    parts.push(part);
                    if decisive {
                        break;
                    }
                }
                match saved {
                    Some(a) => self.env.insert(v.id, a),
                    None => self.env.remove(&v.id),
                };
                match q {
                    Quant::All => self.circuit.and(parts),
                    Quant::Some => self.circuit.or(parts),
                }
            }
        })
    }

    fn subset(&mut self, a: &Matrix, b: &Matrix) -> Lit {
        let mut parts = Vec::with_capacity(a.len());
        for (t, &la) in a {
            let lb = b.get(t).copied().unwrap_or(Lit::FALSE);
            parts.push(self.circuit.implies(la, lb));
        }
        self.circuit.and(parts)
    }

    pub fn expr(&mut self, e: &FoExpr) -> Result<Matrix, GroundError> {
        Ok(match e {
            FoExpr::Sig(s) => self.u.sig_atoms[s.0]
                .iter()
                .map(|&a| (vec![a], self.presence[a as usize]))
                .collect(),
            FoExpr::State => self.u.state_atoms.iter().map(|&a| (vec![a], Lit::TRUE)).collect(),
            FoExpr::First => [(vec![self.u.state(self.t.first())], Lit::TRUE)].into(),
            FoExpr::Last => [(vec![self.u.state(self.t.last())], Lit::TRUE)].into(),
            FoExpr::Var(v) => {
                let a = *self
                    .env
                    .get(&v.id)
                    .ok_or_else(|| GroundError::Unbound(v.name.to_string()))?;
                [(vec![a], Lit::TRUE)].into()
            }
            FoExpr::None(_) => Matrix::new(),
            FoExpr::Field { id, state, arity } => {
                let m = match state {
                    None => self.statics[id].clone(),
                    Some(idiom) => {
                        let mut out = Matrix::new();
                        for (i, m) in self.mutables[id].iter().enumerate() {
                            let s = self.u.state(i);
                            for (t, &l) in m {
                                let mut t2 = t.clone();
                                match idiom {
                                    crate::embed::Idiom::Local => t2.push(s),
                                    crate::embed::Idiom::Global => t2.insert(0, s),
                                }
                                out.insert(t2, l);
                            }
                        }
                        out
                    }
                };
                if m.keys().next().is_some_and(|t| t.len() != *arity) {
                    return Err(GroundError::Arity(self.spec.field(*id).name.clone()));
                }
                m
            }
            FoExpr::Next => self.next_matrix(),
            FoExpr::Closure(a) if **a == FoExpr::Next => self.next_closure(),
            FoExpr::RClosure(a) if **a == FoExpr::Next => {
                let c = self.next_closure();
                let id = self.iden();
                self.union(&c, &id)
            }
            FoExpr::Join(a, b) => {
                let (ma, mb) = (self.expr(a)?, self.expr(b)?);
                if a.arity() + b.arity() < 3 {
                    return Err(GroundError::Arity("join".into()));
                }
                self.join(&ma, &mb)
            }
            FoExpr::Union(a, b) => {
                let (ma, mb) = (self.expr(a)?, self.expr(b)?);
                self.union(&ma, &mb)
            }
            FoExpr::Inter(a, b) => {
                let (ma, mb) = (self.expr(a)?, self.expr(b)?);
                let mut out = Matrix::new();
                for (t, &la) in &ma {
                    if let Some(&lb) = mb.get(t) {
                        let l = self.circuit.and2(la, lb);
                        if l != Lit::FALSE {
                            out.insert(t.clone(), l);
                        }
                    }
                }
                out
            }
            FoExpr::Diff(a, b) => {
                let (ma, mb) = (self.expr(a)?, self.expr(b)?);
                let mut out = Matrix::new();
                for (t, &la) in &ma {
                    let lb = mb.get(t).copied().unwrap_or(Lit::FALSE);
                    let l = self.circuit.and2(la, !lb);
                    if l != Lit::FALSE {
                        out.insert(t.clone(), l);
                    }
                }
                out
            }
            FoExpr::Product(a, b) => {
                let (ma, mb) = (self.expr(a)?, self.expr(b)?);
                let mut out = Matrix::new();
                for (ta, &la) in &ma {
                    for (tb, &lb) in &mb {
                        let l = self.circuit.and2(la, lb);
                        if l != Lit::FALSE {
                            let mut t = ta.clone();
                            t.extend(tb);
                            out.insert(t, l);
                        }
                    }
                }
                out
            }
            FoExpr::Closure(a) => {
                if a.arity() != 2 {
                    return Err(GroundError::Arity("closure".into()));
                }
                let m = self.expr(a)?;
                self.closure(&m)
            }
            FoExpr::RClosure(a) => {
                if a.arity() != 2 {
                    return Err(GroundError::Arity("closure".into()));
                }
                let m = self.expr(a)?;
                let c = self.closure(&m);
                let id = self.iden();
                self.union(&c, &id)
            }
        })
    }

    fn union(&mut self, a: &Matrix, b: &Matrix) -> Matrix {
        let mut out = a.clone();
        for (t, &lb) in b {
            let l = match out.get(t) {
                Some(&la) => self.circuit.or2(la, lb),
                None => lb,
            };
            out.insert(t.clone(), l);
        }
        out
    }

    pub fn join(&mut self, a: &Matrix, b: &Matrix) -> Matrix {
        let mut by_first: HashMap<AtomId, Vec<(&[AtomId], Lit)>> = HashMap::new();
        for (t, &l) in b {
            by_first.entry(t[0]).or_default().push((&t[1..], l));
        }
        let mut acc: BTreeMap<Vec<AtomId>, Vec<Lit>> = BTreeMap::new();
        for (ta, &la) in a {
            let (last, head) = ta.split_last().expect("non-empty tuple");
            if let Some(rows) = by_first.get(last) {
                for &(rest, lb) in rows {
                    let l = self.circuit.and2(la, lb);
                    if l == Lit::FALSE {
                        continue;
                    }
                    let mut t = head.to_vec();
                    t.extend_from_slice(rest);
                    acc.entry(t).or_default().push(l);
                }
            }
        }
        acc.into_iter()
            .map(|(t, ls)| (t, self.circuit.or(ls)))
            .filter(|(_, l)| *l != Lit::FALSE)
            .collect()
    }

    /// Identity over every present atom.
    fn iden(&mut self) -> Matrix {
        if let Some(m) = self.cache.get("iden") {
            return m.clone();
        }
        let m: Matrix = (0..self.u.atoms.len() as AtomId)
            .map(|a| (vec![a, a], self.presence[a as usize]))
            .collect();
        self.cache.insert("iden", m.clone());
        m
    }

    fn next_matrix(&mut self) -> Matrix {
        let k = self.t.k;
        let mut m = Matrix::new();
        for i in 0..k.saturating_sub(1) {
            m.insert(vec![self.u.state(i), self.u.state(i + 1)], Lit::TRUE);
        }
        for (l, &lit) in self.loops.iter().enumerate() {
            m.insert(vec![self.u.state(k - 1), self.u.state(l)], lit);
        }
        m
    }

    /// `^next` in closed form: `(i, j)` holds when `j > i`, or when the loop
    /// target is at or before `j`.
    fn next_closure(&mut self) -> Matrix {
        if let Some(m) = self.cache.get("^next") {
            return m.clone();
        }
        let k = self.t.k;
        let mut upto = Vec::with_capacity(k);
        let mut acc = Lit::FALSE;
        for j in 0..k {
            if let Some(&l) = self.loops.get(j) {
                acc = self.circuit.or2(acc, l);
            }
            upto.push(acc);
        }
        let mut m = Matrix::new();
        for i in 0..k {
            for (j, &reach_back) in upto.iter().enumerate() {
                let l = if j > i { Lit::TRUE } else { reach_back };
                if l != Lit::FALSE {
                    m.insert(vec![self.u.state(i), self.u.state(j)], l);
                }
            }
        }
        self.cache.insert("^next", m.clone());
        m
    }

    /// Transitive closure by iterative squaring: after `r` rounds every path
    /// of length up to `2^r` is covered.
    pub fn closure(&mut self, r: &Matrix) -> Matrix {
        let mut atoms: Vec<AtomId> = r.keys().flatten().copied().collect();
        atoms.sort_unstable();
        atoms.dedup();
        let n = atoms.len();
        let rounds = if n <= 1 { 0 } else { (n - 1).ilog2() as usize + 1 };
        let mut cur = r.clone();
        for _ in 0..rounds {
            let sq = self.join(&cur, &cur);
            cur = self.union(&cur, &sq);
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{axiomatize_trace, EmbedOptions, Embedder};
    use crate::lang::load_spec;
    use crate::sat::{solve, SolveResult};
    use crate::spec::Scope;

    fn spec() -> Spec {
        load_spec(
            "sig P { pifp : set P }
             sig M {}
             sig C { var messages : set M }",
        )
        .unwrap()
    }

    #[test]
    fn closed_form_variable_counts() {
        let s = spec();
        let scopes = [Scope::exactly(2), Scope::exactly(2), Scope::exactly(1)];
        let u = build_universe(&s, &scopes, 3).unwrap();
        let g = ground(&s, &u, axiomatize_trace(3), &FoFormula::True).unwrap();
        // pifp: 2x2, messages: 1x2x3, loops: 3
        assert_eq!(g.vars.fact_count(), 4 + 6);
        assert_eq!(g.vars.len(), 4 + 6 + 3);
    }

    #[test]
    fn successor_of_single_state_is_the_self_loop() {
        let s = spec();
        let scopes = [Scope::exactly(1); 3];
        let u = build_universe(&s, &scopes, 1).unwrap();
        let t = axiomatize_trace(1);
        let mut g = Grounder::new(&s, &u, t);
        let f = FoFormula::Card(CardOp::Some, FoExpr::join(FoExpr::First, FoExpr::Next));
        let lit = g.formula(&f).unwrap();
        assert_eq!(lit, g.loop_lits()[0]);
        let inf = g.formula(&FoFormula::Infinite).unwrap();
        assert_eq!(inf, g.loop_lits()[0]);
    }

    #[test]
    fn infinite_is_disjunction_of_loops() {
        let s = spec();
        let scopes = [Scope::exactly(1); 3];
        let u = build_universe(&s, &scopes, 3).unwrap();
        let mut g = Grounder::new(&s, &u, axiomatize_trace(3));
        let inf = g.formula(&FoFormula::Infinite).unwrap();
        let loops = g.loop_lits().to_vec();
        assert_eq!(inf, g.circuit.or(loops));
    }

    #[test]
    fn lone_over_two_candidates() {
        let s = load_spec("sig C {} sig P { port : one C }").unwrap();
        let scopes = [Scope::exactly(1), Scope::exactly(2)];
        let u = build_universe(&s, &scopes, 1).unwrap();
        let mut g = Grounder::new(&s, &u, axiomatize_trace(1));
        let mut e = Embedder::new(&s, EmbedOptions::default());
        let f = load_spec("sig C {} sig P { port : one C } fact L { all c : C | lone port.c }")
            .unwrap()
            .facts[0]
            .formula
            .clone();
        let fo = e.translate_positive(&f);
        let lit = g.formula(&fo).unwrap();
        let p0 = g.circuit.input(1);
        let p1 = g.circuit.input(2);
        let pair = !g.circuit.and2(p0, p1);
        assert_eq!(lit, pair);
    }

    #[test]
    fn satisfiable_query_round_trip() {
        let s = spec();
        let scopes = [Scope::upto(2), Scope::upto(2), Scope::upto(1)];
        let u = build_universe(&s, &scopes, 2).unwrap();
        let mut e = Embedder::new(&s, EmbedOptions::default());
        let f = load_spec(
            "sig P { pifp : set P } sig M {} sig C { var messages : set M }
             assert A { G (some messages) }",
        )
        .unwrap()
        .asserts[0]
            .formula
            .clone();
        let fo = e.translate_positive(&f);
        let g = ground(&s, &u, axiomatize_trace(2), &fo).unwrap();
        assert!(matches!(solve(&g.cnf), SolveResult::Sat(_)));
    }
}
