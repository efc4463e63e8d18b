//! Random specs, formulas and traces for the differential suites.
//!
//! Specs are generated as source text and loaded through the parser, so a
//! failing case can be replayed from its printed text alone.

use rand::seq::SliceRandom;
use rand::Rng;

use super::enumerate::{candidate_count, EnumOptions};
use super::instance::{Relation, TraceInstance};
use crate::ground::{build_universe_unchecked, universe, AtomId};
use crate::lang::load_spec;
use crate::spec::{Command, CommandKind, FieldId, Formula, Scope, SigId, Spec};

/// Name of the predicate holding the generated property.
pub const GOAL: &str = "Goal";

#[derive(Debug, Clone, Copy)]
pub struct SpecShape {
    /// Nesting depth of the goal formula.
    pub depth: u32,
    /// Largest raw candidate count tolerated; scopes and `k` shrink until
    /// the case fits.
    pub budget: u128,
    pub max_scope: u32,
    pub max_k: usize,
    pub facts: bool,
    pub trans: bool,
}

impl Default for SpecShape {
    fn default() -> Self {
        SpecShape {
            depth: 3,
            budget: 1 << 13,
            max_scope: 3,
            max_k: 4,
            facts: true,
            trans: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomCase {
    pub source: String,
    pub spec: Spec,
    pub scopes: Vec<Scope>,
    pub k: usize,
}

impl RandomCase {
    pub fn goal(&self) -> Formula {
        self.spec
            .pred(GOAL)
            .expect("generated specs declare the goal")
            .closed_body()
    }

    /// A command over the goal with this case's scopes and exactly `k`
    /// states as its largest bound.
    pub fn command(&self, kind: CommandKind) -> Command {
        Command {
            kind,
            target: GOAL.to_string(),
            formula: self.goal(),
            scopes: self.scopes.iter().enumerate().map(|(i, s)| (SigId(i), *s)).collect(),
            max_state: self.k as u32,
        }
    }
}

#[derive(Debug, Clone)]
struct FieldDecl {
    name: String,
    owner: usize,
    target: usize,
    mult: &'static str,
    mutable: bool,
}

struct Gen<'r, R> {
    rng: &'r mut R,
    sigs: Vec<String>,
    fields: Vec<FieldDecl>,
    vars: Vec<(String, usize)>,
    fresh: usize,
}

/// A random spec with a `Goal` predicate, plus bounds that fit the budget.
pub fn random_case<R: Rng>(rng: &mut R, shape: SpecShape, opts: EnumOptions) -> RandomCase {
    loop {
        let source = random_spec_source(rng, shape);
        let spec = match load_spec(&source) {
            Ok(s) => s,
            Err(e) => panic!("generated spec does not load: {e}\n{source}"),
        };
        let mut scopes: Vec<Scope> = spec
            .sigs
            .iter()
            .map(|_| {
                let bound = rng.gen_range(1..=shape.max_scope);
                if rng.gen_bool(0.5) {
                    Scope::exactly(bound)
                } else {
                    Scope::upto(bound)
                }
            })
            .collect();
        let mut k = rng.gen_range(1..=shape.max_k);
        while candidate_count(&spec, &scopes, k, opts.axioms(k)) > shape.budget {
            let (i, largest) = scopes
                .iter()
                .enumerate()
                .max_by_key(|(_, s)| s.bound)
                .map(|(i, s)| (i, s.bound))
                .expect("at least one signature");
            if largest > 1 && (k == 1 || rng.gen_bool(0.5)) {
                scopes[i].bound -= 1;
            } else if k > 1 {
                k -= 1;
            } else {
                break;
            }
        }
        if candidate_count(&spec, &scopes, k, opts.axioms(k)) <= shape.budget {
            return RandomCase {
                source,
                spec,
                scopes,
                k,
            };
        }
    }
}

pub fn random_spec_source<R: Rng>(rng: &mut R, shape: SpecShape) -> String {
    let nsigs = rng.gen_range(1..=2);
    let sigs: Vec<String> = ["A", "B"][..nsigs].iter().map(|s| s.to_string()).collect();
    let nfields = rng.gen_range(1..=3);
    let fields: Vec<FieldDecl> = (0..nfields)
        .map(|i| FieldDecl {
            name: format!("f{i}"),
            owner: rng.gen_range(0..nsigs),
            target: rng.gen_range(0..nsigs),
            mult: ["set", "set", "lone", "one", "some"][rng.gen_range(0..5)],
            mutable: rng.gen_bool(0.6),
        })
        .collect();
    let mut g = Gen {
        rng,
        sigs,
        fields,
        vars: Vec::new(),
        fresh: 0,
    };
    let mut out = String::new();
    for (si, name) in g.sigs.iter().enumerate() {
        let decls: Vec<String> = g
            .fields
            .iter()
            .filter(|f| f.owner == si)
            .map(|f| {
                format!(
                    "{}{} : {} {}",
                    if f.mutable { "var " } else { "" },
                    f.name,
                    f.mult,
                    g.sigs[f.target]
                )
            })
            .collect();
        out.push_str(&format!("sig {name} {{ {} }}\n", decls.join(", ")));
    }
    if shape.facts && g.rng.gen_bool(0.3) {
        let f = g.formula(2, false);
        out.push_str(&format!("fact Init {{ {f} }}\n"));
    }
    if shape.trans && g.fields.iter().any(|f| f.mutable) && g.rng.gen_bool(0.5) {
        let t = g.state_formula(2, true);
        out.push_str(&format!("trans {{ {t} }}\n"));
    }
    let goal = g.formula(shape.depth, false);
    out.push_str(&format!("pred {GOAL} {{ {goal} }}\n"));
    out
}

impl<R: Rng> Gen<'_, R> {
    fn formula(&mut self, depth: u32, primes: bool) -> String {
        if depth == 0 {
            return self.atom(primes);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..14) {
            0 => self.atom(primes),
            1 => format!("not ({})", self.formula(d, primes)),
            2 => format!("({} and {})", self.formula(d, primes), self.formula(d, primes)),
            3 => format!("({} or {})", self.formula(d, primes), self.formula(d, primes)),
            4 => format!("({} implies {})", self.formula(d, primes), self.formula(d, primes)),
            5 => format!("X ({})", self.formula(d, primes)),
            6 | 7 => format!("G ({})", self.formula(d, primes)),
            8 | 9 => format!("F ({})", self.formula(d, primes)),
            10 => format!("({} U {})", self.formula(d, primes), self.formula(d, primes)),
            11 => format!("({} R {})", self.formula(d, primes), self.formula(d, primes)),
            _ => self.quant(d, primes, true),
        }
    }

    /// Formulas without temporal operators, for the transition constraint.
    fn state_formula(&mut self, depth: u32, primes: bool) -> String {
        if depth == 0 {
            return self.atom(primes);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..6) {
            0 | 1 => self.atom(primes),
            2 => format!("not ({})", self.state_formula(d, primes)),
            3 => format!("({} and {})", self.state_formula(d, primes), self.state_formula(d, primes)),
            4 => format!("({} or {})", self.state_formula(d, primes), self.state_formula(d, primes)),
            _ => self.quant(d, primes, false),
        }
    }

    fn quant(&mut self, depth: u32, primes: bool, temporal: bool) -> String {
        let sig = self.rng.gen_range(0..self.sigs.len());
        self.fresh += 1;
        let v = format!("x{}", self.fresh);
        let q = if self.rng.gen_bool(0.5) { "all" } else { "some" };
        self.vars.push((v.clone(), sig));
        let body = if temporal {
            self.formula(depth, primes)
        } else {
            self.state_formula(depth, primes)
        };
        self.vars.pop();
        format!("({q} {v} : {} | {body})", self.sigs[sig])
    }

    fn atom(&mut self, primes: bool) -> String {
        match self.rng.gen_range(0..7) {
            0 => format!("some {}", self.unary(2, primes)),
            1 => format!("no {}", self.unary(2, primes)),
            2 => format!("lone {}", self.unary(2, primes)),
            3 => format!("one {}", self.unary(2, primes)),
            4 => format!("{} in {}", self.unary(2, primes), self.unary(2, primes)),
            5 => {
                let (a, b) = (self.binary(primes), self.binary(primes));
                format!("{a} in {b}")
            }
            _ => {
                let (a, b) = (self.binary(primes), self.binary(primes));
                format!("{a} = {b}")
            }
        }
    }

    fn field_ref(&mut self, f: usize, primes: bool) -> String {
        let fd = &self.fields[f];
        if primes && fd.mutable && self.rng.gen_bool(0.5) {
            format!("{}'", fd.name)
        } else {
            fd.name.clone()
        }
    }

    fn binary(&mut self, primes: bool) -> String {
        let f = self.rng.gen_range(0..self.fields.len());
        let base = self.field_ref(f, primes);
        match self.rng.gen_range(0..5) {
            0 if self.fields[f].owner == self.fields[f].target => format!("^{base}"),
            1 => {
                let g = self.rng.gen_range(0..self.fields.len());
                let other = self.field_ref(g, primes);
                format!("({base} + {other})")
            }
            _ => base,
        }
    }

    fn unary(&mut self, depth: u32, primes: bool) -> String {
        let leaf = |g: &mut Self| -> String {
            if !g.vars.is_empty() && g.rng.gen_bool(0.5) {
                g.vars.choose(g.rng).expect("nonempty").0.clone()
            } else {
                g.sigs.choose(g.rng).expect("nonempty").clone()
            }
        };
        if depth == 0 {
            return leaf(self);
        }
        match self.rng.gen_range(0..8) {
            0 | 1 => leaf(self),
            2 | 3 => {
                let e = self.unary(depth - 1, primes);
                let f = self.rng.gen_range(0..self.fields.len());
                format!("{e}.{}", self.field_ref(f, primes))
            }
            4 => {
                let f = self.rng.gen_range(0..self.fields.len());
                let e = self.unary(depth - 1, primes);
                format!("{}.{e}", self.field_ref(f, primes))
            }
            5 => {
                let e = self.unary(depth - 1, primes);
                let f = self.rng.gen_range(0..self.fields.len());
                format!("{e}.*{}", self.field_ref(f, primes))
            }
            6 => format!("({} + {})", self.unary(depth - 1, primes), self.unary(depth - 1, primes)),
            _ => {
                let op = ["&", "-"].choose(self.rng).expect("nonempty");
                format!("({} {op} {})", self.unary(depth - 1, primes), self.unary(depth - 1, primes))
            }
        }
    }
}

/// A trace with arbitrary relation values (multiplicities ignored) and
/// random presence. `lasso` forces a back loop.
pub fn random_trace<R: Rng>(rng: &mut R, spec: &Spec, scopes: &[Scope], k: usize, lasso: bool) -> TraceInstance {
    let u = build_universe_unchecked(spec, scopes, k);
    let loop_to = if lasso || rng.gen_bool(0.5) {
        Some(rng.gen_range(0..k))
    } else {
        None
    };
    let mut t = TraceInstance::empty(spec, u, loop_to);
    for (s, pool) in t.universe.sig_atoms.clone().iter().enumerate() {
        let n = if scopes[s].exact {
            pool.len()
        } else {
            rng.gen_range(0..=pool.len())
        };
        for (j, &a) in pool.iter().enumerate() {
            t.present[a as usize] = j < n;
        }
    }
    for fi in 0..spec.fields.len() {
        let fid = FieldId(fi);
        let pools: Vec<Vec<AtomId>> = t
            .universe
            .column_pools(spec, fid)
            .iter()
            .map(|p| p.iter().copied().filter(|&a| t.present[a as usize]).collect())
            .collect();
        let refs: Vec<&[AtomId]> = pools.iter().map(|p| p.as_slice()).collect();
        let tuples = universe::tuples(&refs);
        let copies = t.relations[fi].len();
        for i in 0..copies {
            let r: Relation = tuples.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
            *t.value_mut(fid, i) = r;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_specs_load_and_fit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shape = SpecShape::default();
        for _ in 0..200 {
            let case = random_case(&mut rng, shape, EnumOptions::default());
            assert!(case.k >= 1 && case.k <= shape.max_k);
            assert!(case.scopes.iter().all(|s| s.bound <= shape.max_scope));
            case.goal();
        }
    }

    #[test]
    fn random_lasso_traces_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = load_spec("sig A { var f : set A }").unwrap();
        for _ in 0..20 {
            let t = random_trace(&mut rng, &spec, &[Scope::upto(2)], 3, true);
            assert!(t.loop_to.is_some_and(|l| l < 3));
        }
    }
}
