//! Exhaustive enumeration of the traces of a spec within fixed bounds.
//!
//! Candidates are built state by state so the transition constraint prunes
//! early. Present atoms form a prefix of each signature pool, the same
//! normalization the grounder uses, so both sides range over the same
//! instances.

use std::ops::ControlFlow;

use super::eval_fo::eval_fo;
use super::eval_ltl::eval_state_formula;
use super::instance::{Relation, TraceInstance};
use crate::embed::{axiomatize_trace, total_order, EmbedOptions, Embedder, FoFormula, TraceAxioms};
use crate::ground::{build_universe_unchecked, universe, AtomId};
use crate::spec::{FieldId, Mult, Scope, Spec};

/// Default bound on the number of raw candidates.
pub const DEFAULT_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("{count} candidate instances exceed the enumeration cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
}

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    pub embed: EmbedOptions,
    pub cap: u128,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            embed: EmbedOptions::default(),
            cap: DEFAULT_CAP,
        }
    }
}

impl EnumOptions {
    pub fn axioms(&self, k: usize) -> TraceAxioms {
        if self.embed.finite_traces {
            total_order(k)
        } else {
            axiomatize_trace(k)
        }
    }
}

/// Every trace of length `k` satisfying the facts, the transition constraint
/// and the multiplicities.
pub fn enumerate_traces(
    spec: &Spec,
    scopes: &[Scope],
    k: usize,
    opts: EnumOptions,
) -> Result<Vec<TraceInstance>, EnumerateError> {
    let mut out = Vec::new();
    for_each_trace(spec, scopes, k, opts, |t| {
        out.push(t.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Streams the traces of [`enumerate_traces`] to `visit`, which may stop the
/// enumeration early. Returns whether it was stopped.
pub fn for_each_trace(
    spec: &Spec,
    scopes: &[Scope],
    k: usize,
    opts: EnumOptions,
    mut visit: impl FnMut(&TraceInstance) -> ControlFlow<()>,
) -> Result<bool, EnumerateError> {
    let count = candidate_count(spec, scopes, k, opts.axioms(k));
    if count > opts.cap {
        return Err(EnumerateError::CapExceeded { count, cap: opts.cap });
    }
    let u = build_universe_unchecked(spec, scopes, k);
    let mut emb = Embedder::new(spec, opts.embed);
    let facts = FoFormula::conj(spec.facts.iter().map(|f| emb.translate_positive(&f.formula)));
    let mut e = Enum {
        spec,
        axioms: opts.axioms(k),
        facts,
        visit: &mut visit,
    };
    for sizes in presence_choices(spec, scopes) {
        let mut t = TraceInstance::empty(spec, u.clone(), None);
        for (s, &n) in sizes.iter().enumerate() {
            for (j, &a) in u.sig_atoms[s].iter().enumerate() {
                t.present[a as usize] = j < n;
            }
        }
        if e.statics(&mut t, 0).is_break() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Raw candidates: presence choices times relation valuations times loop
/// choices, saturating.
pub fn candidate_count(spec: &Spec, scopes: &[Scope], k: usize, axioms: TraceAxioms) -> u128 {
    let mut total: u128 = 0;
    for sizes in presence_choices(spec, scopes) {
        let mut bits: u64 = 0;
        for f in &spec.fields {
            let n: u64 = f.column_sigs().iter().map(|s| sizes[s.0] as u64).product();
        bits += if f.mutable { n * k as u64 } else { n };
        }
        let per = if bits >= 120 { u128::MAX } else { 1u128 << bits };
        total = total.saturating_add(per.saturating_mul(axioms.loop_choices().len() as u128));
    }
    total
}

/// Number of present atoms per signature: every prefix length for
/// non-exact scopes.
fn presence_choices(spec: &Spec, scopes: &[Scope]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for s in 0..spec.sigs.len() {
        let scope = scopes[s];
        let lo = if scope.exact { scope.bound } else { 0 } as usize;
        let mut next = Vec::new();
        for prefix in &out {
            for n in lo..=scope.bound as usize {
                let mut p = prefix.clone();
                p.push(n);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

struct Enum<'a, V> {
    spec: &'a Spec,
    axioms: TraceAxioms,
    facts: FoFormula,
    visit: &'a mut V,
}

impl<V: FnMut(&TraceInstance) -> ControlFlow<()>> Enum<'_, V> {
    fn statics(&mut self, t: &mut TraceInstance, from: usize) -> ControlFlow<()> {
        let next_static = (from..self.spec.fields.len()).find(|&i| !self.spec.fields[i].mutable);
        let Some(fi) = next_static else {
            let vals = self.state_valuations(t);
            return self.state(t, 0, &vals);
        };
        for r in field_values(self.spec, t, FieldId(fi)) {
            *t.value_mut(FieldId(fi), 0) = r;
            self.statics(t, fi + 1)?;
        }
        ControlFlow::Continue(())
    }

    /// Every joint valuation of the mutable fields in one state.
    fn state_valuations(&self, t: &TraceInstance) -> Vec<Vec<(FieldId, Relation)>> {
        let mut out = vec![Vec::new()];
        for fid in self.spec.mutable_fields() {
            let values = field_values(self.spec, t, fid);
            let mut next = Vec::with_capacity(out.len() * values.len());
            for partial in &out {
                for v in &values {
                    let mut p = partial.clone();
                    p.push((fid, v.clone()));
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    fn state(
        &mut self,
        t: &mut TraceInstance,
        i: usize,
        vals: &[Vec<(FieldId, Relation)>],
    ) -> ControlFlow<()> {
        let k = self.axioms.k;
        if i == k {
            return self.close(t);
        }
        for val in vals {
            for (fid, r) in val {
                *t.value_mut(*fid, i) = r.clone();
            }
            if i > 0 && !self.trans_at(t, i - 1) {
                continue;
            }
            self.state(t, i + 1, vals)?;
        }
        ControlFlow::Continue(())
    }

    fn close(&mut self, t: &mut TraceInstance) -> ControlFlow<()> {
        for lp in self.axioms.loop_choices() {
            t.loop_to = lp;
            if lp.is_some() && !self.trans_at(t, self.axioms.k - 1) {
                continue;
            }
            if eval_fo(&self.facts, t) {
                (self.visit)(t)?;
            }
        }
        t.loop_to = None;
        ControlFlow::Continue(())
    }

    fn trans_at(&self, t: &TraceInstance, i: usize) -> bool {
        match &self.spec.trans {
            Some(tr) => eval_state_formula(tr, t, i),
            None => true,
        }
    }
}

/// Values of one field over the present atoms that respect its multiplicity.
fn field_values(spec: &Spec, t: &TraceInstance, fid: FieldId) -> Vec<Relation> {
    let u = &t.universe;
    let pools: Vec<Vec<AtomId>> = u
        .column_pools(spec, fid)
        .iter()
        .map(|p| p.iter().copied().filter(|&a| t.present[a as usize]).collect())
        .collect();
    let refs: Vec<&[AtomId]> = pools.iter().map(|p| p.as_slice()).collect();
    let tuples = universe::tuples(&refs);
    let mult = spec.field(fid).mult;
    let owners = tuple_owners(&pools);
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << tuples.len()) {
        let r: Relation = tuples
            .iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .map(|(_, tu)| tu.clone())
            .collect();
        if respects(mult, &r, &owners) {
            out.push(r);
        }
    }
    out
}

fn tuple_owners(pools: &[Vec<AtomId>]) -> Vec<Vec<AtomId>> {
    let refs: Vec<&[AtomId]> = pools[..pools.len() - 1].iter().map(|p| p.as_slice()).collect();
    universe::tuples(&refs)
}

fn respects(mult: Mult, r: &Relation, owners: &[Vec<AtomId>]) -> bool {
    if mult == Mult::Set {
        return true;
    }
    owners.iter().all(|o| {
        let n = r.iter().filter(|t| t.starts_with(o)).count();
        match mult {
            Mult::One => n == 1,
            Mult::Lone => n <= 1,
            Mult::Some => n >= 1,
            Mult::Set => true,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::load_spec;

    fn scopes(spec: &Spec, s: Scope) -> Vec<Scope> {
        vec![s; spec.sigs.len()]
    }

    #[test]
    fn single_state_has_both_loop_choices() {
        let spec = load_spec("sig A { var f : set A }").unwrap();
        let ts = enumerate_traces(&spec, &scopes(&spec, Scope::exactly(1)), 1, EnumOptions::default()).unwrap();
        // f empty or full, each with loop none or 0
        assert_eq!(ts.len(), 4);
        assert_eq!(ts.iter().filter(|t| t.loop_to.is_none()).count(), 2);
    }

    #[test]
    fn one_field_over_empty_target_is_empty() {
        let spec = load_spec("sig B {} sig A { f : one B }").unwrap();
        let sc = vec![Scope::exactly(0), Scope::exactly(1)];
        let ts = enumerate_traces(&spec, &sc, 1, EnumOptions::default()).unwrap();
        assert!(ts.is_empty());
    }

    #[test]
    fn presence_is_a_prefix() {
        let spec = load_spec("sig A {}").unwrap();
        let ts = enumerate_traces(&spec, &scopes(&spec, Scope::upto(3)), 1, EnumOptions::default()).unwrap();
        // sizes 0..=3, two loop choices each
        assert_eq!(ts.len(), 8);
    }

    #[test]
    fn trans_prunes() {
        let spec = load_spec("sig A { var f : set A } trans { f' = f }").unwrap();
        let ts = enumerate_traces(&spec, &scopes(&spec, Scope::exactly(1)), 3, EnumOptions::default()).unwrap();
        // constant traces only: 2 values times 4 loop choices
        assert_eq!(ts.len(), 8);
    }

    #[test]
    fn multiplicities_filter() {
        let spec = load_spec("sig A { f : one A, var g : lone A }").unwrap();
        let ts = enumerate_traces(&spec, &scopes(&spec, Scope::exactly(2)), 1, EnumOptions::default()).unwrap();
        // f: 2^2 functions, g: 3^2 partial functions, 2 loop choices
        assert_eq!(ts.len(), 4 * 9 * 2);
    }

    #[test]
    fn cap_is_enforced() {
        let spec = load_spec("sig A { var f : set A -> A }").unwrap();
        let err = enumerate_traces(&spec, &scopes(&spec, Scope::exactly(3)), 4, EnumOptions::default()).unwrap_err();
        assert!(matches!(err, EnumerateError::CapExceeded { .. }));
    }
}
