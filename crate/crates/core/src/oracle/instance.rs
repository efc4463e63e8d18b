//! Concrete traces: relation values per state over a universe, with an
//! optional back loop.

use std::collections::BTreeSet;

use crate::embed::TraceAxioms;
use crate::ground::{AtomId, Universe};
use crate::spec::{FieldId, Spec};

pub type Relation = BTreeSet<Vec<AtomId>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceInstance {
    pub universe: Universe,
    /// Index the last state loops back to.
    pub loop_to: Option<usize>,
    /// Per atom. State atoms are always present.
    pub present: Vec<bool>,
    /// Per field: one value for immutable fields, one per state otherwise.
    pub relations: Vec<Vec<Relation>>,
}

impl TraceInstance {
    /// All relations empty, every atom present.
    pub fn empty(spec: &Spec, universe: Universe, loop_to: Option<usize>) -> Self {
        let k = universe.k();
        let relations = spec
            .fields
            .iter()
            .map(|f| vec![Relation::new(); if f.mutable { k } else { 1 }])
            .collect();
        TraceInstance {
            present: vec![true; universe.atoms.len()],
            universe,
            loop_to,
            relations,
        }
    }

    pub fn k(&self) -> usize {
        self.universe.k()
    }

    pub fn axioms(&self) -> TraceAxioms {
        TraceAxioms {
            k: self.k(),
            loops: self.loop_to.is_some(),
        }
    }

    pub fn next(&self, i: usize) -> Option<usize> {
        self.axioms().next(i, self.loop_to)
    }

    /// Value of `field` at state `i` (ignored for immutable fields).
    pub fn value(&self, field: FieldId, i: usize) -> &Relation {
        let vals = &self.relations[field.0];
        if vals.len() == 1 {
            &vals[0]
        } else {
            &vals[i]
        }
    }

    pub fn value_mut(&mut self, field: FieldId, i: usize) -> &mut Relation {
        let vals = &mut self.relations[field.0];
        if vals.len() == 1 {
            &mut vals[0]
        } else {
            &mut vals[i]
        }
    }

    /// Present atoms of a signature.
    pub fn atoms_of(&self, sig: crate::spec::SigId) -> impl Iterator<Item = AtomId> + '_ {
        self.universe.sig_atoms[sig.0]
            .iter()
            .copied()
            .filter(|&a| self.present[a as usize])
    }

    pub fn present_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.universe.atoms.len() as AtomId).filter(|&a| self.present[a as usize])
    }

    /// Compact one-line rendering, used in reports.
    pub fn summary(&self, spec: &Spec) -> String {
        let mut parts = vec![format!(
            "k={} loop={}",
            self.k(),
            self.loop_to.map_or("none".to_string(), |l| l.to_string())
        )];
        let absent: Vec<&str> = (0..self.universe.atoms.len() as AtomId)
            .filter(|&a| !self.present[a as usize])
            .map(|a| self.universe.name(a))
            .collect();
        if !absent.is_empty() {
            parts.push(format!("absent {}", absent.join(" ")));
        }
        for (i, f) in spec.fields.iter().enumerate() {
            let vals: Vec<String> = self.relations[i]
                .iter()
                .map(|r| self.show_relation(r))
                .collect();
            parts.push(format!("{}={}", f.name, vals.join("/")));
        }
        parts.join("; ")
    }

    pub fn show_relation(&self, r: &Relation) -> String {
        let tuples: Vec<String> = r
            .iter()
            .map(|t| {
                t.iter()
                    .map(|&a| self.universe.name(a))
                    .collect::<Vec<_>>()
                    .join(" -> ")
            })
            .collect();
        format!("{{{}}}", tuples.join(", "))
    }
}
