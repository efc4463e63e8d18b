//! Atom pools per signature plus the State atoms of one trace length.

use crate::spec::{Command, Mult, Scope, SigId, Spec};

pub type AtomId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    /// `None` for State atoms.
    pub sig: Option<SigId>,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    pub atoms: Vec<Atom>,
    pub sig_atoms: Vec<Vec<AtomId>>,
    pub state_atoms: Vec<AtomId>,
    /// Per signature: every atom is always present.
    pub exact: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniverseError {
    #[error("field `{field}` needs at least one `{target}` but its scope is 0")]
    EmptyTarget { field: String, target: String },
    #[error("State scope must be at least 1")]
    NoStates,
}

/// Scope of every signature of `spec` under `cmd`, indexed by signature.
pub fn command_scopes(spec: &Spec, cmd: &Command) -> Vec<Scope> {
    (0..spec.sigs.len()).map(|i| cmd.scope_of(SigId(i))).collect()
}

/// Builds the universe and rejects scopes that make a `one`/`some` field
/// unsatisfiable outright: its owner columns are exact and non-empty while
/// its target signature has scope 0.
pub fn build_universe(spec: &Spec, scopes: &[Scope], k: usize) -> Result<Universe, UniverseError> {
    if k == 0 {
        return Err(UniverseError::NoStates);
    }
    for f in &spec.fields {
        if !matches!(f.mult, Mult::One | Mult::Some) {
            continue;
        }
        let cols = f.column_sigs();
        let (target, owners) = cols.split_last().expect("fields have columns");
        let owners_forced = owners
            .iter()
            .all(|s| scopes[s.0].exact && scopes[s.0].bound > 0);
        if owners_forced && scopes[target.0].bound == 0 {
            return Err(UniverseError::EmptyTarget {
                field: f.name.clone(),
                target: spec.sig(*target).name.clone(),
            });
        }
    }
    Ok(build_universe_unchecked(spec, scopes, k))
}

/// Atom naming: `Sig$i` and `State$i`, signatures in declaration order,
/// State atoms last.
pub fn build_universe_unchecked(spec: &Spec, scopes: &[Scope], k: usize) -> Universe {
    let mut atoms = Vec::new();
    let mut sig_atoms = Vec::new();
    for (i, sig) in spec.sigs.iter().enumerate() {
        let mut ids = Vec::new();
        for j in 0..scopes[i].bound as usize {
            ids.push(atoms.len() as AtomId);
            atoms.push(Atom {
                name: format!("{}${}", sig.name, j),
                sig: Some(SigId(i)),
                index: j,
            });
        }
        sig_atoms.push(ids);
    }
    let mut state_atoms = Vec::new();
    for j in 0..k {
        state_atoms.push(atoms.len() as AtomId);
        atoms.push(Atom {
            name: format!("State${j}"),
            sig: None,
            index: j,
        });
    }
    Universe {
        atoms,
        sig_atoms,
        state_atoms,
        exact: scopes.iter().map(|s| s.exact).collect(),
    }
}

impl Universe {
    pub fn k(&self) -> usize {
        self.state_atoms.len()
    }

    pub fn name(&self, a: AtomId) -> &str {
        &self.atoms[a as usize].name
    }

    pub fn state(&self, i: usize) -> AtomId {
        self.state_atoms[i]
    }

    /// Position of a State atom in the trace.
    pub fn state_index(&self, a: AtomId) -> Option<usize> {
        let atom = &self.atoms[a as usize];
        atom.sig.is_none().then_some(atom.index)
    }

    /// Atom pool of every column of a field, owner first.
    pub fn column_pools(&self, spec: &Spec, field: crate::spec::FieldId) -> Vec<&[AtomId]> {
        spec.field(field)
            .column_sigs()
            .iter()
            .map(|s| self.sig_atoms[s.0].as_slice())
            .collect()
    }

    /// Whether atom `a` may be absent.
    pub fn is_optional(&self, a: AtomId) -> bool {
        match self.atoms[a as usize].sig {
            Some(s) => !self.exact[s.0],
            None => false,
        }
    }
}

/// Cartesian product of atom pools.
pub fn tuples(pools: &[&[AtomId]]) -> Vec<Vec<AtomId>> {
    let mut out: Vec<Vec<AtomId>> = vec![Vec::new()];
    for pool in pools {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for t in &out {
            for &a in pool.iter() {
                let mut t2 = t.clone();
                t2.push(a);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::load_spec;

    #[test]
    fn deterministic_naming() {
        let spec = load_spec("sig P {} sig M {}").unwrap();
        let u = build_universe(&spec, &[Scope::upto(2), Scope::upto(3)], 2).unwrap();
        let names: Vec<&str> = u.atoms.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["P$0", "P$1", "M$0", "M$1", "M$2", "State$0", "State$1"]);
    }

    #[test]
    fn empty_one_target_is_rejected() {
        let spec = load_spec("sig C {} sig P { port : one C }").unwrap();
        let err = build_universe(&spec, &[Scope::exactly(0), Scope::exactly(2)], 1).unwrap_err();
        assert!(matches!(err, UniverseError::EmptyTarget { .. }));
        // owners may all be absent, so the instance with no P is still fine
        assert!(build_universe(&spec, &[Scope::upto(0), Scope::upto(2)], 1).is_ok());
    }

    #[test]
    fn tuple_product() {
        assert_eq!(tuples(&[&[0, 1], &[2]]), vec![vec![0, 2], vec![1, 2]]);
        assert_eq!(tuples(&[&[0, 1], &[]]).len(), 0);
    }
}
