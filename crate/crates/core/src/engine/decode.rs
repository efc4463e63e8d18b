//! Turning a satisfying assignment back into a trace.

use crate::ground::{Grounding, VarMeaning};
use crate::oracle::TraceInstance;
use crate::sat::Model;
use crate::spec::Spec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("model selects {0} back loops")]
    LoopNotOneHot(usize),
    #[error("model has {found} variables, grounding needs {needed}")]
    ShortModel { found: u32, needed: u32 },
}

/// Inverts the variable map: true tuple variables become tuples, presence
/// variables decide which optional atoms exist, and the loop selector gives
/// the back loop.
pub fn decode_model(spec: &Spec, m: &Model, g: &Grounding) -> Result<TraceInstance, DecodeError> {
    let needed = g.vars.len() as u32;
    if m.num_vars() < needed {
        return Err(DecodeError::ShortModel {
            found: m.num_vars(),
            needed,
        });
    }
    let mut t = TraceInstance::empty(spec, g.universe.clone(), None);
    let mut loops = Vec::new();
    for (v, meaning) in g.vars.iter() {
        let on = m.value(v);
        match meaning {
            VarMeaning::Fact { field, state, tuple } => {
                if on {
                    t.value_mut(*field, state.unwrap_or(0)).insert(tuple.clone());
                }
            }
            VarMeaning::Present(a) => t.present[*a as usize] = on,
            VarMeaning::Loop(l) => {
                if on {
                    loops.push(*l);
                }
            }
        }
    }
    if loops.len() > 1 {
        return Err(DecodeError::LoopNotOneHot(loops.len()));
    }
    t.loop_to = loops.first().copied();
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{axiomatize_trace, FoFormula};
    use crate::ground::{build_universe, ground};
    use crate::lang::load_spec;
    use crate::spec::Scope;

    fn grounding(k: usize) -> (Spec, Grounding) {
        let spec = load_spec("sig A { var f : set A }").unwrap();
        let u = build_universe(&spec, &[Scope::exactly(1)], k).unwrap();
        let g = ground(&spec, &u, axiomatize_trace(k), &FoFormula::True).unwrap();
        (spec, g)
    }

    #[test]
    fn all_false_is_an_empty_finite_trace() {
        let (spec, g) = grounding(2);
        let m = Model::new(vec![false; g.cnf.num_vars as usize + 1]);
        let t = decode_model(&spec, &m, &g).unwrap();
        assert_eq!(t.loop_to, None);
        assert!(t.relations.iter().flatten().all(|r| r.is_empty()));
    }

    #[test]
    fn loop_selector() {
        let (spec, g) = grounding(2);
        let mut vals = vec![false; g.cnf.num_vars as usize + 1];
        vals[g.vars.var(&VarMeaning::Loop(0)).unwrap() as usize] = true;
        let t = decode_model(&spec, &Model::new(vals.clone()), &g).unwrap();
        assert_eq!(t.loop_to, Some(0));
        vals[g.vars.var(&VarMeaning::Loop(1)).unwrap() as usize] = true;
        assert_eq!(
            decode_model(&spec, &Model::new(vals), &g),
            Err(DecodeError::LoopNotOneHot(2))
        );
    }
}
