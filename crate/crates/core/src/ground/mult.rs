//! Field multiplicities as first-order constraints, grounded like any other
//! formula so that the oracle can re-check them.

use crate::embed::{EmbedOptions, Embedder, FoExpr, FoFormula};
use crate::spec::{CardOp, FieldId, Mult, Quant, Spec};

/// For each field whose last column is `one`, `lone` or `some`: the matching
/// cardinality test on the image of every owner tuple, per state for mutable
/// fields. `set` fields contribute nothing.
pub fn encode_multiplicities(spec: &Spec, opts: EmbedOptions) -> FoFormula {
    let mut e = Embedder::new(spec, opts);
    FoFormula::conj((0..spec.fields.len()).filter_map(|i| field_multiplicity(spec, &mut e, FieldId(i))))
}

/// The multiplicity constraint of one field, if it has one.
pub fn field_multiplicity(spec: &Spec, e: &mut Embedder, id: FieldId) -> Option<FoFormula> {
    let field = spec.field(id);
    let op = match field.mult {
        Mult::Set => return None,
        Mult::One => CardOp::One,
        Mult::Lone => CardOp::Lone,
        Mult::Some => CardOp::Some,
    };
    let cols = field.column_sigs();
    let owners = &cols[..cols.len() - 1];
    let state = field.mutable.then(|| e.fresh_state("s"));
    let mut rel = match &state {
        Some(s) => e.at_state(id, field.arity(), FoExpr::Var(s.clone())),
        None => FoExpr::Field {
            id,
            arity: field.arity(),
            state: None,
        },
    };
    let vars: Vec<_> = owners.iter().map(|_| e.fresh_state("x")).collect();
    for v in &vars {
        rel = FoExpr::join(FoExpr::Var(v.clone()), rel);
    }
    let mut f = FoFormula::Card(op, rel);
    for (v, sig) in vars.iter().zip(owners).rev() {
        f = FoFormula::quant(Quant::All, v.clone(), FoExpr::Sig(*sig), f);
    }
    if let Some(s) = state {
        f = FoFormula::quant(Quant::All, s, FoExpr::State, f);
    }
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::fo::show;
    use crate::lang::load_spec;

    #[test]
    fn one_per_owner_and_state() {
        let spec = load_spec(
            "sig L {} sig C { port : one L, var level : one L, tags : set L, r : L -> lone L }",
        )
        .unwrap();
        let f = encode_multiplicities(&spec, EmbedOptions::default());
        assert_eq!(
            show(&spec, &f),
            "(all x : C | one x.port) and (all s : State | all x_2 : C | one x_2.(level.s)) \
             and (all x_3 : C | all x_4 : L | lone x_4.(x_3.r))"
        );
    }

    #[test]
    fn set_fields_add_nothing() {
        let spec = load_spec("sig A { f : set A }").unwrap();
        assert_eq!(encode_multiplicities(&spec, EmbedOptions::default()), FoFormula::True);
    }
}
