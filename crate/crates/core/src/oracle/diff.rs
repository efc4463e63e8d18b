//! Pipeline against oracle on one command and bound: the SAT verdict must
//! match exhaustive enumeration, and every enumerated trace feeds the
//! fidelity comparison between the embedding and the LTL semantics.

use std::ops::ControlFlow;

use super::enumerate::{for_each_trace, EnumOptions, EnumerateError};
use super::report::FidelityReport;
use super::{compare_fidelity, eval_fo};
use crate::embed::Embedder;
use crate::engine::{build_query, solve_scope, EngineError, EngineOptions};
use crate::ground::{command_scopes, universe::UniverseError};
use crate::spec::{Command, CommandKind, Formula, Spec};

#[derive(Debug, thiserror::Error)]
pub enum DiffError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

#[derive(Debug, Clone)]
pub struct DiffOutcome {
    pub k: usize,
    /// `None` when the solver gave up.
    pub pipeline: Option<bool>,
    pub oracle: bool,
    /// Traces satisfying facts, transitions and multiplicities.
    pub traces: usize,
    pub fidelity: FidelityReport,
}

impl DiffOutcome {
    pub fn agrees(&self) -> bool {
        self.pipeline == Some(self.oracle)
    }
}

/// The formula whose models the command searches for.
pub fn searched_formula(cmd: &Command) -> Formula {
    match cmd.kind {
        CommandKind::Check => Formula::not(cmd.formula.clone()),
        CommandKind::Run => cmd.formula.clone(),
    }
}

/// Runs the pipeline at exactly `k` states and enumerates the same bound.
/// With `fidelity` off the enumeration stops at the first witness. The
/// fidelity comparison is skipped under finite-trace semantics, where `G`
/// deliberately departs from the LTL reading.
pub fn diff_scope(
    spec: &Spec,
    cmd: &Command,
    k: usize,
    opts: &EngineOptions,
    cap: u128,
    fidelity: bool,
) -> Result<DiffOutcome, DiffError> {
    let query = build_query(spec, cmd, opts.embed)?;
    let pipeline = match solve_scope(spec, cmd, &query, k, opts) {
        Ok(out) => out.unknown.is_none().then_some(out.trace.is_some()),
        // scopes that make a field unsatisfiable have no instances at all
        Err(EngineError::Universe(UniverseError::EmptyTarget { .. })) => Some(false),
        Err(e) => return Err(e.into()),
    };
    let target = searched_formula(cmd);
    let target_fo = Embedder::new(spec, opts.embed).translate_positive(&target);
    let eopts = EnumOptions { embed: opts.embed, cap };
    let mut oracle = false;
    let mut traces = 0;
    let mut report = FidelityReport::default();
    let fidelity = fidelity && !opts.embed.finite_traces;
    for_each_trace(spec, &command_scopes(spec, cmd), k, eopts, |t| {
        traces += 1;
        if eval_fo(&target_fo, t) {
            oracle = true;
        }
        if fidelity {
            compare_fidelity(spec, &target, t, &mut report);
            ControlFlow::Continue(())
        } else if oracle {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(DiffOutcome {
        k,
        pipeline,
        oracle,
        traces,
        fidelity: report,
    })
}
