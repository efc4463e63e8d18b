//! Text and JSON renderings of a verdict. Both carry the same fields in the
//! same order and neither includes timings, so reports are reproducible.

use serde::Serialize;

use super::{ScopeLog, Verdict, VerdictKind};
use crate::oracle::TraceInstance;
use crate::spec::Spec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub atoms: Vec<String>,
    pub states: Vec<Vec<FieldValue>>,
    #[serde(rename = "static")]
    pub statics: Vec<FieldValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldValue {
    pub field: String,
    pub tuples: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScopeLine {
    pub state_scope: usize,
    pub result: String,
    pub vars: u32,
    pub clauses: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub verdict: String,
    pub command: String,
    pub target: String,
    pub scope: Option<usize>,
    #[serde(rename = "loop")]
    pub loop_to: Option<usize>,
    pub reason: Option<String>,
    pub trace: Option<TraceReport>,
    pub log: Vec<ScopeLine>,
}

impl TraceReport {
    pub fn new(spec: &Spec, t: &TraceInstance) -> Self {
        let value = |fi: usize, i: usize| FieldValue {
            field: spec.fields[fi].name.clone(),
            tuples: t.relations[fi][i]
                .iter()
                .map(|tu| tu.iter().map(|&a| t.universe.name(a).to_string()).collect())
                .collect(),
        };
        TraceReport {
            atoms: t.present_atoms().map(|a| t.universe.name(a).to_string()).collect(),
            states: (0..t.k())
                .map(|i| {
                    (0..spec.fields.len())
                        .filter(|&f| spec.fields[f].mutable)
                        .map(|f| value(f, i))
                        .collect()
                })
                .collect(),
            statics: (0..spec.fields.len())
                .filter(|&f| !spec.fields[f].mutable)
                .map(|f| value(f, 0))
                .collect(),
        }
    }
}

impl VerdictReport {
    pub fn new(spec: &Spec, v: &Verdict) -> Self {
        let (verdict, scope, trace, reason) = match &v.kind {
            VerdictKind::Counterexample { trace, k } => ("counterexample", Some(*k), Some(trace), None),
            VerdictKind::Instance { trace, k } => ("instance", Some(*k), Some(trace), None),
            VerdictKind::NoInstance { max_state } => (
                match v.command {
                    crate::spec::CommandKind::Check => "no-counterexample",
                    crate::spec::CommandKind::Run => "no-instance",
                },
                Some(*max_state),
                None,
                None,
            ),
            VerdictKind::ResourceLimit { k, reason } => ("resource-limit", Some(*k), None, Some(reason.clone())),
        };
        VerdictReport {
            verdict: verdict.to_string(),
            command: v.command.keyword().to_string(),
            target: v.target.clone(),
            scope,
            loop_to: trace.and_then(|t| t.loop_to),
            reason,
            trace: trace.map(|t| TraceReport::new(spec, t)),
            log: v.log.iter().map(ScopeLine::from).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("VERDICT {}", self.verdict);
        match (&self.trace, self.scope) {
            (Some(_), Some(k)) => out.push_str(&format!(
                " scope State={k} loop={}",
                self.loop_to.map_or("none".to_string(), |l| l.to_string())
            )),
            (None, Some(k)) if self.reason.is_some() => out.push_str(&format!(" scope State={k}")),
            (None, Some(k)) => out.push_str(&format!(" up to State={k}")),
            _ => {}
        }
        out.push('\n');
        if let Some(r) = &self.reason {
            out.push_str(&format!("reason: {r}\n"));
        }
        if let Some(t) = &self.trace {
            out.push_str(&format!("atoms: {}\n", t.atoms.join(" ")));
            for (i, vals) in t.states.iter().enumerate() {
                out.push_str(&format!("state {i}: {}\n", show_values(vals)));
            }
            if !t.statics.is_empty() {
                out.push_str(&format!("static:  {}\n", show_values(&t.statics)));
            }
        }
        for l in &self.log {
            out.push_str(&format!(
                "scope State={}: {} vars={} clauses={}\n",
                l.state_scope, l.result, l.vars, l.clauses
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

impl From<&ScopeLog> for ScopeLine {
    fn from(l: &ScopeLog) -> Self {
        ScopeLine {
            state_scope: l.k,
            result: l.result.to_string(),
            vars: l.vars,
            clauses: l.clauses,
        }
    }
}

fn show_values(vals: &[FieldValue]) -> String {
    vals.iter()
        .map(|v| {
            let tuples: Vec<String> = v.tuples.iter().map(|t| t.join(" -> ")).collect();
            format!("{} = {{{}}}", v.field, tuples.join(", "))
        })
        .collect::<Vec<_>>()
        .join(", ")
}
