//! Alloy source for the trace module and for a spec whose temporal formulas
//! have been embedded over explicit states.

use std::fmt::Write;

use crate::embed::fo::FoPrinter;
use crate::embed::{EmbedOptions, Embedder, FoFormula, Idiom};
use crate::ground::field_multiplicity;
use crate::spec::{Command, CommandKind, FieldId, Spec, STATE_SIG};

/// Names the exported text defines itself.
pub const TRACE_NAMES: &[&str] = &["State", "first", "last", "next", "infinite", "finite", "TraceLoop", "ord"];

/// Alloy reserved words (including the temporal ones of recent versions).
pub const ALLOY_KEYWORDS: &[&str] = &[
    "abstract", "after", "all", "always", "and", "as", "assert", "before", "but", "check", "disj",
    "else", "enabled", "event", "eventually", "exactly", "expect", "extends", "fact", "for", "fun",
    "historically", "iden", "iff", "implies", "in", "Int", "int", "let", "lone", "module", "no",
    "none", "not", "once", "one", "open", "or", "pred", "private", "releases", "run", "seq", "set",
    "sig", "since", "some", "steps", "String", "sum", "this", "triggered", "univ", "until", "var",
];

/// Appends `_` to names that would collide with Alloy keywords or with the
/// names of the trace module.
pub fn escape_ident(name: &str) -> String {
    if ALLOY_KEYWORDS.contains(&name) || TRACE_NAMES.contains(&name) {
        format!("{name}_")
    } else {
        name.to_string()
    }
}

/// The trace module: `util/ordering` plus an optional back edge from the
/// last state.
pub fn emit_trace_module() -> String {
    "\
module trace[exactly elem]

open util/ordering[elem] as ord

-- Target of the back loop from the last element, if there is one.
one sig TraceLoop {
  target : lone elem
}

fun first : one elem { ord/first }

fun last : one elem { ord/last }

-- The order relation extended with at most one back edge from last.
fun next : elem -> elem { ord/next + last -> TraceLoop.target }

-- Holds when the prefix loops back, so it stands for an infinite trace.
pred infinite { some TraceLoop.target }

pred finite { no TraceLoop.target }
"
    .to_string()
}

/// The spec as an Alloy module that opens `trace[State]`. Mutable fields get
/// an explicit State column (last in the local idiom, first in the global
/// one, where they move into `sig State`).
pub fn emit_alloy_spec(spec: &Spec, module: &str, opts: EmbedOptions) -> String {
    let ident = |n: &str| escape_ident(n);
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "module {}\n", escape_ident(module)).unwrap();
    writeln!(w, "open trace[{STATE_SIG}]\n").unwrap();

    let global: Vec<FieldId> = match opts.idiom {
        Idiom::Global => spec.mutable_fields().collect(),
        Idiom::Local => Vec::new(),
    };
    if global.is_empty() {
        writeln!(w, "sig {STATE_SIG} {{}}").unwrap();
    } else {
        let decls: Vec<String> = global
            .iter()
            .map(|&id| {
                let f = spec.field(id);
                let cols: Vec<String> = f.column_sigs().iter().map(|c| ident(&spec.sig(*c).name)).collect();
                format!("{} : {}", ident(&f.name), cols.join(" -> "))
            })
            .collect();
        writeln!(w, "sig {STATE_SIG} {{\n  {}\n}}", decls.join(",\n  ")).unwrap();
    }
    for sig in &spec.sigs {
        let decls: Vec<String> = sig
            .fields
            .iter()
            .filter(|id| !global.contains(id))
            .map(|&id| field_decl(spec, id))
            .collect();
        if decls.is_empty() {
            writeln!(w, "sig {} {{}}", ident(&sig.name)).unwrap();
        } else {
            writeln!(w, "sig {} {{\n  {}\n}}", ident(&sig.name), decls.join(",\n  ")).unwrap();
        }
    }

    let mut e = Embedder::new(spec, opts);
    let show = |f: &FoFormula| FoPrinter::with_idents(spec, &ident).formula(f);

    let mults: Vec<FoFormula> = spec
        .mutable_fields()
        .filter_map(|id| field_multiplicity(spec, &mut e, id))
        .collect();
    if !mults.is_empty() {
        writeln!(w, "\n-- multiplicities of mutable fields, per state").unwrap();
        writeln!(w, "fact Multiplicities {{").unwrap();
        for m in &mults {
            writeln!(w, "  {}", show(m)).unwrap();
        }
        writeln!(w, "}}").unwrap();
    }
    for fact in &spec.facts {
        let f = e.translate_positive(&fact.formula);
        writeln!(w, "\nfact {} {{\n  {}\n}}", ident(&fact.name), show(&f)).unwrap();
    }
    if let Some(t) = &spec.trans {
        let f = e.desugar_trans(t).expect("resolved transition constraints embed");
        writeln!(w, "\nfact Transitions {{\n  {}\n}}", show(&f)).unwrap();
    }
    for a in &spec.asserts {
        let f = e.translate_check(&a.formula);
        writeln!(w, "\nassert {} {{\n  {}\n}}", ident(&a.name), show(&f)).unwrap();
    }
    for p in &spec.preds {
        if !spec.commands.iter().any(|c| c.kind == CommandKind::Run && c.target == p.name) {
            continue;
        }
        let f = e.translate_positive(&p.closed_body());
        writeln!(w, "\npred {} {{\n  {}\n}}", ident(&p.name), show(&f)).unwrap();
    }
    for cmd in &spec.commands {
        let target = if is_named(spec, cmd) {
            ident(&cmd.target)
        } else {
            let f = match cmd.kind {
                CommandKind::Check => e.translate_check(&cmd.formula),
                CommandKind::Run => e.translate_positive(&cmd.formula),
            };
            format!("{{ {} }}", show(&f))
        };
        writeln!(w).unwrap();
        for k in 1..=cmd.max_state.max(1) {
            writeln!(w, "{} {} for {}", cmd.kind.keyword(), target, scope_list(spec, cmd, k)).unwrap();
        }
    }
    out
}

fn field_decl(spec: &Spec, id: FieldId) -> String {
    let f = spec.field(id);
    let names: Vec<String> = f.columns.iter().map(|c| escape_ident(&spec.sig(*c).name)).collect();
    let (last, owners) = names.split_last().expect("fields have a target column");
    let mut ty = String::new();
    for o in owners {
        write!(ty, "{o} -> ").unwrap();
    }
    if f.mutable {
        // the multiplicity is a per-state fact instead
        write!(ty, "{last} -> {STATE_SIG}").unwrap();
        format!("{} : {}", escape_ident(&f.name), ty)
    } else {
        format!("{} : {}{} {}", escape_ident(&f.name), ty, f.mult.keyword(), last)
    }
}

fn is_named(spec: &Spec, cmd: &Command) -> bool {
    match cmd.kind {
        CommandKind::Check => spec.assertion(&cmd.target).is_some(),
        CommandKind::Run => spec.pred(&cmd.target).is_some(),
    }
}

fn scope_list(spec: &Spec, cmd: &Command, k: u32) -> String {
    let mut items: Vec<String> = (0..spec.sigs.len())
        .map(|i| {
            let s = cmd.scope_of(crate::spec::SigId(i));
            format!(
                "{}{} {}",
                if s.exact { "exactly " } else { "" },
                s.bound,
                escape_ident(&spec.sigs[i].name)
            )
        })
        .collect();
    items.push(format!("exactly {k} {STATE_SIG}"));
    items.join(", ")
}
