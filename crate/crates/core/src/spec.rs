//! Resolved specifications and the temporal logic they are written in.
//!
//! Everything here is produced by [`crate::lang::resolve`]: names are bound to
//! signature/field indices, predicate calls are inlined and every relational
//! expression has a known arity.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

/// Scope applied to signatures that a command does not mention.
pub const DEFAULT_SCOPE: u32 = 3;
/// State bound used when a command does not mention `State`.
pub const DEFAULT_MAX_STATE: u32 = 4;
/// Name of the implicit, tool-owned state signature.
pub const STATE_SIG: &str = "State";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SigId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mult {
    Set,
    One,
    Lone,
    Some,
}

impl Mult {
    pub fn keyword(self) -> &'static str {
        match self {
            Mult::Set => "set",
            Mult::One => "one",
            Mult::Lone => "lone",
            Mult::Some => "some",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scope {
    pub bound: u32,
    pub exact: bool,
}

impl Scope {
    pub fn upto(bound: u32) -> Self {
        Scope { bound, exact: false }
    }

    pub fn exactly(bound: u32) -> Self {
        Scope { bound, exact: true }
    }
}

impl Default for Scope {
    fn default() -> Self {
        Scope::upto(DEFAULT_SCOPE)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sig {
    pub name: String,
    pub fields: Vec<FieldId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub name: String,
    pub owner: SigId,
    /// Columns after the owner; the state column of mutable fields is not listed.
    pub columns: Vec<SigId>,
    /// Multiplicity of the last column.
    pub mult: Mult,
    pub mutable: bool,
}

impl Field {
    /// Arity as declared, without the implicit state column.
    pub fn arity(&self) -> usize {
        1 + self.columns.len()
    }

    /// Signature of every column, owner first.
    pub fn column_sigs(&self) -> Vec<SigId> {
        std::iter::once(self.owner)
            .chain(self.columns.iter().copied())
            .collect()
    }
}

/// A bound variable. Identity is the numeric id; the name is for display.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub id: u32,
    pub name: Arc<str>,
}

impl Var {
    pub fn new(id: u32, name: &str) -> Self {
        Var {
            id,
            name: Arc::from(name),
        }
    }
}

/// Relational expressions of the specification language.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Sig(SigId),
    Field { id: FieldId, arity: usize },
    /// Value of a mutable field in the successor state.
    Primed { id: FieldId, arity: usize },
    Var(Var),
    None(usize),
    Join(Box<Expr>, Box<Expr>),
    Union(Box<Expr>, Box<Expr>),
    Inter(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Closure(Box<Expr>),
    RClosure(Box<Expr>),
}

impl Expr {
    pub fn arity(&self) -> usize {
        match self {
            Expr::Sig(_) | Expr::Var(_) => 1,
            Expr::Field { arity, .. } | Expr::Primed { arity, .. } => *arity,
            Expr::None(n) => *n,
            Expr::Join(a, b) => a.arity() + b.arity() - 2,
            Expr::Union(a, _) | Expr::Inter(a, _) | Expr::Diff(a, _) => a.arity(),
            Expr::Product(a, b) => a.arity() + b.arity(),
            Expr::Closure(_) | Expr::RClosure(_) => 2,
        }
    }

    pub fn join(a: Expr, b: Expr) -> Expr {
        Expr::Join(Box::new(a), Box::new(b))
    }

    pub fn union(a: Expr, b: Expr) -> Expr {
        Expr::Union(Box::new(a), Box::new(b))
    }

    pub fn product(a: Expr, b: Expr) -> Expr {
        Expr::Product(Box::new(a), Box::new(b))
    }

    pub fn has_prime(&self) -> bool {
        match self {
            Expr::Primed { .. } => true,
            Expr::Sig(_) | Expr::Field { .. } | Expr::Var(_) | Expr::None(_) => false,
            Expr::Join(a, b)
            | Expr::Union(a, b)
            | Expr::Inter(a, b)
            | Expr::Diff(a, b)
            | Expr::Product(a, b) => a.has_prime() || b.has_prime(),
            Expr::Closure(a) | Expr::RClosure(a) => a.has_prime(),
        }
    }

    fn collect_free(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<Var>) {
        match self {
            Expr::Var(v) => {
                if !bound.contains(&v.id) {
                    out.insert(v.clone());
                }
            }
            Expr::Sig(_) | Expr::Field { .. } | Expr::Primed { .. } | Expr::None(_) => {}
            Expr::Join(a, b)
            | Expr::Union(a, b)
            | Expr::Inter(a, b)
            | Expr::Diff(a, b)
            | Expr::Product(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Expr::Closure(a) | Expr::RClosure(a) => a.collect_free(bound, out),
        }
    }

    pub(crate) fn max_var_id(&self) -> Option<u32> {
        match self {
            Expr::Var(v) => Some(v.id),
            Expr::Sig(_) | Expr::Field { .. } | Expr::Primed { .. } | Expr::None(_) => None,
            Expr::Join(a, b)
            | Expr::Union(a, b)
            | Expr::Inter(a, b)
            | Expr::Diff(a, b)
            | Expr::Product(a, b) => a.max_var_id().max(b.max_var_id()),
            Expr::Closure(a) | Expr::RClosure(a) => a.max_var_id(),
        }
    }

    fn size(&self) -> usize {
        match self {
            Expr::Sig(_) | Expr::Field { .. } | Expr::Primed { .. } | Expr::Var(_) | Expr::None(_) => 1,
            Expr::Join(a, b)
            | Expr::Union(a, b)
            | Expr::Inter(a, b)
            | Expr::Diff(a, b)
            | Expr::Product(a, b) => 1 + a.size() + b.size(),
            Expr::Closure(a) | Expr::RClosure(a) => 1 + a.size(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CardOp {
    No,
    Some,
    Lone,
    One,
}

impl CardOp {
    pub fn keyword(self) -> &'static str {
        match self {
            CardOp::No => "no",
            CardOp::Some => "some",
            CardOp::Lone => "lone",
            CardOp::One => "one",
        }
    }

    /// Whether a set with `n` elements passes the test.
    pub fn holds(self, n: usize) -> bool {
        match self {
            CardOp::No => n == 0,
            CardOp::Some => n > 0,
            CardOp::Lone => n <= 1,
            CardOp::One => n == 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quant {
    All,
    Some,
}

impl Quant {
    pub fn dual(self) -> Quant {
        match self {
            Quant::All => Quant::Some,
            Quant::Some => Quant::All,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quant::All => "all",
            Quant::Some => "some",
        }
    }
}

/// LTL over relational atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    True,
    False,
    In(Expr, Expr),
    Eq(Expr, Expr),
    Card(CardOp, Expr),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quant, Var, Expr, Box<Formula>),
    /// Strong next: a successor must exist.
    Next(Box<Formula>),
    /// Weak next: holds at a state without successor. Only introduced by NNF.
    WeakNext(Box<Formula>),
    Always(Box<Formula>),
    Eventually(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn quant(q: Quant, var: Var, domain: Expr, body: Formula) -> Formula {
        Formula::Quant(q, var, domain, Box::new(body))
    }

    /// Conjunction of all formulas; `true` when empty.
    pub fn conj(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Node count, expressions included.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::In(a, b) | Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::Card(_, e) => 1 + e.size(),
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::WeakNext(f)
            | Formula::Always(f)
            | Formula::Eventually(f) => 1 + f.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => 1 + a.size() + b.size(),
            Formula::Quant(_, _, d, body) => 1 + d.size() + body.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::In(a, b) | Formula::Eq(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Card(_, e) => e.collect_free(bound, out),
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::WeakNext(f)
            | Formula::Always(f)
            | Formula::Eventually(f) => f.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, v, d, body) => {
                d.collect_free(bound, out);
                bound.push(v.id);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Largest variable id occurring anywhere in the formula.
    pub fn max_var_id(&self) -> Option<u32> {
        match self {
            Formula::True | Formula::False => None,
            Formula::In(a, b) | Formula::Eq(a, b) => a.max_var_id().max(b.max_var_id()),
            Formula::Card(_, e) => e.max_var_id(),
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::WeakNext(f)
            | Formula::Always(f)
            | Formula::Eventually(f) => f.max_var_id(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => a.max_var_id().max(b.max_var_id()),
            Formula::Quant(_, v, d, body) => Some(v.id).max(d.max_var_id()).max(body.max_var_id()),
        }
    }

    pub fn is_temporal(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::In(..) | Formula::Eq(..) | Formula::Card(..) => {
                false
            }
            Formula::Next(_)
            | Formula::WeakNext(_)
            | Formula::Always(_)
            | Formula::Eventually(_)
            | Formula::Until(..)
            | Formula::Release(..) => true,
            Formula::Not(f) => f.is_temporal(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_temporal() || b.is_temporal()
            }
            Formula::Quant(_, _, _, body) => body.is_temporal(),
        }
    }

    /// Whether an until or release operator occurs.
    pub fn has_until_or_release(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::In(..) | Formula::Eq(..) | Formula::Card(..) => {
                false
            }
            Formula::Until(..) | Formula::Release(..) => true,
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::WeakNext(f)
            | Formula::Always(f)
            | Formula::Eventually(f) => f.has_until_or_release(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_until_or_release() || b.has_until_or_release()
            }
            Formula::Quant(_, _, _, body) => body.has_until_or_release(),
        }
    }

    pub fn has_prime(&self) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::In(a, b) | Formula::Eq(a, b) => a.has_prime() || b.has_prime(),
            Formula::Card(_, e) => e.has_prime(),
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::WeakNext(f)
            | Formula::Always(f)
            | Formula::Eventually(f) => f.has_prime(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => a.has_prime() || b.has_prime(),
            Formula::Quant(_, _, d, body) => d.has_prime() || body.has_prime(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedFormula {
    pub name: String,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pred {
    pub name: String,
    pub params: Vec<(Var, Expr)>,
    pub body: Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Check,
    Run,
}

impl CommandKind {
    pub fn keyword(self) -> &'static str {
        match self {
            CommandKind::Check => "check",
            CommandKind::Run => "run",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Command {
    pub kind: CommandKind,
    /// Name of the checked assertion or run predicate (or `"inline"`).
    pub target: String,
    /// Target formula with predicate parameters already quantified.
    pub formula: Formula,
    /// Explicit scopes; signatures not listed get [`Scope::default`].
    pub scopes: BTreeMap<SigId, Scope>,
    /// Largest State scope tried; State is always exact.
    pub max_state: u32,
}

impl Command {
    pub fn scope_of(&self, sig: SigId) -> Scope {
        self.scopes.get(&sig).copied().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {}", self.line, self.col, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Spec {
    pub sigs: Vec<Sig>,
    pub fields: Vec<Field>,
    pub facts: Vec<NamedFormula>,
    /// Transition constraint; primed fields refer to the successor state.
    pub trans: Option<Formula>,
    pub preds: Vec<Pred>,
    pub asserts: Vec<NamedFormula>,
    pub commands: Vec<Command>,
    pub warnings: Vec<Warning>,
}

impl Spec {
    pub fn sig(&self, id: SigId) -> &Sig {
        &self.sigs[id.0]
    }

    pub fn field(&self, id: FieldId) -> &Field {
        &self.fields[id.0]
    }

    pub fn sig_id(&self, name: &str) -> Option<SigId> {
        self.sigs.iter().position(|s| s.name == name).map(SigId)
    }

    pub fn field_id(&self, name: &str) -> Option<FieldId> {
        self.fields.iter().position(|f| f.name == name).map(FieldId)
    }

    pub fn assertion(&self, name: &str) -> Option<&Formula> {
        self.asserts
            .iter()
            .find(|a| a.name == name)
            .map(|a| &a.formula)
    }

    pub fn pred(&self, name: &str) -> Option<&Pred> {
        self.preds.iter().find(|p| p.name == name)
    }

    /// Mutable fields in declaration order.
    pub fn mutable_fields(&self) -> impl Iterator<Item = FieldId> + '_ {
        (0..self.fields.len())
            .map(FieldId)
            .filter(|f| self.field(*f).mutable)
    }

    pub fn static_fields(&self) -> impl Iterator<Item = FieldId> + '_ {
        (0..self.fields.len())
            .map(FieldId)
            .filter(|f| !self.field(*f).mutable)
    }

    /// The command declared for `name` with the given kind, if any.
    pub fn find_command(&self, kind: CommandKind, name: &str) -> Option<&Command> {
        self.commands
            .iter()
            .find(|c| c.kind == kind && c.target == name)
    }

    /// A command for `name`: the declared one, or a fresh one with default
    /// scopes built from the assertion (check) or predicate (run).
    pub fn command_for(&self, kind: CommandKind, name: &str) -> Option<Command> {
        if let Some(cmd) = self.find_command(kind, name) {
            return Some(cmd.clone());
        }
        let formula = match kind {
            CommandKind::Check => self.assertion(name)?.clone(),
            CommandKind::Run => self.pred(name)?.closed_body(),
        };
        Some(Command {
            kind,
            target: name.to_string(),
            formula,
            scopes: BTreeMap::new(),
            max_state: DEFAULT_MAX_STATE,
        })
    }

    /// Largest variable id used anywhere in the spec.
    pub fn max_var_id(&self) -> u32 {
        let mut best = 0;
        let mut see = |f: &Formula| {
            if let Some(m) = f.max_var_id() {
                best = best.max(m);
            }
        };
        self.facts.iter().for_each(|f| see(&f.formula));
        self.asserts.iter().for_each(|f| see(&f.formula));
        self.commands.iter().for_each(|c| see(&c.formula));
        self.preds.iter().for_each(|p| see(&p.closed_body()));
        if let Some(t) = &self.trans {
            see(t);
        }
        best
    }

    /// Renders a formula in surface syntax.
    pub fn show<'a>(&'a self, formula: &'a Formula) -> impl fmt::Display + 'a {
        ShowFormula { spec: self, formula }
    }

    pub fn show_expr<'a>(&'a self, expr: &'a Expr) -> impl fmt::Display + 'a {
        ShowExpr { spec: self, expr }
    }

    /// Prints the whole resolved spec back in surface syntax, with predicate
    /// calls already inlined.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for sig in &self.sigs {
            let fields: Vec<String> = sig
                .fields
                .iter()
                .map(|id| {
                    let f = self.field(*id);
                    let mut cols: Vec<String> =
                        f.columns.iter().map(|c| self.sig(*c).name.clone()).collect();
                    let last = cols.pop().unwrap_or_default();
                    let mut ty = String::new();
                    for c in cols {
                        ty.push_str(&format!("set {c} -> "));
                    }
                    ty.push_str(&format!("{} {}", f.mult.keyword(), last));
                    format!("{}{} : {}", if f.mutable { "var " } else { "" }, f.name, ty)
                })
                .collect();
            if fields.is_empty() {
                out.push_str(&format!("sig {} {{}}\n", sig.name));
            } else {
                out.push_str(&format!("sig {} {{ {} }}\n", sig.name, fields.join(", ")));
            }
        }
        for fact in &self.facts {
            out.push_str(&format!("fact {} {{ {} }}\n", fact.name, self.show(&fact.formula)));
        }
        if let Some(t) = &self.trans {
            out.push_str(&format!("trans {{ {} }}\n", self.show(t)));
        }
        for a in &self.asserts {
            out.push_str(&format!("assert {} {{ {} }}\n", a.name, self.show(&a.formula)));
        }
        for c in &self.commands {
            let mut items: Vec<String> = c
                .scopes
                .iter()
                .map(|(sig, s)| {
                    format!(
                        "{}{} {}",
                        if s.exact { "exactly " } else { "" },
                        s.bound,
                        self.sig(*sig).name
                    )
                })
                .collect();
            items.push(format!("{} {}", c.max_state, STATE_SIG));
            let is_named = match c.kind {
                CommandKind::Check => self.assertion(&c.target).is_some(),
                CommandKind::Run => self.pred(&c.target).is_some(),
            };
            let target = if is_named {
                c.target.clone()
            } else {
                format!("{{ {} }}", self.show(&c.formula))
            };
            out.push_str(&format!(
                "{} {} scope {}\n",
                c.kind.keyword(),
                target,
                items.join(", ")
            ));
        }
        out
    }
}

impl Pred {
    /// Body with parameters existentially quantified, as used by `run`.
    pub fn closed_body(&self) -> Formula {
        self.params
            .iter()
            .rev()
            .fold(self.body.clone(), |body, (v, d)| {
                Formula::quant(Quant::Some, v.clone(), d.clone(), body)
            })
    }
}

/// Display names for bound variables that never shadow each other or a
/// declared name.
struct Names<'a> {
    spec: &'a Spec,
    assigned: HashMap<u32, String>,
    taken: BTreeSet<String>,
}

impl<'a> Names<'a> {
    fn new(spec: &'a Spec) -> Self {
        let mut taken = BTreeSet::new();
        taken.extend(spec.sigs.iter().map(|s| s.name.clone()));
        taken.extend(spec.fields.iter().map(|f| f.name.clone()));
        Names {
            spec,
            assigned: HashMap::new(),
            taken,
        }
    }

    fn bind(&mut self, v: &Var) -> String {
        if let Some(n) = self.assigned.get(&v.id) {
            return n.clone();
        }
        let base: &str = &v.name;
        let mut name = base.to_string();
        let mut i = 2;
        while self.taken.contains(&name) {
            name = format!("{base}_{i}");
            i += 1;
        }
        self.taken.insert(name.clone());
        self.assigned.insert(v.id, name.clone());
        name
    }

    fn expr(&mut self, e: &Expr, prec: u8, out: &mut String) {
        let spec = self.spec;
        let bin = |me: &mut Self, a: &Expr, b: &Expr, op: &str, p: u8, out: &mut String| {
            if prec > p {
                out.push('(');
            }
            me.expr(a, p, out);
            out.push_str(op);
            me.expr(b, p + 1, out);
            if prec > p {
                out.push(')');
            }
        };
        match e {
            Expr::Sig(s) => out.push_str(&spec.sig(*s).name),
            Expr::Field { id, .. } => out.push_str(&spec.field(*id).name),
            Expr::Primed { id, .. } => {
                out.push_str(&spec.field(*id).name);
                out.push('\'');
            }
            Expr::Var(v) => {
                let n = self.bind(v);
                out.push_str(&n);
            }
            Expr::None(_) => out.push_str("none"),
            Expr::Union(a, b) => bin(self, a, b, " + ", 0, out),
            Expr::Diff(a, b) => bin(self, a, b, " - ", 0, out),
            Expr::Inter(a, b) => bin(self, a, b, " & ", 1, out),
            Expr::Product(a, b) => bin(self, a, b, " -> ", 2, out),
            Expr::Join(a, b) => bin(self, a, b, ".", 3, out),
            Expr::Closure(a) => {
                out.push('^');
                self.expr(a, 4, out);
            }
            Expr::RClosure(a) => {
                out.push('*');
                self.expr(a, 4, out);
            }
        }
    }

    /// `prec`: 0 implies, 1 or, 2 and, 3 unary operand.
    fn formula(&mut self, f: &Formula, prec: u8, top: bool, out: &mut String) {
        let bin = |me: &mut Self, a: &Formula, b: &Formula, op: &str, p: u8, out: &mut String| {
            let wrap = prec > p;
            if wrap {
                out.push('(');
            }
            // `implies` associates to the right, `and`/`or` to the left.
            let (lp, rp) = if p == 0 { (1, 0) } else { (p, p + 1) };
            me.formula(a, lp, false, out);
            out.push_str(op);
            me.formula(b, rp, false, out);
            if wrap {
                out.push(')');
            }
        };
        match f {
            Formula::True => out.push_str("true"),
            Formula::False => out.push_str("false"),
            Formula::In(a, b) => {
                self.expr(a, 0, out);
                out.push_str(" in ");
                self.expr(b, 0, out);
            }
            Formula::Eq(a, b) => {
                self.expr(a, 0, out);
                out.push_str(" = ");
                self.expr(b, 0, out);
            }
            Formula::Card(op, e) => {
                out.push_str(op.keyword());
                out.push(' ');
                self.expr(e, 0, out);
            }
            Formula::Not(g) => {
                out.push_str("not ");
                self.formula(g, 3, false, out);
            }
            Formula::Next(g) => {
                out.push_str("X ");
                self.formula(g, 3, false, out);
            }
            Formula::WeakNext(g) => {
                out.push_str("Xw ");
                self.formula(g, 3, false, out);
            }
            Formula::Always(g) => {
                out.push_str("G ");
                self.formula(g, 3, false, out);
            }
            Formula::Eventually(g) => {
                out.push_str("F ");
                self.formula(g, 3, false, out);
            }
            Formula::And(a, b) => bin(self, a, b, " and ", 2, out),
            Formula::Or(a, b) => bin(self, a, b, " or ", 1, out),
            Formula::Implies(a, b) => bin(self, a, b, " implies ", 0, out),
            Formula::Until(a, b) | Formula::Release(a, b) => {
                let op = if matches!(f, Formula::Until(..)) { " U " } else { " R " };
                out.push('(');
                self.formula(a, 0, false, out);
                out.push_str(op);
                self.formula(b, 0, false, out);
                out.push(')');
            }
            Formula::Quant(q, v, d, body) => {
                if !top {
                    out.push('(');
                }
                let name = self.bind(v);
                out.push_str(&format!("{} {} : ", q.keyword(), name));
                self.expr(d, 0, out);
                out.push_str(" | ");
                self.formula(body, 0, true, out);
                if !top {
                    out.push(')');
                }
            }
        }
    }
}

struct ShowFormula<'a> {
    spec: &'a Spec,
    formula: &'a Formula,
}

impl fmt::Display for ShowFormula<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Names::new(self.spec);
        let mut out = String::new();
        names.formula(self.formula, 0, true, &mut out);
        f.write_str(&out)
    }
}

struct ShowExpr<'a> {
    spec: &'a Spec,
    expr: &'a Expr,
}

impl fmt::Display for ShowExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Names::new(self.spec);
        let mut out = String::new();
        names.expr(self.expr, 0, &mut out);
        f.write_str(&out)
    }
}
