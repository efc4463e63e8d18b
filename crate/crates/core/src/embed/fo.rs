//! First-order relational formulas over an explicit trace: the target of the
//! temporal embedding. No temporal operators, no primes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::spec::{CardOp, FieldId, Quant, SigId, Spec, Var};

/// Where the State column of a mutable relation lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Idiom {
    /// State is the last column; `x` at `s` is `x.s`.
    #[default]
    Local,
    /// State is the first column; `x` at `s` is `s.x`.
    Global,
}

impl Idiom {
    pub fn name(self) -> &'static str {
        match self {
            Idiom::Local => "local",
            Idiom::Global => "global",
        }
    }
}

impl std::str::FromStr for Idiom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "local" => Ok(Idiom::Local),
            "global" => Ok(Idiom::Global),
            _ => Err(format!("unknown idiom `{s}` (expected local or global)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FoExpr {
    Sig(SigId),
    /// All State atoms.
    State,
    /// A declared relation. `state` is set for mutable fields and says where
    /// the State column sits; `arity` counts it.
    Field {
        id: FieldId,
        arity: usize,
        state: Option<Idiom>,
    },
    Var(Var),
    First,
    Last,
    Next,
    None(usize),
    Join(Box<FoExpr>, Box<FoExpr>),
    Union(Box<FoExpr>, Box<FoExpr>),
    Inter(Box<FoExpr>, Box<FoExpr>),
    Diff(Box<FoExpr>, Box<FoExpr>),
    Product(Box<FoExpr>, Box<FoExpr>),
    Closure(Box<FoExpr>),
    RClosure(Box<FoExpr>),
}

impl FoExpr {
    pub fn arity(&self) -> usize {
        match self {
            FoExpr::Sig(_) | FoExpr::State | FoExpr::Var(_) | FoExpr::First | FoExpr::Last => 1,
            FoExpr::Next | FoExpr::Closure(_) | FoExpr::RClosure(_) => 2,
            FoExpr::Field { arity, .. } => *arity,
            FoExpr::None(n) => *n,
            FoExpr::Join(a, b) => a.arity() + b.arity() - 2,
            FoExpr::Union(a, _) | FoExpr::Inter(a, _) | FoExpr::Diff(a, _) => a.arity(),
            FoExpr::Product(a, b) => a.arity() + b.arity(),
        }
    }

    pub fn join(a: FoExpr, b: FoExpr) -> FoExpr {
        FoExpr::Join(Box::new(a), Box::new(b))
    }

    pub fn inter(a: FoExpr, b: FoExpr) -> FoExpr {
        FoExpr::Inter(Box::new(a), Box::new(b))
    }

    pub fn closure(a: FoExpr) -> FoExpr {
        FoExpr::Closure(Box::new(a))
    }

    pub fn rclosure(a: FoExpr) -> FoExpr {
        FoExpr::RClosure(Box::new(a))
    }

    fn size(&self) -> usize {
        match self {
            FoExpr::Join(a, b)
            | FoExpr::Union(a, b)
            | FoExpr::Inter(a, b)
            | FoExpr::Diff(a, b)
            | FoExpr::Product(a, b) => 1 + a.size() + b.size(),
            FoExpr::Closure(a) | FoExpr::RClosure(a) => 1 + a.size(),
            _ => 1,
        }
    }

    fn collect_free(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<Var>) {
        match self {
            FoExpr::Var(v) if !bound.contains(&v.id) => {
                out.insert(v.clone());
            }
            FoExpr::Join(a, b)
            | FoExpr::Union(a, b)
            | FoExpr::Inter(a, b)
            | FoExpr::Diff(a, b)
            | FoExpr::Product(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FoExpr::Closure(a) | FoExpr::RClosure(a) => a.collect_free(bound, out),
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FoFormula {
    True,
    False,
    In(FoExpr, FoExpr),
    Eq(FoExpr, FoExpr),
    Card(CardOp, FoExpr),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Quant(Quant, Var, FoExpr, Box<FoFormula>),
    /// The trace has a back loop.
    Infinite,
    /// The trace has no back loop.
    Finite,
}

impl FoFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FoFormula) -> FoFormula {
        FoFormula::Not(Box::new(f))
    }

    pub fn and(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn quant(q: Quant, v: Var, domain: FoExpr, body: FoFormula) -> FoFormula {
        FoFormula::Quant(q, v, domain, Box::new(body))
    }

    pub fn conj(fs: impl IntoIterator<Item = FoFormula>) -> FoFormula {
        fs.into_iter().reduce(FoFormula::and).unwrap_or(FoFormula::True)
    }

    pub fn size(&self) -> usize {
        match self {
            FoFormula::True | FoFormula::False | FoFormula::Infinite | FoFormula::Finite => 1,
            FoFormula::In(a, b) | FoFormula::Eq(a, b) => 1 + a.size() + b.size(),
            FoFormula::Card(_, e) => 1 + e.size(),
            FoFormula::Not(f) => 1 + f.size(),
            FoFormula::And(a, b) | FoFormula::Or(a, b) => 1 + a.size() + b.size(),
            FoFormula::Quant(_, _, d, body) => 1 + d.size() + body.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<Var>) {
        match self {
            FoFormula::In(a, b) | FoFormula::Eq(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FoFormula::Card(_, e) => e.collect_free(bound, out),
            FoFormula::Not(f) => f.collect_free(bound, out),
            FoFormula::And(a, b) | FoFormula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FoFormula::Quant(_, v, d, body) => {
                d.collect_free(bound, out);
                bound.push(v.id);
                body.collect_free(bound, out);
                bound.pop();
            }
            _ => {}
        }
    }
}

/// Printer for FO formulas in Alloy-like concrete syntax. `ident` maps every
/// declared or bound name before it is printed.
pub struct FoPrinter<'a> {
    spec: &'a Spec,
    ident: &'a dyn Fn(&str) -> String,
    assigned: HashMap<u32, String>,
    taken: BTreeSet<String>,
}

fn same(s: &str) -> String {
    s.to_string()
}

impl<'a> FoPrinter<'a> {
    pub fn new(spec: &'a Spec) -> Self {
        Self::with_idents(spec, &same)
    }

    pub fn with_idents(spec: &'a Spec, ident: &'a dyn Fn(&str) -> String) -> Self {
        let mut taken = BTreeSet::new();
        taken.extend(spec.sigs.iter().map(|s| ident(&s.name)));
        taken.extend(spec.fields.iter().map(|f| ident(&f.name)));
        for reserved in ["State", "first", "last", "next", "infinite", "finite"] {
            taken.insert(reserved.to_string());
        }
        FoPrinter {
            spec,
            ident,
            assigned: HashMap::new(),
            taken,
        }
    }

    pub fn formula(&mut self, f: &FoFormula) -> String {
        let mut out = String::new();
        self.f(f, 0, true, &mut out);
        out
    }

    pub fn expr(&mut self, e: &FoExpr) -> String {
        let mut out = String::new();
        self.e(e, 0, &mut out);
        out
    }

    fn bind(&mut self, v: &Var) -> String {
        if let Some(n) = self.assigned.get(&v.id) {
            return n.clone();
        }
        let base = (self.ident)(&v.name);
        let mut name = base.clone();
        let mut i = 2;
        while self.taken.contains(&name) {
            name = format!("{base}_{i}");
            i += 1;
        }
        self.taken.insert(name.clone());
        self.assigned.insert(v.id, name.clone());
        name
    }

    fn e(&mut self, e: &FoExpr, prec: u8, out: &mut String) {
        let bin = |me: &mut Self, a: &FoExpr, b: &FoExpr, op: &str, p: u8, out: &mut String| {
            if prec > p {
                out.push('(');
            }
            me.e(a, p, out);
            out.push_str(op);
            me.e(b, p + 1, out);
            if prec > p {
                out.push(')');
            }
        };
        match e {
            FoExpr::Sig(s) => out.push_str(&(self.ident)(&self.spec.sig(*s).name)),
            FoExpr::State => out.push_str("State"),
            FoExpr::Field { id, .. } => out.push_str(&(self.ident)(&self.spec.field(*id).name)),
            FoExpr::Var(v) => {
                let n = self.bind(v);
                out.push_str(&n);
            }
            FoExpr::First => out.push_str("first"),
            FoExpr::Last => out.push_str("last"),
            FoExpr::Next => out.push_str("next"),
            FoExpr::None(1) => out.push_str("none"),
            FoExpr::None(n) => out.push_str(&vec!["none"; *n].join(" -> ")),
            FoExpr::Union(a, b) => bin(self, a, b, " + ", 0, out),
            FoExpr::Diff(a, b) => bin(self, a, b, " - ", 0, out),
            FoExpr::Inter(a, b) => bin(self, a, b, " & ", 1, out),
            FoExpr::Product(a, b) => bin(self, a, b, " -> ", 2, out),
            FoExpr::Join(a, b) => bin(self, a, b, ".", 3, out),
            FoExpr::Closure(a) => {
                out.push('^');
                self.e(a, 4, out);
            }
            FoExpr::RClosure(a) => {
                out.push('*');
                self.e(a, 4, out);
            }
        }
    }

    /// `prec`: 0 or, 1 and, 2 operand of `not`.
    fn f(&mut self, f: &FoFormula, prec: u8, top: bool, out: &mut String) {
        let bin = |me: &mut Self, a: &FoFormula, b: &FoFormula, op: &str, p: u8, out: &mut String| {
            if prec > p {
                out.push('(');
            }
            me.f(a, p, false, out);
            out.push_str(op);
            me.f(b, p + 1, false, out);
            if prec > p {
                out.push(')');
            }
        };
        match f {
            FoFormula::True => out.push_str("(no none)"),
            FoFormula::False => out.push_str("(some none)"),
            FoFormula::Infinite => out.push_str("infinite"),
            FoFormula::Finite => out.push_str("finite"),
            FoFormula::In(a, b) | FoFormula::Eq(a, b) => {
                self.e(a, 0, out);
                out.push_str(if matches!(f, FoFormula::In(..)) { " in " } else { " = " });
                self.e(b, 0, out);
            }
            FoFormula::Card(op, e) => {
                out.push_str(op.keyword());
                out.push(' ');
                self.e(e, 0, out);
            }
            FoFormula::Not(g) => {
                out.push_str("not ");
                self.f(g, 2, false, out);
            }
            FoFormula::And(a, b) => bin(self, a, b, " and ", 1, out),
            FoFormula::Or(a, b) => bin(self, a, b, " or ", 0, out),
            FoFormula::Quant(q, v, d, body) => {
                if !top {
                    out.push('(');
                }
                let name = self.bind(v);
                out.push_str(&format!("{} {} : ", q.keyword(), name));
                self.e(d, 0, out);
                out.push_str(" | ");
                self.f(body, 0, true, out);
                if !top {
                    out.push(')');
                }
            }
        }
    }
}

/// Displays an FO formula with the spec's names.
pub fn show(spec: &Spec, f: &FoFormula) -> String {
    FoPrinter::new(spec).formula(f)
}

impl fmt::Display for Idiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
