//! Unresolved syntax tree, exactly as parsed.

use std::fmt;

use crate::spec::{CardOp, CommandKind, Mult, Quant};

/// Source position (1-based). Spans never take part in equality, so trees
/// parsed from differently formatted text compare equal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: &str) -> Self {
        Ident {
            name: name.to_string(),
            span: Span::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpecAst {
    pub decls: Vec<Decl>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    Sig(SigDecl),
    Fact(NamedDecl),
    Trans(TransDecl),
    Pred(PredDecl),
    Assert(NamedDecl),
    Command(CommandDecl),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigDecl {
    pub name: Ident,
    pub fields: Vec<FieldDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDecl {
    pub name: Ident,
    pub mutable: bool,
    /// Columns after the owner with their (optional) multiplicity keyword.
    pub columns: Vec<(Option<Mult>, Ident)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedDecl {
    pub name: Ident,
    pub body: FormulaAst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransDecl {
    pub body: FormulaAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredDecl {
    pub name: Ident,
    pub params: Vec<(Ident, ExprAst)>,
    pub body: FormulaAst,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Name(Ident),
    Inline(FormulaAst),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScopeItem {
    pub exactly: bool,
    pub bound: u32,
    pub sig: Ident,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandDecl {
    pub kind: CommandKind,
    pub target: Target,
    pub scopes: Vec<ScopeItem>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaAst {
    pub kind: FormulaKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FormulaKind {
    True,
    False,
    Not(Box<FormulaAst>),
    And(Box<FormulaAst>, Box<FormulaAst>),
    Or(Box<FormulaAst>, Box<FormulaAst>),
    Implies(Box<FormulaAst>, Box<FormulaAst>),
    /// One binding per variable; `all x, y : A | f` becomes two bindings.
    Quant(Quant, Vec<(Ident, ExprAst)>, Box<FormulaAst>),
    Card(CardOp, ExprAst),
    In(ExprAst, ExprAst),
    Eq(ExprAst, ExprAst),
    Next(Box<FormulaAst>),
    Always(Box<FormulaAst>),
    Eventually(Box<FormulaAst>),
    Until(Box<FormulaAst>, Box<FormulaAst>),
    Release(Box<FormulaAst>, Box<FormulaAst>),
    Call(Ident, Vec<ExprAst>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExprAst {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Name(String),
    Primed(String),
    None,
    Join(Box<ExprAst>, Box<ExprAst>),
    Union(Box<ExprAst>, Box<ExprAst>),
    Inter(Box<ExprAst>, Box<ExprAst>),
    Diff(Box<ExprAst>, Box<ExprAst>),
    Product(Box<ExprAst>, Box<ExprAst>),
    Closure(Box<ExprAst>),
    RClosure(Box<ExprAst>),
}

impl FormulaAst {
    pub fn new(kind: FormulaKind) -> Self {
        FormulaAst {
            kind,
            span: Span::default(),
        }
    }
}

impl ExprAst {
    pub fn new(kind: ExprKind) -> Self {
        ExprAst {
            kind,
            span: Span::default(),
        }
    }

    pub fn name(n: &str) -> Self {
        ExprAst::new(ExprKind::Name(n.to_string()))
    }
}
