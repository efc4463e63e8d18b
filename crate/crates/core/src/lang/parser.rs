//! Recursive descent parser for the surface language.
//!
//! Parenthesised groups are ambiguous between formulas and expressions; the
//! parser first tries `expr (in|=) expr` and backtracks to `( formula )`.
//! Binary temporal operators (`U`, `R`) are only accepted directly inside
//! parentheses or a declaration body.

use std::collections::BTreeSet;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::spec::{CardOp, CommandKind, Mult, Quant};

type PResult<T> = Result<T, ParseError>;

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    furthest: usize,
    expected: BTreeSet<String>,
}

impl Parser {
    pub(crate) fn new(src: &str) -> PResult<Self> {
        Ok(Parser {
            tokens: tokenize(src)?,
            pos: 0,
            furthest: 0,
            expected: BTreeSet::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Records a failure at the current position and returns the error for
    /// the furthest failure seen so far.
    fn fail(&mut self, expected: &[&str]) -> ParseError {
        if self.pos > self.furthest {
            self.furthest = self.pos;
            self.expected.clear();
        }
        if self.pos == self.furthest {
            self.expected.extend(expected.iter().map(|s| s.to_string()));
        }
        let tok = &self.tokens[self.furthest];
        ParseError {
            line: tok.span.line,
            col: tok.span.col,
            expected: self.expected.iter().cloned().collect(),
            found: tok.tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.fail(&[&tok.to_string()]))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Ident { name, span })
            }
            _ => Err(self.fail(&["identifier"])),
        }
    }

    pub(crate) fn parse_spec(&mut self) -> PResult<SpecAst> {
        let mut decls = Vec::new();
        while *self.peek() != Tok::Eof {
            decls.push(self.decl()?);
        }
        Ok(SpecAst { decls })
    }

    pub(crate) fn parse_formula_only(&mut self) -> PResult<FormulaAst> {
        let f = self.block_item()?;
        self.expect(Tok::Eof)?;
        Ok(f)
    }

    fn decl(&mut self) -> PResult<Decl> {
        let span = self.span();
        match self.peek() {
            Tok::Sig => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::LBrace)?;
                let mut fields = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        fields.extend(self.field()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                Ok(Decl::Sig(SigDecl { name, fields }))
            }
            Tok::Fact => {
                self.bump();
                let name = self.ident()?;
                let body = self.block()?;
                Ok(Decl::Fact(NamedDecl { name, body }))
            }
            Tok::Assert => {
                self.bump();
                let name = self.ident()?;
                let body = self.block()?;
                Ok(Decl::Assert(NamedDecl { name, body }))
            }
            Tok::Trans => {
                self.bump();
                let body = self.block()?;
                Ok(Decl::Trans(TransDecl { body, span }))
            }
            Tok::Pred => {
                self.bump();
                let name = self.ident()?;
                let mut params = Vec::new();
                if self.eat(&Tok::LBrack) {
                    if *self.peek() != Tok::RBrack {
                        params = self.bindings()?;
                    }
                    self.expect(Tok::RBrack)?;
                }
                let body = self.block()?;
                Ok(Decl::Pred(PredDecl { name, params, body }))
            }
            Tok::Check | Tok::Run => {
                let kind = if self.bump() == Tok::Check {
                    CommandKind::Check
                } else {
                    CommandKind::Run
                };
                let target = if *self.peek() == Tok::LBrace {
                    Target::Inline(self.block()?)
                } else {
                    Target::Name(self.ident()?)
                };
                let mut scopes = Vec::new();
                if self.eat(&Tok::Scope) {
                    loop {
                        let exactly = self.eat(&Tok::Exactly);
                        let bound = match self.peek().clone() {
                            Tok::Int(n) => {
                                self.bump();
                                n
                            }
                            _ => return Err(self.fail(&["integer"])),
                        };
                        let sig = self.ident()?;
                        scopes.push(ScopeItem { exactly, bound, sig });
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                Ok(Decl::Command(CommandDecl {
                    kind,
                    target,
                    scopes,
                    span,
                }))
            }
            _ => Err(self.fail(&[
                "`sig`", "`fact`", "`trans`", "`pred`", "`assert`", "`check`", "`run`",
            ])),
        }
    }

    fn field(&mut self) -> PResult<Vec<FieldDecl>> {
        let mutable = self.eat(&Tok::Var);
        let mut names = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            names.push(self.ident()?);
        }
        self.expect(Tok::Colon)?;
        let mut columns = Vec::new();
        loop {
            let mult = match self.peek() {
                Tok::Set => Some(Mult::Set),
                Tok::One => Some(Mult::One),
                Tok::Lone => Some(Mult::Lone),
                Tok::Some => Some(Mult::Some),
                _ => None,
            };
            if mult.is_some() {
                self.bump();
            }
            columns.push((mult, self.ident()?));
            if !self.eat(&Tok::Arrow) {
                break;
            }
        }
        Ok(names
            .into_iter()
            .map(|name| FieldDecl {
                name,
                mutable,
                columns: columns.clone(),
            })
            .collect())
    }

    /// `x, y : A, z : B` as one binding per variable.
    fn bindings(&mut self) -> PResult<Vec<(Ident, ExprAst)>> {
        let mut out = Vec::new();
        loop {
            let mut names = vec![self.ident()?];
            while self.eat(&Tok::Comma) {
                names.push(self.ident()?);
            }
            self.expect(Tok::Colon)?;
            let domain = self.expr()?;
            out.extend(names.into_iter().map(|n| (n, domain.clone())));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    /// `{ f1 f2 ... }`: juxtaposed formulas are conjoined.
    fn block(&mut self) -> PResult<FormulaAst> {
        let span = self.span();
        self.expect(Tok::LBrace)?;
        let mut acc: Option<FormulaAst> = None;
        while *self.peek() != Tok::RBrace {
            let item = self.block_item()?;
            acc = Some(match acc {
                None => item,
                Some(prev) => FormulaAst {
                    span: prev.span,
                    kind: FormulaKind::And(Box::new(prev), Box::new(item)),
                },
            });
        }
        self.expect(Tok::RBrace)?;
        Ok(acc.unwrap_or(FormulaAst {
            kind: FormulaKind::True,
            span,
        }))
    }

    /// A formula optionally followed by a binary temporal operator.
    fn block_item(&mut self) -> PResult<FormulaAst> {
        let lhs = self.formula()?;
        let span = lhs.span;
        match self.peek() {
            Tok::Until => {
                self.bump();
                let rhs = self.formula()?;
                Ok(FormulaAst {
                    kind: FormulaKind::Until(Box::new(lhs), Box::new(rhs)),
                    span,
                })
            }
            Tok::Release => {
                self.bump();
                let rhs = self.formula()?;
                Ok(FormulaAst {
                    kind: FormulaKind::Release(Box::new(lhs), Box::new(rhs)),
                    span,
                })
            }
            _ => Ok(lhs),
        }
    }

    fn formula(&mut self) -> PResult<FormulaAst> {
        let lhs = self.or_formula()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.formula()?;
            let span = lhs.span;
            return Ok(FormulaAst {
                kind: FormulaKind::Implies(Box::new(lhs), Box::new(rhs)),
                span,
            });
        }
        Ok(lhs)
    }

    fn or_formula(&mut self) -> PResult<FormulaAst> {
        let mut lhs = self.and_formula()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and_formula()?;
            let span = lhs.span;
            lhs = FormulaAst {
                kind: FormulaKind::Or(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn and_formula(&mut self) -> PResult<FormulaAst> {
        let mut lhs = self.unary_formula()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary_formula()?;
            let span = lhs.span;
            lhs = FormulaAst {
                kind: FormulaKind::And(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn unary_formula(&mut self) -> PResult<FormulaAst> {
        let span = self.span();
        let wrap = |kind| Ok(FormulaAst { kind, span });
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                wrap(FormulaKind::Not(Box::new(self.unary_formula()?)))
            }
            Tok::Next => {
                self.bump();
                wrap(FormulaKind::Next(Box::new(self.unary_formula()?)))
            }
            Tok::Always => {
                self.bump();
                wrap(FormulaKind::Always(Box::new(self.unary_formula()?)))
            }
            Tok::Eventually => {
                self.bump();
                wrap(FormulaKind::Eventually(Box::new(self.unary_formula()?)))
            }
            Tok::True => {
                self.bump();
                wrap(FormulaKind::True)
            }
            Tok::False => {
                self.bump();
                wrap(FormulaKind::False)
            }
            Tok::All => {
                self.bump();
                self.quantifier(Quant::All, span)
            }
            Tok::Some
                if matches!(self.peek_at(1), Tok::Ident(_))
                    && matches!(self.peek_at(2), Tok::Colon | Tok::Comma) =>
            {
                self.bump();
                self.quantifier(Quant::Some, span)
            }
            Tok::Some | Tok::No | Tok::Lone | Tok::One => {
                let op = match self.bump() {
                    Tok::Some => CardOp::Some,
                    Tok::No => CardOp::No,
                    Tok::Lone => CardOp::Lone,
                    _ => CardOp::One,
                };
                wrap(FormulaKind::Card(op, self.expr()?))
            }
            Tok::Ident(_) if *self.peek_at(1) == Tok::LBrack => {
                let name = self.ident()?;
                self.bump();
                let mut args = Vec::new();
                if *self.peek() != Tok::RBrack {
                    loop {
                        args.push(self.expr()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrack)?;
                wrap(FormulaKind::Call(name, args))
            }
            Tok::LParen => {
                let save = self.pos;
                if let Ok(f) = self.comparison() {
                    return Ok(f);
                }
                self.pos = save;
                self.bump();
                let inner = self.block_item()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Until | Tok::Release => Err(self.fail(&[
                "formula (binary temporal operators must be enclosed in parentheses)",
            ])),
            _ => self.comparison(),
        }
    }

    fn quantifier(&mut self, q: Quant, span: Span) -> PResult<FormulaAst> {
        let bindings = self.bindings()?;
        self.expect(Tok::Bar)?;
        let body = self.formula()?;
        if matches!(self.peek(), Tok::Until | Tok::Release) {
            return Err(self.fail(&[
                "end of quantifier body (parenthesise `U`/`R` inside a quantifier)",
            ]));
        }
        Ok(FormulaAst {
            kind: FormulaKind::Quant(q, bindings, Box::new(body)),
            span,
        })
    }

    fn comparison(&mut self) -> PResult<FormulaAst> {
        let span = self.span();
        let lhs = self.expr()?;
        match self.peek() {
            Tok::In => {
                self.bump();
                let rhs = self.expr()?;
                Ok(FormulaAst {
                    kind: FormulaKind::In(lhs, rhs),
                    span,
                })
            }
            Tok::Equals => {
                self.bump();
                let rhs = self.expr()?;
                Ok(FormulaAst {
                    kind: FormulaKind::Eq(lhs, rhs),
                    span,
                })
            }
            _ => Err(self.fail(&["`in`", "`=`"])),
        }
    }

    pub(crate) fn expr(&mut self) -> PResult<ExprAst> {
        let mut lhs = self.inter_expr()?;
        loop {
            let union = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => break,
            };
            self.bump();
            let rhs = self.inter_expr()?;
            let span = lhs.span;
            let (a, b) = (Box::new(lhs), Box::new(rhs));
            lhs = ExprAst {
                kind: if union {
                    ExprKind::Union(a, b)
                } else {
                    ExprKind::Diff(a, b)
                },
                span,
            };
        }
        Ok(lhs)
    }

    fn inter_expr(&mut self) -> PResult<ExprAst> {
        let mut lhs = self.arrow_expr()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.arrow_expr()?;
            let span = lhs.span;
            lhs = ExprAst {
                kind: ExprKind::Inter(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn arrow_expr(&mut self) -> PResult<ExprAst> {
        let mut lhs = self.join_expr()?;
        while self.eat(&Tok::Arrow) {
            let rhs = self.join_expr()?;
            let span = lhs.span;
            lhs = ExprAst {
                kind: ExprKind::Product(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn join_expr(&mut self) -> PResult<ExprAst> {
        let mut lhs = self.unary_expr()?;
        while self.eat(&Tok::Dot) {
            let rhs = self.unary_expr()?;
            let span = lhs.span;
            lhs = ExprAst {
                kind: ExprKind::Join(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> PResult<ExprAst> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                let e = self.unary_expr()?;
                Ok(ExprAst {
                    kind: ExprKind::RClosure(Box::new(e)),
                    span,
                })
            }
            Tok::Caret => {
                self.bump();
                let e = self.unary_expr()?;
                Ok(ExprAst {
                    kind: ExprKind::Closure(Box::new(e)),
                    span,
                })
            }
            Tok::None => {
                self.bump();
                Ok(ExprAst {
                    kind: ExprKind::None,
                    span,
                })
            }
            Tok::Ident(name) => {
                self.bump();
                let kind = if self.eat(&Tok::Prime) {
                    ExprKind::Primed(name)
                } else {
                    ExprKind::Name(name)
                };
                Ok(ExprAst { kind, span })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.fail(&["expression"])),
        }
    }
}
