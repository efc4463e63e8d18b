//! Name resolution, arity checking and predicate inlining.

use std::collections::{BTreeMap, HashMap};

use super::ast::*;
use crate::spec::{
    Command, Expr, Field, FieldId, Formula, Mult, NamedFormula, Pred, Scope, Sig, SigId,
    Spec, Var, Warning, DEFAULT_MAX_STATE, STATE_SIG,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResolveError {
    #[error("{0}: unknown identifier `{1}`")]
    Unknown(Span, String),
    #[error("{0}: duplicate declaration of `{1}`")]
    Duplicate(Span, String),
    #[error("{0}: `{1}` is reserved")]
    Reserved(Span, String),
    #[error("{0}: arity mismatch: {1}")]
    Arity(Span, String),
    #[error("{0}: primed reference `{1}'` outside the transition context")]
    PrimeOutsideTransition(Span, String),
    #[error("{0}: only mutable fields can be primed, `{1}` is not one")]
    PrimeOnImmutable(Span, String),
    #[error("{0}: temporal operator inside the transition constraint")]
    TemporalInTransition(Span),
    #[error("{0}: recursive call of predicate `{1}`")]
    Recursion(Span, String),
    #[error("{0}: predicate `{1}` expects {2} argument(s), got {3}")]
    ArgumentCount(Span, String, usize, usize),
    #[error("{0}: `{1}` is not a {2}")]
    WrongKind(Span, String, &'static str),
    #[error("{0}: multiplicity `{1}` is only supported on the last column")]
    MiddleMultiplicity(Span, &'static str),
    #[error("{0}: {1}")]
    Command(Span, String),
}

#[derive(Clone)]
enum Binding {
    Var(Var),
    /// Predicate parameter bound to its argument expression.
    Expr(Expr),
}

#[derive(Clone, Default)]
struct Ctx {
    env: Vec<(String, Binding)>,
    in_trans: bool,
}

impl Ctx {
    fn lookup(&self, name: &str) -> Option<&Binding> {
        self.env.iter().rev().find(|(n, _)| n == name).map(|(_, b)| b)
    }
}

struct Resolver<'a> {
    spec: Spec,
    preds: HashMap<String, &'a PredDecl>,
    /// Predicates currently being inlined, for cycle detection.
    stack: Vec<String>,
    next_var: u32,
}

/// Resolves a parsed spec: binds names, checks arities, validates primes and
/// inlines predicate calls.
pub fn resolve(ast: &SpecAst) -> Result<Spec, ResolveError> {
    let mut r = Resolver {
        spec: Spec::default(),
        preds: HashMap::new(),
        stack: Vec::new(),
        next_var: 0,
    };
    r.declare(ast)?;

    for decl in &ast.decls {
        if let Decl::Pred(p) = decl {
            r.stack.push(p.name.name.clone());
            let mut ctx = Ctx {
                in_trans: true,
                ..Ctx::default()
            };
            let mut params = Vec::new();
            for (name, dom) in &p.params {
                let domain = r.unary_domain(dom, &ctx)?;
                let v = r.fresh(&name.name);
                ctx.env.push((name.name.clone(), Binding::Var(v.clone())));
                params.push((v, domain));
            }
            // Temporal operators are checked at call sites from `trans`.
            ctx.in_trans = false;
            let body = r.pred_body(&p.body, &ctx)?;
            r.stack.pop();
            r.spec.preds.push(Pred {
                name: p.name.name.clone(),
                params,
                body,
            });
        }
    }
    let mut trans_seen = false;
    for decl in &ast.decls {
        match decl {
            Decl::Fact(d) => {
                let formula = r.formula(&d.body, &Ctx::default())?;
                r.spec.facts.push(NamedFormula {
                    name: d.name.name.clone(),
                    formula,
                });
            }
            Decl::Assert(d) => {
                let formula = r.formula(&d.body, &Ctx::default())?;
                r.spec.asserts.push(NamedFormula {
                    name: d.name.name.clone(),
                    formula,
                });
            }
            Decl::Trans(t) => {
                if trans_seen {
                    return Err(ResolveError::Duplicate(t.span, "trans".into()));
                }
                trans_seen = true;
                let ctx = Ctx {
                    in_trans: true,
                    ..Ctx::default()
                };
                let f = r.formula(&t.body, &ctx)?;
                r.spec.trans = Some(f);
            }
            _ => {}
        }
    }
    for decl in &ast.decls {
        if let Decl::Command(c) = decl {
            let cmd = r.command(c)?;
            r.spec.commands.push(cmd);
        }
    }
    Ok(r.spec)
}

impl<'a> Resolver<'a> {
    fn fresh(&mut self, name: &str) -> Var {
        let v = Var::new(self.next_var, name);
        self.next_var += 1;
        v
    }

    fn declare(&mut self, ast: &'a SpecAst) -> Result<(), ResolveError> {
        let mut names: HashMap<String, Span> = HashMap::new();
        let mut claim = |id: &Ident| -> Result<(), ResolveError> {
            if id.name == STATE_SIG {
                return Err(ResolveError::Reserved(id.span, id.name.clone()));
            }
            if names.insert(id.name.clone(), id.span).is_some() {
                return Err(ResolveError::Duplicate(id.span, id.name.clone()));
            }
            Ok(())
        };
        for decl in &ast.decls {
            match decl {
                Decl::Sig(s) => {
                    claim(&s.name)?;
                    for f in &s.fields {
                        claim(&f.name)?;
                    }
                }
                Decl::Pred(p) => {
                    claim(&p.name)?;
                    self.preds.insert(p.name.name.clone(), p);
                }
                Decl::Fact(d) | Decl::Assert(d) => claim(&d.name)?,
                Decl::Trans(_) | Decl::Command(_) => {}
            }
        }
        for decl in &ast.decls {
            if let Decl::Sig(s) = decl {
                self.spec.sigs.push(Sig {
                    name: s.name.name.clone(),
                    fields: Vec::new(),
                });
            }
        }
        for decl in &ast.decls {
            let Decl::Sig(s) = decl else { continue };
            let owner = self.spec.sig_id(&s.name.name).expect("declared above");
            for f in &s.fields {
                let mut columns = Vec::new();
                let n = f.columns.len();
                let mut mult = if n == 1 { Mult::One } else { Mult::Set };
                for (i, (m, sig)) in f.columns.iter().enumerate() {
                    let id = self
                        .spec
                        .sig_id(&sig.name)
                        .ok_or_else(|| unknown_sig(sig))?;
                    columns.push(id);
                    match (i + 1 == n, m) {
                        (true, Some(m)) => mult = *m,
                        (false, Some(m)) if *m != Mult::Set => {
                            return Err(ResolveError::MiddleMultiplicity(sig.span, m.keyword()))
                        }
                        _ => {}
                    }
                }
                let id = FieldId(self.spec.fields.len());
                self.spec.fields.push(Field {
                    name: f.name.name.clone(),
                    owner,
                    columns,
                    mult,
                    mutable: f.mutable,
                });
                self.spec.sigs[owner.0].fields.push(id);
            }
        }
        Ok(())
    }

    fn command(&mut self, c: &CommandDecl) -> Result<Command, ResolveError> {
        let (target, formula) = match &c.target {
            Target::Name(n) => {
                let f = match c.kind {
                    crate::spec::CommandKind::Check => self
                        .spec
                        .assertion(&n.name)
                        .cloned()
                        .ok_or_else(|| ResolveError::WrongKind(n.span, n.name.clone(), "assertion"))?,
                    crate::spec::CommandKind::Run => self
                        .spec
                        .pred(&n.name)
                        .map(Pred::closed_body)
                        .ok_or_else(|| ResolveError::WrongKind(n.span, n.name.clone(), "predicate"))?,
                };
                (n.name.clone(), f)
            }
            Target::Inline(f) => ("inline".to_string(), self.formula(f, &Ctx::default())?),
        };
        let mut scopes = BTreeMap::new();
        let mut max_state = None;
        for item in &c.scopes {
            if item.sig.name == STATE_SIG {
                if max_state.is_some() || item.bound == 0 {
                    return Err(ResolveError::Command(
                        item.sig.span,
                        "State scope must be given once and be positive".into(),
                    ));
                }
                max_state = Some(item.bound);
                continue;
            }
            let sig = self
                .spec
                .sig_id(&item.sig.name)
                .ok_or_else(|| unknown_sig(&item.sig))?;
            let scope = Scope {
                bound: item.bound,
                exact: item.exactly,
            };
            if scopes.insert(sig, scope).is_some() {
                return Err(ResolveError::Command(
                    item.sig.span,
                    format!("scope of `{}` given twice", item.sig.name),
                ));
            }
        }
        Ok(Command {
            kind: c.kind,
            target,
            formula,
            scopes,
            max_state: max_state.unwrap_or(DEFAULT_MAX_STATE),
        })
    }

    /// Stand-alone resolution of a predicate body: primes are allowed because
    /// the predicate may be called from `trans`.
    fn pred_body(&mut self, body: &FormulaAst, ctx: &Ctx) -> Result<Formula, ResolveError> {
        let mut ctx = ctx.clone();
        ctx.in_trans = false;
        // Primes are legal here; temporal operators are too. Both are
        // validated again when the body is inlined at a call site.
        self.formula_with(body, &ctx, true)
    }

    fn formula(&mut self, f: &FormulaAst, ctx: &Ctx) -> Result<Formula, ResolveError> {
        self.formula_with(f, ctx, false)
    }

    fn formula_with(
        &mut self,
        f: &FormulaAst,
        ctx: &Ctx,
        primes_ok: bool,
    ) -> Result<Formula, ResolveError> {
        let sub = |me: &mut Self, g: &FormulaAst| me.formula_with(g, ctx, primes_ok);
        Ok(match &f.kind {
            FormulaKind::True => Formula::True,
            FormulaKind::False => Formula::False,
            FormulaKind::Not(g) => Formula::not(sub(self, g)?),
            FormulaKind::And(a, b) => Formula::and(sub(self, a)?, sub(self, b)?),
            FormulaKind::Or(a, b) => Formula::or(sub(self, a)?, sub(self, b)?),
            FormulaKind::Implies(a, b) => Formula::implies(sub(self, a)?, sub(self, b)?),
            FormulaKind::Next(g)
            | FormulaKind::Always(g)
            | FormulaKind::Eventually(g) => {
                if ctx.in_trans {
                    return Err(ResolveError::TemporalInTransition(f.span));
                }
                let g = Box::new(sub(self, g)?);
                match &f.kind {
                    FormulaKind::Next(_) => Formula::Next(g),
                    FormulaKind::Always(_) => Formula::Always(g),
                    _ => Formula::Eventually(g),
                }
            }
            FormulaKind::Until(a, b) | FormulaKind::Release(a, b) => {
                if ctx.in_trans {
                    return Err(ResolveError::TemporalInTransition(f.span));
                }
                let (a, b) = (Box::new(sub(self, a)?), Box::new(sub(self, b)?));
                if matches!(f.kind, FormulaKind::Until(..)) {
                    Formula::Until(a, b)
                } else {
                    Formula::Release(a, b)
                }
            }
            FormulaKind::Quant(q, binds, body) => {
                let mut ctx = ctx.clone();
                let mut bound = Vec::new();
                for (name, dom) in binds {
                    let domain = self.unary_domain_with(dom, &ctx, primes_ok)?;
                    let v = self.fresh(&name.name);
                    ctx.env.push((name.name.clone(), Binding::Var(v.clone())));
                    bound.push((v, domain));
                }
                let body = self.formula_with(body, &ctx, primes_ok)?;
                bound.into_iter().rev().fold(body, |acc, (v, d)| {
                    Formula::quant(*q, v, d, acc)
                })
            }
            FormulaKind::Card(op, e) => Formula::Card(*op, self.expr(e, ctx, primes_ok)?),
            FormulaKind::In(a, b) | FormulaKind::Eq(a, b) => {
                let (a, b) = self.same_arity(a, b, ctx, primes_ok, f.span)?;
                if matches!(f.kind, FormulaKind::In(..)) {
                    Formula::In(a, b)
                } else {
                    Formula::Eq(a, b)
                }
            }
            FormulaKind::Call(name, args) => self.call(name, args, ctx, primes_ok)?,
        })
    }

    fn call(
        &mut self,
        name: &Ident,
        args: &[ExprAst],
        ctx: &Ctx,
        primes_ok: bool,
    ) -> Result<Formula, ResolveError> {
        let pred = *self
            .preds
            .get(&name.name)
            .ok_or_else(|| ResolveError::Unknown(name.span, name.name.clone()))?;
        if self.stack.contains(&name.name) {
            return Err(ResolveError::Recursion(name.span, name.name.clone()));
        }
        if pred.params.len() != args.len() {
            return Err(ResolveError::ArgumentCount(
                name.span,
                name.name.clone(),
                pred.params.len(),
                args.len(),
            ));
        }
        let mut inner = Ctx {
            env: Vec::new(),
            in_trans: ctx.in_trans,
        };
        for ((pname, _), arg) in pred.params.iter().zip(args) {
            let e = self.expr(arg, ctx, primes_ok)?;
            if e.arity() != 1 {
                return Err(ResolveError::Arity(
                    arg.span,
                    format!("argument for `{}` must be unary, found arity {}", pname.name, e.arity()),
                ));
            }
            inner.env.push((pname.name.clone(), Binding::Expr(e)));
        }
        self.stack.push(name.name.clone());
        let body = self.formula_with(&pred.body, &inner, primes_ok);
        self.stack.pop();
        body
    }

    fn unary_domain(&mut self, e: &ExprAst, ctx: &Ctx) -> Result<Expr, ResolveError> {
        self.unary_domain_with(e, ctx, false)
    }

    fn unary_domain_with(
        &mut self,
        e: &ExprAst,
        ctx: &Ctx,
        primes_ok: bool,
    ) -> Result<Expr, ResolveError> {
        let d = self.expr(e, ctx, primes_ok)?;
        if d.arity() != 1 {
            return Err(ResolveError::Arity(
                e.span,
                format!("quantifier domain must be unary, found arity {}", d.arity()),
            ));
        }
        Ok(d)
    }

    fn same_arity(
        &mut self,
        a: &ExprAst,
        b: &ExprAst,
        ctx: &Ctx,
        primes_ok: bool,
        span: Span,
    ) -> Result<(Expr, Expr), ResolveError> {
        let a = self.expr(a, ctx, primes_ok)?;
        let b = self.expr(b, ctx, primes_ok)?;
        unify(a, b, span)
    }

    fn expr(&mut self, e: &ExprAst, ctx: &Ctx, primes_ok: bool) -> Result<Expr, ResolveError> {
        let sub = |me: &mut Self, x: &ExprAst| me.expr(x, ctx, primes_ok);
        Ok(match &e.kind {
            ExprKind::None => Expr::None(1),
            ExprKind::Name(n) => {
                if let Some(b) = ctx.lookup(n) {
                    return Ok(match b {
                        Binding::Var(v) => Expr::Var(v.clone()),
                        Binding::Expr(x) => x.clone(),
                    });
                }
                if let Some(s) = self.spec.sig_id(n) {
                    Expr::Sig(s)
                } else if let Some(f) = self.spec.field_id(n) {
                    Expr::Field {
                        id: f,
                        arity: self.field_arity(f),
                    }
                } else if n == STATE_SIG {
                    return Err(ResolveError::Reserved(e.span, n.clone()));
                } else if self.preds.contains_key(n) {
                    return Err(ResolveError::WrongKind(e.span, n.clone(), "relation"));
                } else {
                    return Err(ResolveError::Unknown(e.span, n.clone()));
                }
            }
            ExprKind::Primed(n) => {
                let f = self
                    .spec
                    .field_id(n)
                    .ok_or_else(|| ResolveError::Unknown(e.span, n.clone()))?;
                if !self.spec.field(f).mutable {
                    return Err(ResolveError::PrimeOnImmutable(e.span, n.clone()));
                }
                if !ctx.in_trans && !primes_ok {
                    return Err(ResolveError::PrimeOutsideTransition(e.span, n.clone()));
                }
                Expr::Primed {
                    id: f,
                    arity: self.field_arity(f),
                }
            }
            ExprKind::Join(a, b) => {
                let (a, b) = (sub(self, a)?, sub(self, b)?);
                if a.arity() + b.arity() < 3 {
                    return Err(ResolveError::Arity(
                        e.span,
                        format!(
                            "join of arities {} and {} is empty",
                            a.arity(),
                            b.arity()
                        ),
                    ));
                }
                Expr::join(a, b)
            }
            ExprKind::Union(a, b) | ExprKind::Inter(a, b) | ExprKind::Diff(a, b) => {
                let (a, b) = (sub(self, a)?, sub(self, b)?);
                let (a, b) = unify(a, b, e.span)?;
                let (a, b) = (Box::new(a), Box::new(b));
                match &e.kind {
                    ExprKind::Union(..) => Expr::Union(a, b),
                    ExprKind::Inter(..) => Expr::Inter(a, b),
                    _ => Expr::Diff(a, b),
                }
            }
            ExprKind::Product(a, b) => Expr::product(sub(self, a)?, sub(self, b)?),
            ExprKind::Closure(a) | ExprKind::RClosure(a) => {
                let a = sub(self, a)?;
                if a.arity() != 2 {
                    return Err(ResolveError::Arity(
                        e.span,
                        format!("closure needs a binary relation, found arity {}", a.arity()),
                    ));
                }
                if let [Some(l), Some(r)] = column_sigs(&self.spec, &a)[..] {
                    if l != r {
                        self.spec.warnings.push(Warning {
                            line: e.span.line,
                            col: e.span.col,
                            message: format!(
                                "closure of a relation from `{}` to `{}` is not square",
                                self.spec.sig(l).name,
                                self.spec.sig(r).name
                            ),
                        });
                    }
                }
                if matches!(e.kind, ExprKind::Closure(_)) {
                    Expr::Closure(Box::new(a))
                } else {
                    Expr::RClosure(Box::new(a))
                }
            }
        })
    }

    fn field_arity(&self, f: FieldId) -> usize {
        self.spec.field(f).arity()
    }
}

fn unknown_sig(id: &Ident) -> ResolveError {
    ResolveError::Unknown(id.span, id.name.clone())
}

/// Checks equal arity, letting `none` adopt the arity of the other side.
fn unify(a: Expr, b: Expr, span: Span) -> Result<(Expr, Expr), ResolveError> {
    match (&a, &b) {
        (Expr::None(_), _) => Ok((Expr::None(b.arity()), b)),
        (_, Expr::None(_)) => {
            let n = a.arity();
            Ok((a, Expr::None(n)))
        }
        _ if a.arity() == b.arity() => Ok((a, b)),
        _ => Err(ResolveError::Arity(
            span,
            format!("operands have arities {} and {}", a.arity(), b.arity()),
        )),
    }
}

/// Best-effort column signatures of an expression, `None` where unknown.
pub(crate) fn column_sigs(spec: &Spec, e: &Expr) -> Vec<Option<SigId>> {
    match e {
        Expr::Sig(s) => vec![Some(*s)],
        Expr::Field { id, .. } | Expr::Primed { id, .. } => {
            spec.field(*id).column_sigs().into_iter().map(Some).collect()
        }
        Expr::Var(_) => vec![None],
        Expr::None(n) => vec![None; *n],
        Expr::Join(a, b) => {
            let (a, b) = (column_sigs(spec, a), column_sigs(spec, b));
            a[..a.len() - 1].iter().chain(&b[1..]).copied().collect()
        }
        Expr::Union(a, b) | Expr::Inter(a, b) | Expr::Diff(a, b) => {
            let (a, b) = (column_sigs(spec, a), column_sigs(spec, b));
            a.iter()
                .zip(&b)
                .map(|(x, y)| if x == y { *x } else { x.or(*y) })
                .collect()
        }
        Expr::Product(a, b) => {
            let mut v = column_sigs(spec, a);
            v.extend(column_sigs(spec, b));
            v
        }
        Expr::Closure(a) | Expr::RClosure(a) => column_sigs(spec, a),
    }
}
