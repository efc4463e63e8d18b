//! Source printer for unresolved trees. `parse_spec(&pretty_print(&ast))`
//! yields `ast` again.

use super::ast::*;
use crate::spec::Mult;

pub fn pretty_print(spec: &SpecAst) -> String {
    let mut out = String::new();
    for decl in &spec.decls {
        match decl {
            Decl::Sig(sig) => {
                let fields: Vec<String> = sig.fields.iter().map(field).collect();
                if fields.is_empty() {
                    out.push_str(&format!("sig {} {{}}\n", sig.name.name));
                } else {
                    out.push_str(&format!(
                        "sig {} {{\n  {}\n}}\n",
                        sig.name.name,
                        fields.join(",\n  ")
                    ));
                }
            }
            Decl::Fact(d) => {
                out.push_str(&format!("fact {} {{\n  {}\n}}\n", d.name.name, formula_text(&d.body)))
            }
            Decl::Assert(d) => out.push_str(&format!(
                "assert {} {{\n  {}\n}}\n",
                d.name.name,
                formula_text(&d.body)
            )),
            Decl::Trans(t) => out.push_str(&format!("trans {{\n  {}\n}}\n", formula_text(&t.body))),
            Decl::Pred(p) => {
                let params: Vec<String> = p
                    .params
                    .iter()
                    .map(|(n, d)| format!("{} : {}", n.name, expr_text(d)))
                    .collect();
                out.push_str(&format!(
                    "pred {} [{}] {{\n  {}\n}}\n",
                    p.name.name,
                    params.join(", "),
                    formula_text(&p.body)
                ));
            }
            Decl::Command(c) => {
                let target = match &c.target {
                    Target::Name(n) => n.name.clone(),
                    Target::Inline(f) => format!("{{ {} }}", formula_text(f)),
                };
                out.push_str(&format!("{} {}", c.kind.keyword(), target));
                if !c.scopes.is_empty() {
                    let items: Vec<String> = c
                        .scopes
                        .iter()
                        .map(|s| {
                            format!(
                                "{}{} {}",
                                if s.exactly { "exactly " } else { "" },
                                s.bound,
                                s.sig.name
                            )
                        })
                        .collect();
                    out.push_str(&format!(" scope {}", items.join(", ")));
                }
                out.push('\n');
            }
        }
    }
    out
}

fn field(f: &FieldDecl) -> String {
    let cols: Vec<String> = f
        .columns
        .iter()
        .map(|(m, sig)| match m {
            Some(m) => format!("{} {}", mult_kw(*m), sig.name),
            None => sig.name.clone(),
        })
        .collect();
    format!(
        "{}{} : {}",
        if f.mutable { "var " } else { "" },
        f.name.name,
        cols.join(" -> ")
    )
}

fn mult_kw(m: Mult) -> &'static str {
    m.keyword()
}

pub fn formula_text(f: &FormulaAst) -> String {
    let mut out = String::new();
    formula(f, 0, true, &mut out);
    out
}

pub fn expr_text(e: &ExprAst) -> String {
    let mut out = String::new();
    expr(e, 0, &mut out);
    out
}

/// `prec`: 0 implies, 1 or, 2 and, 3 unary operand. `top` marks positions
/// where a quantifier body may extend to the end.
fn formula(f: &FormulaAst, prec: u8, top: bool, out: &mut String) {
    let bin = |a: &FormulaAst, b: &FormulaAst, op: &str, p: u8, out: &mut String| {
        let wrap = prec > p;
        if wrap {
            out.push('(');
        }
        let (lp, rp) = if p == 0 { (1, 0) } else { (p, p + 1) };
        formula(a, lp, false, out);
        out.push_str(op);
        formula(b, rp, false, out);
        if wrap {
            out.push(')');
        }
    };
    match &f.kind {
        FormulaKind::True => out.push_str("true"),
        FormulaKind::False => out.push_str("false"),
        FormulaKind::Not(g) => {
            out.push_str("not ");
            formula(g, 3, false, out);
        }
        FormulaKind::Next(g) => {
            out.push_str("X ");
            formula(g, 3, false, out);
        }
        FormulaKind::Always(g) => {
            out.push_str("G ");
            formula(g, 3, false, out);
        }
        FormulaKind::Eventually(g) => {
            out.push_str("F ");
            formula(g, 3, false, out);
        }
        FormulaKind::And(a, b) => bin(a, b, " and ", 2, out),
        FormulaKind::Or(a, b) => bin(a, b, " or ", 1, out),
        FormulaKind::Implies(a, b) => bin(a, b, " implies ", 0, out),
        FormulaKind::Until(a, b) | FormulaKind::Release(a, b) => {
            let op = if matches!(f.kind, FormulaKind::Until(..)) {
                " U "
            } else {
                " R "
            };
            out.push('(');
            formula(a, 0, false, out);
            out.push_str(op);
            formula(b, 0, false, out);
            out.push(')');
        }
        FormulaKind::Quant(q, binds, body) => {
            if !top {
                out.push('(');
            }
            let bs: Vec<String> = binds
                .iter()
                .map(|(n, d)| format!("{} : {}", n.name, expr_text(d)))
                .collect();
            out.push_str(&format!("{} {} | ", q.keyword(), bs.join(", ")));
            formula(body, 0, true, out);
            if !top {
                out.push(')');
            }
        }
        FormulaKind::Card(op, e) => {
            out.push_str(op.keyword());
            out.push(' ');
            expr(e, 0, out);
        }
        FormulaKind::In(a, b) => {
            expr(a, 0, out);
            out.push_str(" in ");
            expr(b, 0, out);
        }
        FormulaKind::Eq(a, b) => {
            expr(a, 0, out);
            out.push_str(" = ");
            expr(b, 0, out);
        }
        FormulaKind::Call(name, args) => {
            let args: Vec<String> = args.iter().map(expr_text).collect();
            out.push_str(&format!("{}[{}]", name.name, args.join(", ")));
        }
    }
}

/// `prec`: 0 union/diff, 1 intersection, 2 product, 3 join, 4 unary operand.
fn expr(e: &ExprAst, prec: u8, out: &mut String) {
    let bin = |a: &ExprAst, b: &ExprAst, op: &str, p: u8, out: &mut String| {
        if prec > p {
            out.push('(');
        }
        expr(a, p, out);
        out.push_str(op);
        expr(b, p + 1, out);
        if prec > p {
            out.push(')');
        }
    };
    match &e.kind {
        ExprKind::Name(n) => out.push_str(n),
        ExprKind::Primed(n) => {
            out.push_str(n);
            out.push('\'');
        }
        ExprKind::None => out.push_str("none"),
        ExprKind::Union(a, b) => bin(a, b, " + ", 0, out),
        ExprKind::Diff(a, b) => bin(a, b, " - ", 0, out),
        ExprKind::Inter(a, b) => bin(a, b, " & ", 1, out),
        ExprKind::Product(a, b) => bin(a, b, " -> ", 2, out),
        ExprKind::Join(a, b) => bin(a, b, ".", 3, out),
        ExprKind::Closure(a) => {
            out.push('^');
            expr(a, 4, out);
        }
        ExprKind::RClosure(a) => {
            out.push('*');
            expr(a, 4, out);
        }
    }
}
