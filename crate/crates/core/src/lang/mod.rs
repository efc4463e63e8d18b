//! Surface language: lexing, parsing, printing and name resolution.
//!
//! The language is a small Alloy-like subset extended with LTL operators
//! (`X`, `G`, `F`, `U`, `R`), `var` fields and primed field references.

pub mod ast;
mod lexer;
mod parser;
pub mod pretty;
pub mod resolve;

use std::fmt;

pub use pretty::pretty_print;
pub use resolve::{resolve, ResolveError};

/// Syntax error with the furthest position reached and what could have
/// appeared there.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: syntax error: expected {}, found {}",
            self.line,
            self.col,
            self.expected.join(" or "),
            self.found
        )
    }
}

/// Parses specification source into an unresolved tree.
pub fn parse_spec(text: &str) -> Result<ast::SpecAst, ParseError> {
    parser::Parser::new(text)?.parse_spec()
}

/// Parses a single formula (binary temporal operators allowed at top level).
pub fn parse_formula(text: &str) -> Result<ast::FormulaAst, ParseError> {
    parser::Parser::new(text)?.parse_formula_only()
}

/// Whether `word` is reserved by the surface language.
pub fn is_keyword(word: &str) -> bool {
    lexer::Tok::is_reserved(word)
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
}

/// Parses and resolves in one step.
pub fn load_spec(text: &str) -> Result<crate::spec::Spec, LoadError> {
    let ast = parse_spec(text)?;
    Ok(resolve(&ast)?)
}

#[cfg(test)]
mod tests {
    use super::ast::*;
    use super::*;
    use crate::spec::Mult;

    #[test]
    fn parses_immutable_field() {
        let ast = parse_spec("sig P { pifp : set P }").unwrap();
        assert_eq!(
            ast.decls,
            vec![Decl::Sig(SigDecl {
                name: Ident::new("P"),
                fields: vec![FieldDecl {
                    name: Ident::new("pifp"),
                    mutable: false,
                    columns: vec![(Some(Mult::Set), Ident::new("P"))],
                }],
            })]
        );
    }

    #[test]
    fn parses_var_field() {
        let ast = parse_spec("sig C { var messages : set M }").unwrap();
        let Decl::Sig(sig) = &ast.decls[0] else {
            panic!("expected sig")
        };
        assert!(sig.fields[0].mutable);
        assert_eq!(sig.fields[0].columns, vec![(Some(Mult::Set), Ident::new("M"))]);
    }

    #[test]
    fn parser_does_not_resolve_names() {
        let ast = parse_spec("assert A { G (x in y) }").unwrap();
        assert_eq!(ast.decls.len(), 1);
        assert!(resolve(&ast).is_err());
    }

    #[test]
    fn shared_field_declarations_expand() {
        let ast = parse_spec("sig M { to, from : one P } sig P {}").unwrap();
        let Decl::Sig(sig) = &ast.decls[0] else {
            panic!()
        };
        let names: Vec<&str> = sig.fields.iter().map(|f| f.name.name.as_str()).collect();
        assert_eq!(names, ["to", "from"]);
    }

    #[test]
    fn syntax_error_reports_position_and_expected() {
        let err = parse_spec("sig P {\n  f : set\n}").unwrap_err();
        assert_eq!((err.line, err.col), (3, 1));
        assert!(err.expected.contains(&"identifier".to_string()));
        assert_eq!(err.found, "`}`");
    }

    #[test]
    fn unparenthesised_until_is_rejected() {
        assert!(parse_formula("p in q U r in s").is_ok());
        let err = parse_formula("some x : A | x in q U r in s").unwrap_err();
        assert_eq!(err.found, "`U`");
        assert!(parse_formula("(some x : A | x in q) U r in s").is_ok());
        assert!(parse_formula("some x : A | (x in q U r in s)").is_ok());
        assert!(parse_formula("a in b and (p in q U r in s)").is_ok());
        // U/R are non-associative
        assert!(parse_formula("a in a U b in b U c in c").is_err());
        assert!(parse_formula("X (p in q U r in s) R t in t").is_ok());
    }

    #[test]
    fn precedence_of_connectives() {
        let f = parse_formula("a in b and c in d implies e in f or g in h").unwrap();
        let FormulaKind::Implies(lhs, rhs) = f.kind else {
            panic!("implies binds loosest")
        };
        assert!(matches!(lhs.kind, FormulaKind::And(..)));
        assert!(matches!(rhs.kind, FormulaKind::Or(..)));
    }

    #[test]
    fn join_binds_tighter_than_arrow_and_union() {
        let f = parse_formula("x = s - m.from.port->m + m.to.port->m").unwrap();
        let FormulaKind::Eq(_, rhs) = f.kind else { panic!() };
        let ExprKind::Union(diff, prod) = rhs.kind else {
            panic!("union at top: {rhs:?}")
        };
        assert!(matches!(diff.kind, ExprKind::Diff(..)));
        let ExprKind::Product(l, _) = prod.kind else { panic!() };
        assert!(matches!(l.kind, ExprKind::Join(..)));
    }

    #[test]
    fn parenthesised_expression_and_formula_disambiguate() {
        let f = parse_formula("(a + b) in c").unwrap();
        assert!(matches!(f.kind, FormulaKind::In(..)));
        let f = parse_formula("((a + b) in c) and (d in e)").unwrap();
        assert!(matches!(f.kind, FormulaKind::And(..)));
    }

    #[test]
    fn block_juxtaposition_conjoins() {
        let ast = parse_spec("fact Ax { a in b\n c in d }").unwrap();
        let Decl::Fact(d) = &ast.decls[0] else { panic!() };
        assert!(matches!(d.body.kind, FormulaKind::And(..)));
    }

    #[test]
    fn comments_are_skipped() {
        let ast = parse_spec("-- a comment\nsig A {} // another\n").unwrap();
        assert_eq!(ast.decls.len(), 1);
    }
}
