//! A syntax checker for the subset of Alloy the exporter writes: modules,
//! `open`, signatures with fields, facts, assertions, predicates, functions
//! and commands, with the usual formula and expression precedence.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct AlloySyntaxError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Num(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of file"),
        }
    }
}

const SYMBOLS: &[&str] = &[
    "<=>", "=>", "->", "<:", ":>", "++", "!=", "=<", ">=", "&&", "||", "{", "}", "[", "]", "(", ")",
    ",", ":", "|", ".", "^", "*", "~", "+", "-", "&", "=", "<", ">", "!", "#", "@", ";", "/", "'",
];

const KEYWORDS: &[&str] = &[
    "abstract", "all", "and", "as", "assert", "but", "check", "disj", "else", "exactly", "expect",
    "extends", "fact", "for", "fun", "iden", "iff", "implies", "in", "let", "lone", "module", "no",
    "none", "not", "one", "open", "or", "pred", "private", "run", "set", "sig", "some", "sum",
    "this", "univ", "var",
];

fn tokenize(src: &str) -> Result<Vec<(Tok, u32, u32)>, AlloySyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1u32, 1u32);
    let mut out = Vec::new();
    let advance = |i: &mut usize, line: &mut u32, col: &mut u32, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
        } else if (c == '-' && next == Some('-')) || (c == '/' && next == Some('/')) {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
        } else if c == '/' && next == Some('*') {
            let (l0, c0) = (line, col);
            advance(&mut i, &mut line, &mut col, 2);
            loop {
                if i + 1 >= chars.len() {
                    return Err(AlloySyntaxError {
                        line: l0,
                        col: c0,
                        message: "unterminated comment".into(),
                    });
                }
                if chars[i] == '*' && chars[i + 1] == '/' {
                    advance(&mut i, &mut line, &mut col, 2);
                    break;
                }
                advance(&mut i, &mut line, &mut col, 1);
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            let (l0, c0) = (line, col);
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '\'' | '"')) {
                advance(&mut i, &mut line, &mut col, 1);
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
        } else if c.is_ascii_digit() {
            let start = i;
            let (l0, c0) = (line, col);
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col, 1);
            }
            out.push((Tok::Num(chars[start..i].iter().collect()), l0, c0));
        } else {
            let rest: String = chars[i..(i + 3).min(chars.len())].iter().collect();
            let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                return Err(AlloySyntaxError {
                    line,
                    col,
                    message: format!("unexpected character `{c}`"),
                });
            };
            out.push((Tok::Sym(sym), line, col));
            advance(&mut i, &mut line, &mut col, sym.chars().count());
        }
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

/// Checks `src` and reports the first syntax error.
pub fn validate_alloy(src: &str) -> Result<(), AlloySyntaxError> {
    let mut p = P {
        toks: tokenize(src)?,
        pos: 0,
    };
    p.file()
}

type R<T> = Result<T, AlloySyntaxError>;

struct P {
    toks: Vec<(Tok, u32, u32)>,
    pos: usize,
}

impl P {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
    }

    fn err<T>(&self, what: &str) -> R<T> {
        let (tok, line, col) = &self.toks[self.pos];
        Err(AlloySyntaxError {
            line: *line,
            col: *col,
            message: format!("expected {what}, found {tok}"),
        })
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        let hit = self.is_kw(kw);
        if hit {
            self.bump();
        }
        hit
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn sym(&mut self, s: &str) -> R<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(&format!("`{s}`"))
        }
    }

    fn name(&mut self) -> R<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("a name"),
        }
    }

    /// `a/b/c`
    fn qualified(&mut self) -> R<String> {
        let mut n = self.name()?;
        while self.is_sym("/") {
            self.bump();
            n.push('/');
            n.push_str(&self.name()?);
        }
        Ok(n)
    }

    fn file(&mut self) -> R<()> {
        if self.eat_kw("module") {
            self.qualified()?;
            if self.eat_sym("[") {
                loop {
                    self.eat_kw("exactly");
                    self.name()?;
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.sym("]")?;
            }
        }
        while self.eat_kw("open") {
            self.qualified()?;
            if self.eat_sym("[") {
                loop {
                    self.qualified()?;
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.sym("]")?;
            }
            if self.eat_kw("as") {
                self.name()?;
            }
        }
        while *self.peek() != Tok::Eof {
            self.paragraph()?;
        }
        Ok(())
    }

    fn paragraph(&mut self) -> R<()> {
        self.eat_kw("private");
        let mut sig_mods = false;
        while ["abstract", "one", "lone", "some", "var"].iter().any(|k| self.is_kw(k)) {
            self.bump();
            sig_mods = true;
        }
        if self.eat_kw("sig") {
            return self.sig();
        }
        if sig_mods {
            return self.err("`sig`");
        }
        if self.eat_kw("fact") {
            if !self.is_sym("{") {
                self.name()?;
            }
            return self.block();
        }
        if self.eat_kw("assert") {
            self.name()?;
            return self.block();
        }
        if self.eat_kw("pred") {
            self.name()?;
            self.params()?;
            return self.block();
        }
        if self.eat_kw("fun") {
            self.name()?;
            self.params()?;
            self.sym(":")?;
            self.mult();
            self.expr()?;
            return self.expr_block();
        }
        if self.is_kw("check") || self.is_kw("run") {
            self.bump();
            if self.is_sym("{") {
                self.block()?;
            } else {
                self.name()?;
            }
            if self.eat_kw("for") {
                self.scope()?;
            }
            if self.eat_kw("expect") {
                self.num()?;
            }
            return Ok(());
        }
        self.err("a paragraph")
    }

    fn num(&mut self) -> R<()> {
        match self.peek() {
            Tok::Num(_) => {
                self.bump();
                Ok(())
            }
            _ => self.err("a number"),
        }
    }

    fn scope(&mut self) -> R<()> {
        // `for N` or `for N but ...` or `for [exactly] N Sig, ...`
        if matches!(self.peek(), Tok::Num(_)) && !matches!(self.peek_at(1), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
        {
            self.num()?;
            if !self.eat_kw("but") {
                return Ok(());
            }
        }
        loop {
            self.eat_kw("exactly");
            self.num()?;
            self.qualified()?;
            if !self.eat_sym(",") {
                return Ok(());
            }
        }
    }

    fn sig(&mut self) -> R<()> {
        loop {
            self.name()?;
            if !self.eat_sym(",") {
                break;
            }
        }
        if self.eat_kw("extends") || self.eat_kw("in") {
            self.qualified()?;
        }
        self.sym("{")?;
        if !self.is_sym("}") {
            loop {
                self.decl(true)?;
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.sym("}")?;
        if self.is_sym("{") {
            self.block()?;
        }
        Ok(())
    }

    fn params(&mut self) -> R<()> {
        if self.eat_sym("[") {
            if !self.is_sym("]") {
                loop {
                    self.decl(false)?;
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            }
            self.sym("]")?;
        }
        Ok(())
    }

    fn mult(&mut self) -> bool {
        for k in ["one", "lone", "some", "set"] {
            if self.eat_kw(k) {
                return true;
            }
        }
        false
    }

    /// `[var] [disj] a, b : [mult] expr`
    fn decl(&mut self, field: bool) -> R<()> {
        if field {
            self.eat_kw("var");
        }
        self.eat_kw("disj");
        loop {
            self.name()?;
            if !self.eat_sym(",") {
                break;
            }
        }
        self.sym(":")?;
        self.eat_kw("disj");
        self.mult();
        self.expr()
    }

    fn block(&mut self) -> R<()> {
        self.sym("{")?;
        while !self.is_sym("}") {
            if *self.peek() == Tok::Eof {
                return self.err("`}`");
            }
            self.formula()?;
        }
        self.sym("}")
    }

    fn expr_block(&mut self) -> R<()> {
        self.sym("{")?;
        self.expr()?;
        self.sym("}")
    }

    fn formula(&mut self) -> R<()> {
        self.or_formula()
    }

    fn or_formula(&mut self) -> R<()> {
        self.iff_formula()?;
        while self.eat_kw("or") || self.eat_sym("||") {
            self.iff_formula()?;
        }
        Ok(())
    }

    fn iff_formula(&mut self) -> R<()> {
        self.implies_formula()?;
        while self.eat_kw("iff") || self.eat_sym("<=>") {
            self.implies_formula()?;
        }
        Ok(())
    }

    fn implies_formula(&mut self) -> R<()> {
        self.and_formula()?;
        if self.eat_kw("implies") || self.eat_sym("=>") {
            self.implies_formula()?;
            if self.eat_kw("else") {
                self.implies_formula()?;
            }
        }
        Ok(())
    }

    fn and_formula(&mut self) -> R<()> {
        self.unary_formula()?;
        while self.eat_kw("and") || self.eat_sym("&&") {
            self.unary_formula()?;
        }
        Ok(())
    }

    fn unary_formula(&mut self) -> R<()> {
        if self.eat_kw("not") || self.eat_sym("!") {
            return self.unary_formula();
        }
        let quant = ["all", "some", "no", "one", "lone"].iter().any(|k| self.is_kw(k));
        if quant && self.is_binding() {
            self.bump();
            loop {
                self.decl(false)?;
                if !self.eat_sym(",") {
                    break;
                }
            }
            if self.is_sym("{") {
                return self.block();
            }
            self.sym("|")?;
            return self.formula();
        }
        if self.is_sym("{") {
            return self.block();
        }
        self.atom()
    }

    /// After a quantifier keyword: `[disj] x [, y] :` rather than an
    /// expression (`some x.f`).
    fn is_binding(&self) -> bool {
        let mut i = 1;
        if matches!(self.peek_at(i), Tok::Ident(s) if s == "disj") {
            i += 1;
        }
        loop {
            match self.peek_at(i) {
                Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {}
                _ => return false,
            }
            match self.peek_at(i + 1) {
                Tok::Sym(":") => return true,
                Tok::Sym(",") => i += 2,
                _ => return false,
            }
        }
    }

    /// Comparison, cardinality test, predicate call, or a parenthesised
    /// formula.
    fn atom(&mut self) -> R<()> {
        if ["no", "some", "lone", "one", "set"].iter().any(|k| self.is_kw(k)) {
            self.bump();
            return self.expr();
        }
        let start = self.pos;
        if self.is_sym("(") {
            // try `(formula)` when the group is not an expression operand
            self.bump();
            if self.formula().is_ok() && self.eat_sym(")") && !self.continues_expr() {
                return Ok(());
            }
            self.pos = start;
        }
        self.expr()?;
        self.eat_kw("not");
        self.eat_sym("!");
        for op in ["=", "!=", "<", ">", "=<", ">="] {
            if self.eat_sym(op) {
                return self.expr();
            }
        }
        if self.eat_kw("in") {
            return self.expr();
        }
        Ok(())
    }

    fn continues_expr(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Sym(".") | Tok::Sym("->") | Tok::Sym("+") | Tok::Sym("-") | Tok::Sym("&") | Tok::Sym("=")
                | Tok::Sym("!=") | Tok::Sym("[") | Tok::Sym("<:") | Tok::Sym(":>") | Tok::Sym("++")
        ) || self.is_kw("in")
    }

    fn expr(&mut self) -> R<()> {
        self.intersect()?;
        while self.eat_sym("+") || self.eat_sym("-") || self.eat_sym("++") {
            self.intersect()?;
        }
        Ok(())
    }

    fn intersect(&mut self) -> R<()> {
        self.arrow()?;
        while self.eat_sym("&") {
            self.arrow()?;
        }
        Ok(())
    }

    fn arrow(&mut self) -> R<()> {
        self.restrict()?;
        loop {
            // `A one -> lone B`
            let save = self.pos;
            self.mult();
            if self.eat_sym("->") {
                self.mult();
                self.restrict()?;
            } else {
                self.pos = save;
                return Ok(());
            }
        }
    }

    fn restrict(&mut self) -> R<()> {
        self.join()?;
        while self.eat_sym("<:") || self.eat_sym(":>") {
            self.join()?;
        }
        Ok(())
    }

    fn join(&mut self) -> R<()> {
        self.unary_expr()?;
        loop {
            if self.eat_sym(".") {
                self.unary_expr()?;
            } else if self.is_sym("[") {
                self.bump();
                if !self.is_sym("]") {
                    loop {
                        self.expr()?;
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.sym("]")?;
            } else {
                return Ok(());
            }
        }
    }

    fn unary_expr(&mut self) -> R<()> {
        if self.eat_sym("~") || self.eat_sym("^") || self.eat_sym("*") || self.eat_sym("#") {
            return self.unary_expr();
        }
        match self.peek().clone() {
            Tok::Ident(s) if ["none", "univ", "iden", "this"].contains(&s.as_str()) => {
                self.bump();
                Ok(())
            }
            Tok::Ident(_) => {
                self.eat_sym("@");
                self.qualified().map(|_| ())
            }
            Tok::Num(_) => self.num(),
            Tok::Sym("@") => {
                self.bump();
                self.qualified().map(|_| ())
            }
            Tok::Sym("(") => {
                self.bump();
                self.expr()?;
                self.sym(")")
            }
            Tok::Sym("{") => {
                self.bump();
                loop {
                    self.decl(false)?;
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.sym("|")?;
                self.formula()?;
                self.sym("}")
            }
            _ => self.err("an expression"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_typical_alloy() {
        let src = "
            module m
            open util/ordering[State] as ord
            sig State {}
            abstract sig A { f : set A, g : A one -> lone State }
            one sig B extends A {}
            fact { all a : A | some a.f implies no a.(f & ~f) }
            fact Named { all disj x, y : A | x.f != y.f or x = y }
            pred p [a : A] { a in A.^f and #a.f > 1 }
            fun h : A -> A { f + (A <: f) }
            assert X { all s : State | (some s) or (no s) }
            check X for 3 but exactly 2 A
            run p for exactly 1 A, 2 State
        ";
        validate_alloy(src).unwrap();
    }

    #[test]
    fn rejects_broken_text() {
        assert!(validate_alloy("sig A { f : }").is_err());
        assert!(validate_alloy("fact { all a : A | }").is_err());
        assert!(validate_alloy("sig sig {}").is_err());
        assert!(validate_alloy("pred p { a in }").is_err());
        let e = validate_alloy("sig A {}\nfact { some A.( }").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
