use std::fmt;

use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u32),
    // keywords
    Sig,
    Var,
    Fact,
    Trans,
    Pred,
    Assert,
    Check,
    Run,
    Scope,
    Exactly,
    Set,
    One,
    Lone,
    Some,
    No,
    All,
    Not,
    And,
    Or,
    Implies,
    In,
    None,
    True,
    False,
    Next,
    Always,
    Eventually,
    Until,
    Release,
    // punctuation
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Colon,
    Bar,
    Dot,
    Amp,
    Plus,
    Minus,
    Arrow,
    Star,
    Caret,
    Prime,
    Equals,
    Eof,
}

impl Tok {
    fn keyword(word: &str) -> Option<Tok> {
        Some(match word {
            "sig" => Tok::Sig,
            "var" => Tok::Var,
            "fact" => Tok::Fact,
            "trans" => Tok::Trans,
            "pred" => Tok::Pred,
            "assert" => Tok::Assert,
            "check" => Tok::Check,
            "run" => Tok::Run,
            "scope" => Tok::Scope,
            "exactly" => Tok::Exactly,
            "set" => Tok::Set,
            "one" => Tok::One,
            "lone" => Tok::Lone,
            "some" => Tok::Some,
            "no" => Tok::No,
            "all" => Tok::All,
            "not" => Tok::Not,
            "and" => Tok::And,
            "or" => Tok::Or,
            "implies" => Tok::Implies,
            "in" => Tok::In,
            "none" => Tok::None,
            "true" => Tok::True,
            "false" => Tok::False,
            "X" => Tok::Next,
            "G" => Tok::Always,
            "F" => Tok::Eventually,
            "U" => Tok::Until,
            "R" => Tok::Release,
            _ => return Option::None,
        })
    }

    /// Reserved words that can never be identifiers.
    pub fn is_reserved(word: &str) -> bool {
        Tok::keyword(word).is_some()
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Int(n) => return write!(f, "integer `{n}`"),
            Tok::Sig => "`sig`",
            Tok::Var => "`var`",
            Tok::Fact => "`fact`",
            Tok::Trans => "`trans`",
            Tok::Pred => "`pred`",
            Tok::Assert => "`assert`",
            Tok::Check => "`check`",
            Tok::Run => "`run`",
            Tok::Scope => "`scope`",
            Tok::Exactly => "`exactly`",
            Tok::Set => "`set`",
            Tok::One => "`one`",
            Tok::Lone => "`lone`",
            Tok::Some => "`some`",
            Tok::No => "`no`",
            Tok::All => "`all`",
            Tok::Not => "`not`",
            Tok::And => "`and`",
            Tok::Or => "`or`",
            Tok::Implies => "`implies`",
            Tok::In => "`in`",
            Tok::None => "`none`",
            Tok::True => "`true`",
            Tok::False => "`false`",
            Tok::Next => "`X`",
            Tok::Always => "`G`",
            Tok::Eventually => "`F`",
            Tok::Until => "`U`",
            Tok::Release => "`R`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::Bar => "`|`",
            Tok::Dot => "`.`",
            Tok::Amp => "`&`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Arrow => "`->`",
            Tok::Star => "`*`",
            Tok::Caret => "`^`",
            Tok::Prime => "`'`",
            Tok::Equals => "`=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Splits source text into tokens. `--` and `//` start line comments.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let advance = |n: usize, i: &mut usize, col: &mut u32| {
            *i += n;
            *col += n as u32;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        let next = chars.get(i + 1).copied();
        if (c == '-' && next == Some('-')) || (c == '/' && next == Some('/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            let tok = Tok::keyword(&word).unwrap_or(Tok::Ident(word));
            out.push(Token { tok, span });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            let n = digits.parse::<u32>().map_err(|_| ParseError {
                line: span.line,
                col: span.col,
                expected: vec!["integer below 2^32".into()],
                found: format!("`{digits}`"),
            })?;
            out.push(Token {
                tok: Tok::Int(n),
                span,
            });
            continue;
        }
        let (tok, len) = match (c, next) {
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('[', _) => (Tok::LBrack, 1),
            (']', _) => (Tok::RBrack, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            (':', _) => (Tok::Colon, 1),
            ('|', _) => (Tok::Bar, 1),
            ('.', _) => (Tok::Dot, 1),
            ('&', _) => (Tok::Amp, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('^', _) => (Tok::Caret, 1),
            ('\'', _) => (Tok::Prime, 1),
            ('=', _) => (Tok::Equals, 1),
            _ => {
                return Err(ParseError {
                    line,
                    col,
                    expected: vec!["token".into()],
                    found: format!("character `{c}`"),
                })
            }
        };
        advance(len, &mut i, &mut col);
        out.push(Token { tok, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}
