//! The expression language for functionals.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary ("*" unary)*
//! unary := "-" unary | power
//! power := atom ("^" INT)?
//! atom  := INT ("/" INT)? | IDENT | "(" expr ")"
//! ```
//!
//! `p/q` is only a rational literal; functionals cannot be divided.

use std::sync::Arc;

use stomoyal_core::prelude::*;

use crate::diagnostics::{Code, Diagnostic};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier {s:?}"),
            Token::Int(s) => format!("number {s}"),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Caret => "'^'".into(),
            Token::Slash => "'/'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '^' => Token::Caret,
            '/' => Token::Slash,
            '(' => Token::LParen,
            ')' => Token::RParen,
            c if c.is_ascii_digit() => {
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Token::Int(chars[start..=i].iter().collect())
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Token::Ident(chars[start..=i].iter().collect())
            }
            other => {
                return Err(expr_error(src, start, format!("unexpected character {other:?}")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

fn expr_error(src: &str, pos: usize, msg: String) -> Diagnostic {
    Diagnostic::new(Code::Expression, format!("{msg} at column {} of expression {src:?}", pos + 1))
}

/// Resolves an identifier to a functional, or `None` when unknown.
pub trait Scope {
    fn atlas(&self) -> &Arc<VariableAtlas>;
    fn lookup(&self, name: &str) -> Option<Polynomial>;
}

struct Parser<'a, S: Scope> {
    src: &'a str,
    tokens: Vec<(Token, usize)>,
    pos: usize,
    scope: &'a S,
}

impl<S: Scope> Parser<'_, S> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.src.chars().count(), |(_, o)| *o)
    }

    fn error(&self, msg: impl Into<String>) -> Diagnostic {
        expr_error(self.src, self.offset(), msg.into())
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, Diagnostic> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, Diagnostic> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, Diagnostic> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, Diagnostic> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let Some(Token::Int(digits)) = self.peek().cloned() else {
            return Err(self.unexpected("a nonnegative integer exponent"));
        };
        let exp = digits
            .parse::<u32>()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| self.error(format!("exponent {digits} exceeds the limit {MAX_EXPONENT}")))?;
        self.pos += 1;
        Ok(base.pow(exp))
    }

    fn atom(&mut self) -> Result<Polynomial, Diagnostic> {
        let start = self.offset();
        match self.peek().cloned() {
            Some(Token::Int(num)) => {
                self.pos += 1;
                let mut literal = num;
                if self.peek() == Some(&Token::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Token::Int(den)) => {
                            self.pos += 1;
                            literal = format!("{literal}/{den}");
                        }
                        _ => return Err(self.unexpected("an integer denominator (functionals cannot be divided)")),
                    }
                }
                let q = parse_rational(&literal).map_err(|e| {
                    Diagnostic::new(
                        Code::MalformedRational,
                        format!("{e} at column {} of expression {:?}", start + 1, self.src),
                    )
                })?;
                Ok(Polynomial::constant(self.scope.atlas(), q))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                self.scope.lookup(&name).ok_or_else(|| {
                    Diagnostic::new(
                        Code::UnresolvedVariable,
                        format!("unresolved name {name:?} at column {} of expression {:?}", start + 1, self.src),
                    )
                })
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.unexpected("')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, a name or '('")),
        }
    }
}

/// Parses `src` into a polynomial, resolving identifiers through `scope`.
pub fn parse_expression<S: Scope>(src: &str, scope: &S) -> Result<Polynomial, Diagnostic> {
    let tokens = tokenize(src)?;
    let mut p = Parser { src, tokens, pos: 0, scope };
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    let poly = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(poly)
}

/// A scope containing only the atlas variables.
pub struct AtlasScope<'a>(pub &'a Arc<VariableAtlas>);

impl Scope for AtlasScope<'_> {
    fn atlas(&self) -> &Arc<VariableAtlas> {
        self.0
    }

    fn lookup(&self, name: &str) -> Option<Polynomial> {
        Polynomial::variable(self.0, name).ok()
    }
}
