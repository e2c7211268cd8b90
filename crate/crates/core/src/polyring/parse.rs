//! Lexer and polynomial literal parser shared by the command line and the
//! setup file format.
//!
//! ```text
//! expr    := ["+" | "-"] term { ("+" | "-") term }
//! term    := factor { "*" factor }
//! factor  := primary [ "^" INT ]
//! primary := INT | IDENT | "(" expr ")" | "-" factor
//! ```

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use super::{GenSignature, IntPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Equals,
    Arrow,
    Newline,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Int(n) => write!(f, "`{n}`"),
            TokenKind::Plus => write!(f, "`+`"),
            TokenKind::Minus => write!(f, "`-`"),
            TokenKind::Star => write!(f, "`*`"),
            TokenKind::Caret => write!(f, "`^`"),
            TokenKind::LParen => write!(f, "`(`"),
            TokenKind::RParen => write!(f, "`)`"),
            TokenKind::LBrace => write!(f, "`{{`"),
            TokenKind::RBrace => write!(f, "`}}`"),
            TokenKind::Comma => write!(f, "`,`"),
            TokenKind::Colon => write!(f, "`:`"),
            TokenKind::Equals => write!(f, "`=`"),
            TokenKind::Arrow => write!(f, "`->`"),
            TokenKind::Newline => write!(f, "end of line"),
            TokenKind::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

impl Token {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, message: message.into() }
    }
}

/// Splits `text` into tokens. `#` starts a comment running to end of line.
/// Consecutive newlines collapse into one token.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out: Vec<Token> = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&ch) = chars.peek() {
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, kind| out.push(Token { kind, line: tl, col: tc });
        match ch {
            '\n' => {
                chars.next();
                if !matches!(out.last(), Some(Token { kind: TokenKind::Newline, .. }) | None) {
                    push(&mut out, TokenKind::Newline);
                }
                line += 1;
                col = 1;
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                push(&mut out, TokenKind::Int(s.parse().expect("digits")));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                push(&mut out, TokenKind::Ident(s));
                continue;
            }
            _ => {}
        }
        chars.next();
        col += 1;
        let kind = match ch {
            '+' => TokenKind::Plus,
            '-' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    TokenKind::Arrow
                } else {
                    TokenKind::Minus
                }
            }
            '*' => TokenKind::Star,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '{' => TokenKind::LBrace,
            '}' => TokenKind::RBrace,
            ',' => TokenKind::Comma,
            ':' => TokenKind::Colon,
            '=' => TokenKind::Equals,
            other => return Err(ParseError { line: tl, col: tc, message: format!("unexpected character `{other}`") }),
        };
        push(&mut out, kind);
    }
    out.push(Token { kind: TokenKind::Eof, line, col });
    Ok(out)
}

/// Cursor over a token vector.
pub struct TokenStream {
    tokens: Vec<Token>,
    pos: usize,
}

impl TokenStream {
    pub fn new(tokens: Vec<Token>) -> Self {
        assert!(matches!(tokens.last(), Some(Token { kind: TokenKind::Eof, .. })));
        TokenStream { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: &TokenKind) -> Result<Token, ParseError> {
        let t = self.bump();
        if &t.kind == kind {
            Ok(t)
        } else {
            Err(t.error(format!("expected {kind}, found {}", t.kind)))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, Token), ParseError> {
        let t = self.bump();
        match &t.kind {
            TokenKind::Ident(s) => Ok((s.clone(), t)),
            other => Err(t.error(format!("expected a name, found {other}"))),
        }
    }

    pub fn expect_int(&mut self) -> Result<(BigInt, Token), ParseError> {
        let t = self.bump();
        match &t.kind {
            TokenKind::Int(n) => Ok((n.clone(), t)),
            other => Err(t.error(format!("expected an integer, found {other}"))),
        }
    }

    pub fn skip_newlines(&mut self) {
        while self.eat(&TokenKind::Newline) {}
    }

    /// Parses one polynomial expression over `sig`, stopping at the first
    /// token that cannot continue it.
    pub fn polynomial(&mut self, sig: &Arc<GenSignature>) -> Result<IntPolynomial, ParseError> {
        let negate = match self.peek().kind {
            TokenKind::Minus => {
                self.bump();
                true
            }
            TokenKind::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term(sig)?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    acc = &acc + &self.term(sig)?;
                }
                TokenKind::Minus => {
                    self.bump();
                    acc = &acc - &self.term(sig)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, sig: &Arc<GenSignature>) -> Result<IntPolynomial, ParseError> {
        let mut acc = self.factor(sig)?;
        while self.eat(&TokenKind::Star) {
            acc = &acc * &self.factor(sig)?;
        }
        Ok(acc)
    }

    fn factor(&mut self, sig: &Arc<GenSignature>) -> Result<IntPolynomial, ParseError> {
        let base = self.primary(sig)?;
        if self.eat(&TokenKind::Caret) {
            let (e, tok) = self.expect_int()?;
            let e: u32 = e.try_into().map_err(|_| tok.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self, sig: &Arc<GenSignature>) -> Result<IntPolynomial, ParseError> {
        let t = self.bump();
        match &t.kind {
            TokenKind::Int(n) => Ok(IntPolynomial::constant(sig, n.clone())),
            TokenKind::Ident(name) => {
                IntPolynomial::generator(sig, name).map_err(|_| t.error(format!("unknown generator `{name}`")))
            }
            TokenKind::LParen => {
                let inner = self.polynomial(sig)?;
                self.expect(&TokenKind::RParen)?;
                Ok(inner)
            }
            TokenKind::Minus => Ok(-&self.factor(sig)?),
            other => Err(t.error(format!("expected a polynomial term, found {other}"))),
        }
    }
}

/// Parses a complete polynomial literal over `sig`. Line breaks are ignored.
pub fn parse_polynomial(text: &str, sig: &Arc<GenSignature>) -> Result<IntPolynomial, ParseError> {
    let tokens = tokenize(text)?.into_iter().filter(|t| t.kind != TokenKind::Newline).collect();
    let mut ts = TokenStream::new(tokens);
    let p = ts.polynomial(sig)?;
    let t = ts.peek();
    if t.kind != TokenKind::Eof {
        return Err(t.error(format!("unexpected {} after polynomial", t.kind)));
    }
    Ok(p)
}
