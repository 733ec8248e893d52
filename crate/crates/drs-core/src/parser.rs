//! Recursive-descent parsers for the term and formula grammars.
//!
//! Term grammar:
//!
//! ```text
//! term  := join
//! join  := meet { ("+" | "|") meet }
//! meet  := unary { ("*" | "&") unary }
//! unary := ("-" | "~") unary | "c" NAT unary | atom
//! atom  := "0" | "1" | IDENT | "(" term ")"
//! ```
//!
//! An identifier starting with `c` followed immediately by digits is read as
//! a cylindrification, so `c0x` means `c0 x`.  Identifiers may contain
//! `@`, `,` and `'` after the first letter; this admits the generator names
//! produced by the formula translation (`R@0,1`).
//!
//! Formula grammar:
//!
//! ```text
//! formula := ("exists" | "forall") VAR "." formula | implies
//! implies := or [ "->" formula ]
//! or      := and { "|" and }
//! and     := funary { "&" funary }
//! funary  := "~" funary | IDENT "(" VAR {"," VAR} ")" | "(" formula ")"
//! VAR     := "v" NAT
//! ```
//!
//! `=` is rejected outright: identity is not a logical symbol in this
//! language.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::term::{Formula, Term};

/// Syntax error with source position (1-based line and column).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Star,
    Minus,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Dot,
    Comma,
    LParen,
    RParen,
    Cyl(u32),
    Number(u64),
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Plus => write!(f, "'+'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Tilde => write!(f, "'~'"),
            Tok::Amp => write!(f, "'&'"),
            Tok::Pipe => write!(f, "'|'"),
            Tok::Arrow => write!(f, "'->'"),
            Tok::Dot => write!(f, "'.'"),
            Tok::Comma => write!(f, "','"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Cyl(i) => write!(f, "'c{i}'"),
            Tok::Number(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    /// `c`+digits is a cylindrification; idents may contain `@ , '`.
    Term,
    /// plain idents; `,` separates argument lists; `->` is a token.
    Formula,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
    mode: Mode,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, mode: Mode) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1, mode }
    }

    fn err(&self, at: (u32, u32), message: String) -> ParseError {
        ParseError { line: at.0, col: at.1, message }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.src.get(self.pos)?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while let Some(b) = self.peek() {
            if b == b' ' || b == b'\t' || b == b'\r' || b == b'\n' {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn is_ident_start(b: u8) -> bool {
        b.is_ascii_alphabetic() || b == b'_'
    }

    fn is_ident_continue(&self, b: u8) -> bool {
        if b.is_ascii_alphanumeric() || b == b'_' {
            return true;
        }
        self.mode == Mode::Term && (b == b'@' || b == b',' || b == b'\'')
    }

    /// Next token plus its starting position.
    fn next_tok(&mut self) -> Result<(Tok, (u32, u32)), ParseError> {
        self.skip_ws();
        let at = (self.line, self.col);
        let Some(b) = self.peek() else {
            return Ok((Tok::Eof, at));
        };
        match b {
            b'+' => {
                self.bump();
                Ok((Tok::Plus, at))
            }
            b'*' => {
                self.bump();
                Ok((Tok::Star, at))
            }
            b'&' => {
                self.bump();
                Ok((Tok::Amp, at))
            }
            b'~' => {
                self.bump();
                Ok((Tok::Tilde, at))
            }
            b'|' => {
                self.bump();
                Ok((Tok::Pipe, at))
            }
            b'(' => {
                self.bump();
                Ok((Tok::LParen, at))
            }
            b')' => {
                self.bump();
                Ok((Tok::RParen, at))
            }
            b'.' => {
                self.bump();
                Ok((Tok::Dot, at))
            }
            b',' => {
                self.bump();
                Ok((Tok::Comma, at))
            }
            b'-' => {
                self.bump();
                if self.mode == Mode::Formula && self.peek() == Some(b'>') {
                    self.bump();
                    Ok((Tok::Arrow, at))
                } else {
                    Ok((Tok::Minus, at))
                }
            }
            b'=' => Err(self.err(
                at,
                "equality is not a logical symbol in this language; \
                 there is no '=' atom"
                    .to_string(),
            )),
            b'0'..=b'9' => {
                let mut n: u64 = 0;
                while let Some(d) = self.peek() {
                    if d.is_ascii_digit() {
                        n = n
                            .checked_mul(10)
                            .and_then(|m| m.checked_add((d - b'0') as u64))
                            .ok_or_else(|| self.err(at, "number too large".to_string()))?;
                        self.bump();
                    } else {
                        break;
                    }
                }
                Ok((Tok::Number(n), at))
            }
            b if Self::is_ident_start(b) => {
                // `c` immediately followed by digits is a cylindrification
                // in term mode.
                if self.mode == Mode::Term
                    && b == b'c'
                    && self.src.get(self.pos + 1).is_some_and(|d| d.is_ascii_digit())
                {
                    self.bump();
                    let mut n: u64 = 0;
                    while let Some(d) = self.peek() {
                        if d.is_ascii_digit() {
                            n = n
                                .checked_mul(10)
                                .and_then(|m| m.checked_add((d - b'0') as u64))
                                .ok_or_else(|| {
                                    self.err(at, "cylindrification index too large".to_string())
                                })?;
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let i = u32::try_from(n).map_err(|_| {
                        self.err(at, "cylindrification index too large".to_string())
                    })?;
                    return Ok((Tok::Cyl(i), at));
                }
                let mut s = String::new();
                while let Some(ch) = self.peek() {
                    if self.is_ident_continue(ch) {
                        s.push(ch as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Ok((Tok::Ident(s), at))
            }
            other => Err(self.err(at, format!("unknown token '{}'", other as char))),
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: (u32, u32),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, mode: Mode) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src, mode);
        let (tok, at) = lexer.next_tok()?;
        Ok(Parser { lexer, tok, at })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let (tok, at) = self.lexer.next_tok()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn err_here(&self, message: String) -> ParseError {
        ParseError { line: self.at.0, col: self.at.1, message }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.tok == want {
            self.advance()
        } else {
            Err(self.err_here(format!("expected {want}, found {}", self.tok)))
        }
    }

    // ---- term grammar ----

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.meet()?;
        while matches!(self.tok, Tok::Plus | Tok::Pipe) {
            self.advance()?;
            let rhs = self.meet()?;
            acc = Term::join(&acc, &rhs);
        }
        Ok(acc)
    }

    fn meet(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.unary()?;
        while matches!(self.tok, Tok::Star | Tok::Amp) {
            self.advance()?;
            let rhs = self.unary()?;
            acc = Term::meet(&acc, &rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        match self.tok.clone() {
            Tok::Minus | Tok::Tilde => {
                self.advance()?;
                let inner = self.unary()?;
                Ok(Term::not(&inner))
            }
            Tok::Cyl(i) => {
                self.advance()?;
                let inner = self.unary()?;
                Ok(Term::cyl(i, &inner))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.tok.clone() {
            Tok::Number(0) => {
                self.advance()?;
                Ok(Term::zero())
            }
            Tok::Number(1) => {
                self.advance()?;
                Ok(Term::one())
            }
            Tok::Number(n) => Err(self.err_here(format!(
                "expected a term atom, found number {n} (only 0 and 1 are constants)"
            ))),
            Tok::Ident(name) => {
                self.advance()?;
                Ok(Term::var(name))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.term()?;
                if self.tok == Tok::RParen {
                    self.advance()?;
                    Ok(inner)
                } else {
                    Err(self.err_here(format!(
                        "unbalanced parenthesis: expected ')', found {}",
                        self.tok
                    )))
                }
            }
            other => Err(self.err_here(format!("expected a term atom, found {other}"))),
        }
    }

    // ---- formula grammar ----

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.tok.clone() {
            Tok::Ident(w) if w == "exists" || w == "forall" => {
                self.advance()?;
                let index = self.binder_var()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if w == "exists" {
                    Formula::exists(index, &body)
                } else {
                    Formula::forall(index, &body)
                })
            }
            _ => self.implies(),
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.f_or()?;
        if self.tok == Tok::Arrow {
            self.advance()?;
            let rhs = self.formula()?;
            Ok(Formula::implies(&lhs, &rhs))
        } else {
            Ok(lhs)
        }
    }

    fn f_or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.f_and()?;
        while self.tok == Tok::Pipe {
            self.advance()?;
            let rhs = self.f_and()?;
            acc = Formula::or(&acc, &rhs);
        }
        Ok(acc)
    }

    fn f_and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.f_unary()?;
        while self.tok == Tok::Amp {
            self.advance()?;
            let rhs = self.f_unary()?;
            acc = Formula::and(&acc, &rhs);
        }
        Ok(acc)
    }

    fn f_unary(&mut self) -> Result<Formula, ParseError> {
        match self.tok.clone() {
            Tok::Tilde | Tok::Minus => {
                self.advance()?;
                let inner = self.f_unary()?;
                Ok(Formula::not(&inner))
            }
            Tok::Ident(w) if w == "exists" || w == "forall" => self.formula(),
            Tok::Ident(name) => {
                self.advance()?;
                self.expect(Tok::LParen)?;
                let mut args = Vec::new();
                args.push(self.binder_var()?);
                while self.tok == Tok::Comma {
                    self.advance()?;
                    args.push(self.binder_var()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Formula::atom(name, args))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(self.err_here(format!("expected a formula, found {other}"))),
        }
    }

    /// A variable written `v<NAT>`.
    fn binder_var(&mut self) -> Result<u32, ParseError> {
        match self.tok.clone() {
            Tok::Ident(name) => {
                let rest = name.strip_prefix('v').ok_or_else(|| {
                    self.err_here(format!("expected a variable like v0, found '{name}'"))
                })?;
                if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(self.err_here(format!(
                        "expected a variable like v0, found '{name}'"
                    )));
                }
                let index: u32 = rest.parse().map_err(|_| {
                    self.err_here(format!("variable index too large in '{name}'"))
                })?;
                self.advance()?;
                Ok(index)
            }
            other => Err(self.err_here(format!("expected a variable like v0, found {other}"))),
        }
    }

    fn finish<T>(self, value: T) -> Result<T, ParseError> {
        if self.tok == Tok::Eof {
            Ok(value)
        } else {
            Err(self.err_here(format!("unexpected {} after the end of the input", self.tok)))
        }
    }
}

/// Parse a term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, Mode::Term)?;
    let t = p.term()?;
    p.finish(t)
}

/// Parse a first-order formula without equality.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, Mode::Formula)?;
    let f = p.formula()?;
    p.finish(f)
}
