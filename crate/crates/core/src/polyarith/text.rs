//! Human-readable infix form, e.g. `x1^4 - 3*x2^3*x3 - x2`.
//!
//! The parser accepts `+ - * ^`, parentheses, integer literals and variable
//! names from a [`Variables`] list; a factor may follow a number or another
//! factor without `*` (`2x1`, `3 x1 x2`). Exponents are non-negative integer
//! literals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{Polynomial, Variables};

/// Largest exponent the parser accepts; keeps hostile input from exhausting memory.
const MAX_EXPONENT: u32 = 4096;
const MAX_DEGREE: u64 = 100_000;
const MAX_TERMS: usize = 100_000;
const MAX_BITS: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "polynomial parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

pub(crate) fn render(p: &Polynomial, vars: &Variables) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || m.is_one() {
            factors.push(mag.to_string());
        }
        for (v, &e) in m.exps().iter().enumerate() {
            let name = vars.get(v).map_or_else(|| format!("x{}", v + 1), |x| x.name.clone());
            match e {
                0 => {}
                1 => factors.push(name),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(s[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = s[i..].chars().next().unwrap_or('?');
                return Err(ParseError { offset: i, message: format!("unexpected character `{ch}`") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a Variables,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        self.depth += 1;
        if self.depth > 256 {
            return self.err("expression nested too deeply");
        }
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -self.product()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn product(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = self.checked_mul(&acc, &rhs)?;
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen) => {
                    let rhs = self.power()?;
                    acc = self.checked_mul(&acc, &rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exp = match self.peek() {
            Some(Tok::Num(n)) => match u32::try_from(n) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.err(format!("exponent exceeds {MAX_EXPONENT}")),
            },
            _ => return self.err("expected a non-negative integer exponent"),
        };
        self.pos += 1;
        let mut acc = Polynomial::one();
        for _ in 0..exp {
            acc = self.checked_mul(&acc, &base)?;
        }
        Ok(acc)
    }

    fn checked_mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial, ParseError> {
        let bits = |p: &Polynomial| p.terms().map(|(_, c)| c.bits()).max().unwrap_or(0);
        if a.total_degree() + b.total_degree() > MAX_DEGREE
            || a.num_terms().saturating_mul(b.num_terms()) > MAX_TERMS
            || bits(a) + bits(b) > MAX_BITS
        {
            return self.err("polynomial too large");
        }
        Ok(a * b)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(n))
            }
            Some(Tok::Ident(name)) => match self.vars.position(&name) {
                Some(v) => {
                    self.pos += 1;
                    Ok(Polynomial::var(v))
                }
                None => self.err(format!("unknown variable `{name}`")),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses the infix form produced by [`Polynomial::render`].
pub fn parse_polynomial(s: &str, vars: &Variables) -> Result<Polynomial, ParseError> {
    let toks = tokenize(s)?;
    let mut parser = Parser { toks, pos: 0, end: s.len(), vars, depth: 0 };
    let p = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.err("trailing input");
    }
    Ok(p)
}
