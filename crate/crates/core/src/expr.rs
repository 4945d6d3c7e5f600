//! Dimension expressions such as `(eta*i^2*P)^(1/3)`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := atom ('^' exponent)?
//! atom     := IDENT | '(' expr ')'
//! exponent := rational ('^' exponent)?          right-associative
//! rational := '-'? INT | '(' '-'? INT ('/' '-'? INT)? ')'
//! ```
//!
//! Exponents are literals, so `a^2^3` folds to `a^8` at parse time. A tower
//! whose upper exponent is fractional is rejected because the result would
//! not be rational.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::dimension::{Dimension, Exponent, Quantity};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimExpr {
    Symbol(String),
    Product(Box<DimExpr>, Box<DimExpr>),
    Quotient(Box<DimExpr>, Box<DimExpr>),
    Power(Box<DimExpr>, Exponent),
    Sum(Box<DimExpr>, Box<DimExpr>),
    Difference(Box<DimExpr>, Box<DimExpr>),
}

impl DimExpr {
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            end: text.len(),
        };
        let expr = p.expr()?;
        match p.peek() {
            None => Ok(expr),
            Some(t) => Err(p.error_at(t.offset, "operator or end of input", &t.kind)),
        }
    }

    /// Dimension of the expression under a symbol table.
    pub fn eval(&self, symbols: &BTreeMap<String, Dimension>) -> Result<Dimension> {
        Ok(match self {
            DimExpr::Symbol(name) => *symbols
                .get(name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?,
            DimExpr::Product(a, b) => a.eval(symbols)? * b.eval(symbols)?,
            DimExpr::Quotient(a, b) => a.eval(symbols)? / b.eval(symbols)?,
            DimExpr::Power(a, r) => a.eval(symbols)?.pow(*r),
            DimExpr::Sum(a, b) => homogeneous("addition", a.eval(symbols)?, b.eval(symbols)?)?,
            DimExpr::Difference(a, b) => {
                homogeneous("subtraction", a.eval(symbols)?, b.eval(symbols)?)?
            }
        })
    }

    /// Numeric evaluation with dimension checking at every node.
    pub fn eval_quantity<T: Scalar>(
        &self,
        values: &BTreeMap<String, Quantity<T>>,
    ) -> Result<Quantity<T>> {
        match self {
            DimExpr::Symbol(name) => values
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownSymbol(name.clone())),
            DimExpr::Product(a, b) => a.eval_quantity(values)?.mul(&b.eval_quantity(values)?),
            DimExpr::Quotient(a, b) => a.eval_quantity(values)?.div(&b.eval_quantity(values)?),
            DimExpr::Power(a, r) => a.eval_quantity(values)?.pow(*r),
            DimExpr::Sum(a, b) => a
                .eval_quantity(values)?
                .checked_add(&b.eval_quantity(values)?),
            DimExpr::Difference(a, b) => a
                .eval_quantity(values)?
                .checked_sub(&b.eval_quantity(values)?),
        }
    }

    pub fn symbols(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            DimExpr::Symbol(s) => {
                if !out.contains(&s.as_str()) {
                    out.push(s);
                }
            }
            DimExpr::Power(a, _) => a.collect_symbols(out),
            DimExpr::Product(a, b)
            | DimExpr::Quotient(a, b)
            | DimExpr::Sum(a, b)
            | DimExpr::Difference(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            DimExpr::Sum(..) | DimExpr::Difference(..) => 1,
            DimExpr::Product(..) | DimExpr::Quotient(..) => 2,
            DimExpr::Power(..) => 3,
            DimExpr::Symbol(_) => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            DimExpr::Symbol(s) => f.write_str(s)?,
            DimExpr::Sum(a, b) | DimExpr::Difference(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(if matches!(self, DimExpr::Sum(..)) {
                    " + "
                } else {
                    " - "
                })?;
                b.fmt_at(f, 2)?;
            }
            DimExpr::Product(a, b) | DimExpr::Quotient(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str(if matches!(self, DimExpr::Product(..)) {
                    "*"
                } else {
                    "/"
                })?;
                b.fmt_at(f, 3)?;
            }
            DimExpr::Power(a, r) => {
                a.fmt_at(f, 4)?;
                if r.is_integer() && *r.numer() >= 0 {
                    write!(f, "^{}", r.numer())?;
                } else if r.is_integer() {
                    write!(f, "^({})", r.numer())?;
                } else {
                    write!(f, "^({}/{})", r.numer(), r.denom())?;
                }
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints with the minimum parentheses needed to re-parse to the same tree.
impl fmt::Display for DimExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

pub fn parse_dim_expr(text: &str) -> Result<DimExpr> {
    DimExpr::parse(text)
}

pub fn eval_dim_expr(expr: &DimExpr, symbols: &BTreeMap<String, Dimension>) -> Result<Dimension> {
    expr.eval(symbols)
}

fn homogeneous(op: &'static str, left: Dimension, right: Dimension) -> Result<Dimension> {
    if left == right {
        Ok(left)
    } else {
        Err(Error::Heterogeneity { op, left, right })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "symbol `{s}`"),
            TokenKind::Int(n) => write!(f, "integer `{n}`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Slash => f.write_str("`/`"),
            TokenKind::Caret => f.write_str("`^`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(offset, c)) = chars.peek() {
        let kind = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '+' => TokenKind::Plus,
            '-' => TokenKind::Minus,
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            c if c.is_ascii_digit() => {
                let mut end = offset;
                while let Some(&(i, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = i + d.len_utf8();
                    chars.next();
                }
                let n = text[offset..end].parse().map_err(|_| Error::Parse {
                    position: offset,
                    expected: "an integer that fits in 64 bits".into(),
                    found: format!("`{}`", &text[offset..end]),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Int(n),
                    offset,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = offset;
                while let Some(&(i, d)) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    end = i + d.len_utf8();
                    chars.next();
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(text[offset..end].to_string()),
                    offset,
                });
                continue;
            }
            other => {
                return Err(Error::Parse {
                    position: offset,
                    expected: "an ASCII symbol, integer, operator or parenthesis".into(),
                    found: format!("`{other}`"),
                })
            }
        };
        chars.next();
        tokens.push(Token { kind, offset });
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error_at(&self, position: usize, expected: &str, found: &TokenKind) -> Error {
        Error::Parse {
            position,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    fn unexpected(&self, expected: &str) -> Error {
        match self.peek() {
            Some(t) => self.error_at(t.offset, expected, &t.kind),
            None => Error::Parse {
                position: self.end,
                expected: expected.to_string(),
                found: "end of input".into(),
            },
        }
    }

    fn expr(&mut self) -> Result<DimExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                lhs = DimExpr::Sum(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&TokenKind::Minus) {
                lhs = DimExpr::Difference(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<DimExpr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(&TokenKind::Star) {
                lhs = DimExpr::Product(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(&TokenKind::Slash) {
                lhs = DimExpr::Quotient(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<DimExpr> {
        let base = self.atom()?;
        if self.eat(&TokenKind::Caret) {
            let r = self.exponent()?;
            Ok(DimExpr::Power(Box::new(base), r))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<DimExpr> {
        match self.peek_kind().cloned() {
            Some(TokenKind::Ident(name)) => {
                self.pos += 1;
                Ok(DimExpr::Symbol(name))
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&TokenKind::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                Ok(inner)
            }
            _ => Err(self.unexpected("a symbol or `(`")),
        }
    }

    fn exponent(&mut self) -> Result<Exponent> {
        let start = self.peek().map_or(self.end, |t| t.offset);
        let base = self.rational()?;
        if !self.eat(&TokenKind::Caret) {
            return Ok(base);
        }
        let upper_start = self.peek().map_or(self.end, |t| t.offset);
        let upper = self.exponent()?;
        if !upper.is_integer() {
            return Err(Error::Parse {
                position: upper_start,
                expected: "an integer exponent in an exponent tower".into(),
                found: format!("{upper}"),
            });
        }
        checked_rational_pow(base, *upper.numer()).ok_or_else(|| Error::Parse {
            position: start,
            expected: "an exponent tower with a representable rational value".into(),
            found: format!("{base}^{upper}"),
        })
    }

    fn rational(&mut self) -> Result<Exponent> {
        if self.eat(&TokenKind::LParen) {
            let num = self.signed_int()?;
            let den_pos = self.peek().map_or(self.end, |t| t.offset);
            let den = if self.eat(&TokenKind::Slash) {
                self.signed_int()?
            } else {
                1
            };
            if !self.eat(&TokenKind::RParen) {
                return Err(self.unexpected("`/` or `)` in a rational exponent"));
            }
            if den == 0 {
                return Err(Error::Parse {
                    position: den_pos,
                    expected: "a nonzero denominator".into(),
                    found: "0".into(),
                });
            }
            Ok(Exponent::new(num, den))
        } else {
            Ok(Exponent::from_integer(self.signed_int()?))
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let negative = self.eat(&TokenKind::Minus);
        match self.peek_kind() {
            Some(&TokenKind::Int(n)) => {
                self.pos += 1;
                Ok(if negative { -n } else { n })
            }
            _ => Err(self.unexpected("an integer exponent")),
        }
    }
}

fn checked_rational_pow(base: Exponent, n: i64) -> Option<Exponent> {
    if n == 0 {
        return Some(Exponent::one());
    }
    if base.is_zero() && n < 0 {
        return None;
    }
    let b = if n < 0 { base.recip() } else { base };
    let e = u32::try_from(n.unsigned_abs()).ok()?;
    let num = b.numer().checked_pow(e)?;
    let den = b.denom().checked_pow(e)?;
    Some(Exponent::new(num, den))
}
