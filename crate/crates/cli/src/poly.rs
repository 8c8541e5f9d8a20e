//! Polynomials in `t` with rational coefficients: a recursive-descent parser
//! and a printer whose output parses back to the same polynomial.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 't' | '(' expr ')'
//! number := digits ('.' digits)?
//! ```
//!
//! Division is only by nonzero constants; exponents must evaluate to
//! non-negative integers.

use cyperiod::algebra::{Rational, UniPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown variable {0:?} (only t is allowed)")]
    UnknownVariable(String),
    #[error("exponent must be a non-negative integer")]
    NonIntegerExponent,
    #[error("exponent exceeds {MAX_EXPONENT}")]
    ExponentTooLarge,
    #[error("division by a non-constant polynomial")]
    DivisionByPolynomial,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { offset: self.pos, kind }
    }

    fn unexpected(&mut self) -> ParseError {
        match self.peek() {
            None => self.err(ParseErrorKind::UnexpectedEnd),
            Some(_) => {
                let ch = std::str::from_utf8(&self.src[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or('\u{fffd}');
                self.err(ParseErrorKind::UnexpectedChar(ch))
            }
        }
    }

    fn expr(&mut self) -> Result<UniPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<UniPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    let c = d.as_constant_value().ok_or(ParseError {
                        offset: at,
                        kind: ParseErrorKind::DivisionByPolynomial,
                    })?;
                    if c.is_zero() {
                        return Err(ParseError { offset: at, kind: ParseErrorKind::DivisionByZero });
                    }
                    acc = acc.scale(&(Rational::one() / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<UniPoly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<UniPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let e = self.unary()?;
        let bad = |kind| ParseError { offset: at, kind };
        let c = e
            .as_constant_value()
            .ok_or(bad(ParseErrorKind::NonIntegerExponent))?;
        if !c.is_integer() || c.is_negative() {
            return Err(bad(ParseErrorKind::NonIntegerExponent));
        }
        let k = c
            .to_integer()
            .to_u32()
            .filter(|&k| k <= MAX_EXPONENT)
            .ok_or(bad(ParseErrorKind::ExponentTooLarge))?;
        Ok(base.pow(k))
    }

    fn atom(&mut self) -> Result<UniPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if name == "t" {
                    Ok(UniPoly::var())
                } else {
                    Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UnknownVariable(name.to_string()),
                    })
                }
            }
            _ => Err(self.unexpected()),
        }
    }

    fn number(&mut self) -> Result<UniPoly, ParseError> {
        let digits = |p: &mut Self| -> &'a [u8] {
            let start = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            &p.src[start..p.pos]
        };
        let int_part = digits(self);
        let mut frac_part: &[u8] = &[];
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_part = digits(self);
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(self.unexpected());
        }
        let all: Vec<u8> = int_part.iter().chain(frac_part).copied().collect();
        let numer = BigInt::parse_bytes(&all, 10).expect("digits");
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        Ok(UniPoly::constant(Rational::new(numer, denom)))
    }
}

trait ConstantValue {
    fn as_constant_value(&self) -> Option<Rational>;
}

impl ConstantValue for UniPoly {
    fn as_constant_value(&self) -> Option<Rational> {
        self.is_constant().then(|| self.coeff(0))
    }
}

/// Parses a polynomial in `t`; whitespace is ignored.
pub fn parse_poly(text: &str) -> Result<UniPoly, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let poly = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(poly)
}

/// Canonical text, highest degree first, e.g. `t^3 - 1/3*t + 1/2`.
pub fn print_poly(p: &UniPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mag = c.abs();
        let mono = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}
