//! Text form of polynomials in `x`.
//!
//! Two styles are understood: expressions such as `3*x^4 + x - 7`, and
//! ascending coefficient lists such as `[-7, 1, 0, 0, 3]`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Style {
    /// Descending powers: `x^6 - x^5 + x^3 - x + 1`.
    Expr,
    /// Ascending coefficients: `[1,-1,0,1,0,-1,1]`.
    CoeffList,
}

pub fn format(p: &IntPoly, style: Style) -> String {
    match style {
        Style::Expr => format_expr(p),
        Style::CoeffList => {
            let body: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
            format!("[{}]", body.join(","))
        }
    }
}

fn format_expr(p: &IntPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (e, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        let unit = mag.is_one();
        if e == 0 {
            write!(out, "{mag}").unwrap();
            continue;
        }
        if !unit {
            write!(out, "{mag}*").unwrap();
        }
        out.push('x');
        if e > 1 {
            write!(out, "^{e}").unwrap();
        }
    }
    out
}

/// Parses either style; a leading `[` selects the coefficient list.
pub fn parse(text: &str) -> Result<IntPoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let poly = if p.peek() == Some(b'[') {
        p.coeff_list()?
    } else {
        p.expr()?
    };
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        match self.digits() {
            Some(d) => Ok(d.parse().unwrap()),
            None => Err(self.error("expected an integer")),
        }
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let (c, e) = self.term()?;
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            if negative {
                coeffs[e] -= c;
            } else {
                coeffs[e] += c;
            }
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    /// `INT ('*'? 'x' ('^' UINT)?)? | 'x' ('^' UINT)?`
    fn term(&mut self) -> Result<(BigInt, u64)> {
        self.skip_ws();
        let coeff = match self.peek() {
            Some(b) if b.is_ascii_digit() => Some(self.uint()?),
            Some(b'x') => None,
            _ => return Err(self.error("expected a term")),
        };
        let has_x = match coeff {
            None => true,
            Some(_) => {
                let star = self.eat(b'*');
                self.skip_ws();
                if self.peek() == Some(b'x') {
                    true
                } else if star {
                    return Err(self.error("expected 'x' after '*'"));
                } else {
                    false
                }
            }
        };
        let mut exp = 0;
        if has_x {
            self.pos += 1;
            exp = 1;
            if self.eat(b'^') {
                self.skip_ws();
                let at = self.pos;
                let Some(text) = self.digits() else {
                    return Err(self.error("expected an exponent"));
                };
                exp = match text.parse::<u64>() {
                    Ok(v) if v <= MAX_EXPONENT => v,
                    _ => return Err(Error::ExponentOverflow { offset: at }),
                };
            }
        }
        Ok((coeff.unwrap_or_else(BigInt::one), exp))
    }

    fn coeff_list(&mut self) -> Result<IntPoly> {
        self.pos += 1;
        let mut coeffs = Vec::new();
        if self.eat(b']') {
            return Ok(IntPoly::zero());
        }
        loop {
            let neg = self.eat(b'-');
            let v = self.uint()?;
            coeffs.push(if neg { -v } else { v });
            if self.eat(b']') {
                break;
            }
            if !self.eat(b',') {
                return Err(self.error("expected ',' or ']'"));
            }
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }
}
