//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace insensitive):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := literal | variable | '(' expr ')'
//! literal:= number ('/' number)?      -- rational, e.g. 8/9 or 1.5
//! variable := 'y' digit               -- y0 .. y5
//! ```
//! Multiplication is always explicit; `/` only joins two numeric literals.

use super::{MultiPoly, Poly};
use crate::numbers::AlgebraicValue;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("polynomial parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

/// Parse a polynomial over variables `y0..y{nvars-1}`.
pub fn parse_poly(src: &str, nvars: usize) -> Result<MultiPoly, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, nvars };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.uint()?;
            if k > u8::MAX as u64 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'y') => {
                self.pos += 1;
                let d = self
                    .src
                    .get(self.pos)
                    .copied()
                    .filter(u8::is_ascii_digit)
                    .ok_or_else(|| self.err("expected a digit after 'y'"))?;
                self.pos += 1;
                let idx = (d - b'0') as usize;
                if idx >= self.nvars {
                    return Err(self.err(&format!(
                        "variable y{idx} out of range (polynomial has {} variables)",
                        self.nvars
                    )));
                }
                Ok(Poly::variable(self.nvars, idx))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.number()?;
                let lit = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.number()?;
                    if den == BigRational::from_integer(0.into()) {
                        return Err(self.err("division by zero in literal"));
                    }
                    num / den
                } else {
                    num
                };
                Ok(Poly::constant(self.nvars, AlgebraicValue::from_rational(lit)))
            }
            Some(_) => Err(self.err("expected a literal, variable, or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    /// Digits with an optional decimal point.
    fn number(&mut self) -> Result<BigRational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        crate::numbers::parse_rational(text)
            .map_err(|_| ParseError { pos: start, msg: format!("bad numeric literal {text:?}") })
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("exponent overflow"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_basic_forms() {
        let f = parse_poly("y0*y1 - y2*y3", 4).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.homogeneous_degree(), Some(2));

        let g = parse_poly("4*y0 - 2*y2 - 2*y3 + y1", 4).unwrap();
        assert_eq!(g.homogeneous_degree(), Some(1));
        assert_eq!(g.num_terms(), 4);

        let h = parse_poly("8/9*y0^3 + 1/63*y3^3 - (y0 - y1)^2 * y2", 4).unwrap();
        assert_eq!(h.degree(), Some(3));
    }

    #[test]
    fn round_trips_through_display() {
        for src in [
            "y0*y1 - y2*y3",
            "y0^3 + y1^3 + y2^3 + y3^3",
            "8/9*y0^3 - 64/63*y2^3 + y1*y2*y3",
            "-y0^2 + 1/2*y1^2 - 3",
        ] {
            let f = parse_poly(src, 4).unwrap();
            let text = f.to_string();
            let g = parse_poly(&text, 4).unwrap();
            assert_eq!(f, g, "round-trip failed for {src:?} -> {text:?}");
            // Display is canonical: a second trip is byte-identical.
            assert_eq!(text, g.to_string());
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_poly("y0 +", 4).is_err());
        assert!(parse_poly("3y0", 4).is_err(), "implicit multiplication is not allowed");
        assert!(parse_poly("y0 / y1", 4).is_err(), "'/' only joins numeric literals");
        assert!(parse_poly("y4", 4).is_err(), "variable out of range");
        assert!(parse_poly("y0^", 4).is_err());
        assert!(parse_poly("(y0", 4).is_err());
        assert!(parse_poly("", 4).is_err());
        assert!(parse_poly("1/0", 4).is_err());
    }

    #[test]
    fn five_variable_polynomials() {
        let f = parse_poly("y4^4*y0 + y1^5", 5).unwrap();
        assert_eq!(f.homogeneous_degree(), Some(5));
        assert!(parse_poly("y4", 4).is_err());
    }

    #[test]
    fn unary_minus_and_powers() {
        let f = parse_poly("-y0^2", 4).unwrap();
        assert_eq!(f, parse_poly("0 - y0^2", 4).unwrap());
        let g = parse_poly("-(y0 - y1)^3", 4).unwrap();
        let h = parse_poly("(y1 - y0)^3", 4).unwrap();
        assert_eq!(g, h);
    }
}
