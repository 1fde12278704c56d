//! Plain-text polynomial syntax.
//!
//! ```text
//! poly    = [ sign ] term { sign term } ;
//! sign    = "+" | "-" ;
//! term    = factor { "*" factor } ;
//! factor  = number [ "/" number ]          (* rational coefficient *)
//!         | "[" int { "," int } "]"        (* power-basis coordinates in F_q *)
//!         | "x" digits [ "^" number ] ;    (* variable x0, x1, ... *)
//! int     = [ "-" ] number ;
//! ```
//!
//! Whitespace is ignored between tokens.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{MultiPoly, PolyError, PolyRing};
use crate::field::{CoeffLiteral, Field};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected {found} at byte {pos}")]
    Unexpected { pos: usize, found: String },
    #[error("variable x{0} out of range")]
    VariableOutOfRange(usize),
    #[error("coefficient {0} is not an element of the coefficient field")]
    BadCoefficient(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("empty input")]
    Empty,
}

/// One parsed term before interpretation in a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedTerm {
    pub negative: bool,
    pub coeffs: Vec<CoeffLiteral>,
    /// `(variable index, exponent)` factors, possibly repeated.
    pub vars: Vec<(usize, u32)>,
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self) -> ParseError {
        let found = match self.s.get(self.pos) {
            Some(&c) => format!("'{}'", c as char),
            None => String::from("end of input"),
        };
        ParseError::Unexpected { pos: self.pos, found }
    }

    fn number(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err());
        }
        let text = core::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn small(&mut self) -> Result<u64, ParseError> {
        let pos = self.pos;
        let n = self.number()?;
        u64::try_from(n).map_err(|_| ParseError::Unexpected { pos, found: String::from("oversized integer") })
    }

    fn factor(&mut self, term: &mut ParsedTerm) -> Result<(), ParseError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let idx = self.small()? as usize;
                let mut exp = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    exp = self.small()? as u32;
                }
                term.vars.push((idx, exp));
            }
            Some(b'[') => {
                self.pos += 1;
                let mut coords = Vec::new();
                loop {
                    let neg = if self.peek() == Some(b'-') {
                        self.pos += 1;
                        true
                    } else {
                        false
                    };
                    let v = self.small()? as i64;
                    coords.push(if neg { -v } else { v });
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err()),
                    }
                }
                term.coeffs.push(CoeffLiteral::Vector(coords));
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.number()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.number()?
                } else {
                    BigInt::one()
                };
                if den.is_zero() {
                    return Err(ParseError::ZeroDenominator);
                }
                term.coeffs.push(CoeffLiteral::Rational(BigRational::new(num, den)));
            }
            _ => return Err(self.err()),
        }
        Ok(())
    }
}

/// Tokenize and parse into field-independent terms.
pub fn parse_terms(text: &str) -> Result<Vec<ParsedTerm>, ParseError> {
    let mut lx = Lexer { s: text.as_bytes(), pos: 0 };
    if lx.peek().is_none() {
        return Err(ParseError::Empty);
    }
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let negative = match lx.peek() {
            Some(b'-') => {
                lx.pos += 1;
                true
            }
            Some(b'+') => {
                lx.pos += 1;
                false
            }
            None if !first => break,
            _ if first => false,
            _ => return Err(lx.err()),
        };
        first = false;
        let mut term = ParsedTerm { negative, coeffs: Vec::new(), vars: Vec::new() };
        lx.factor(&mut term)?;
        while lx.peek() == Some(b'*') {
            lx.pos += 1;
            lx.factor(&mut term)?;
        }
        terms.push(term);
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(terms)
}

pub fn parse_poly<F: Field>(ring: &PolyRing<F>, text: &str) -> Result<MultiPoly<F::Elem>, PolyError> {
    let f = &ring.field;
    let mut out = Vec::new();
    for t in parse_terms(text)? {
        let mut c = f.one();
        for lit in &t.coeffs {
            let v = f
                .from_literal(lit)
                .ok_or_else(|| ParseError::BadCoefficient(format!("{lit:?}")))?;
            c = f.mul(&c, &v);
        }
        if t.negative {
            c = f.neg(&c);
        }
        let mut m = vec![0u32; ring.nvars];
        for (i, e) in t.vars {
            if i >= ring.nvars {
                return Err(ParseError::VariableOutOfRange(i).into());
            }
            m[i] += e;
        }
        out.push((m, c));
    }
    Ok(ring.from_terms(out))
}

/// Inverse of [`parse_poly`]: `parse_poly(ring, &format_poly(ring, p)) == p`.
pub fn format_poly<F: Field>(ring: &PolyRing<F>, p: &MultiPoly<F::Elem>) -> String {
    let f = &ring.field;
    if p.is_zero() {
        return String::from("0");
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let (neg, mag) = if f.is_negative(c) { (true, f.neg(c)) } else { (false, c.clone()) };
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let constant = m.iter().all(|&e| e == 0);
        let mut parts: Vec<String> = Vec::new();
        if constant || !f.is_one(&mag) {
            parts.push(f.format_elem(&mag));
        }
        for (i, &e) in m.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{i}")),
                _ => parts.push(format!("x{i}^{e}")),
            }
        }
        s.push_str(&parts.join("*"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;
    use crate::field::Rationals;
    use crate::polysys::TermOrder;

    #[test]
    fn parses_example_syntax() {
        let r = PolyRing::new(Rationals, 3, TermOrder::DegRevLex);
        let p = r.parse("3*x0^2*x1 - x2^3").unwrap();
        assert_eq!(p.terms().len(), 2);
        assert_eq!(r.format(&p), "3*x0^2*x1 - x2^3");
        let q = r.parse("-1/2*x0 + x0*x0 + 0").unwrap();
        assert_eq!(r.format(&q), "x0^2 - 1/2*x0");
    }

    #[test]
    fn finite_field_vectors() {
        let f4 = make_field(2, 2).unwrap();
        let r = PolyRing::new(f4, 2, TermOrder::DegRevLex);
        let p = r.parse("x0 + [0,1]*x1").unwrap();
        assert_eq!(r.format(&p), "x0 + [0,1]*x1");
        // [1,1]*[1,1] = a^2 + 1 = a  in F_4
        let q = r.parse("[1,1]*[1,1]*x0").unwrap();
        assert_eq!(r.format(&q), "[0,1]*x0");
    }

    #[test]
    fn errors() {
        let r = PolyRing::new(Rationals, 2, TermOrder::DegRevLex);
        assert!(matches!(r.parse("x5"), Err(PolyError::Parse(ParseError::VariableOutOfRange(5)))));
        assert!(matches!(r.parse(""), Err(PolyError::Parse(ParseError::Empty))));
        assert!(matches!(r.parse("x0 +"), Err(PolyError::Parse(ParseError::Unexpected { .. }))));
        assert!(matches!(r.parse("1/0"), Err(PolyError::Parse(ParseError::ZeroDenominator))));
        assert!(matches!(r.parse("[1,0]*x0"), Err(PolyError::Parse(ParseError::BadCoefficient(_)))));
    }
}
