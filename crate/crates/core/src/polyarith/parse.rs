//! Recursive-descent parser for one-variable integer polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*')? unary)*       juxtaposition multiplies: 3x, 2(x+1)
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::poly::Poly;

/// Exponents beyond this are rejected rather than expanded.
const MAX_DEGREE: usize = 256;

pub fn parse_poly(text: &str) -> Result<Poly> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        var: None,
    };
    let coeffs = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected input"));
    }
    Poly::new(coeffs)
}

type Coeffs = Vec<BigInt>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    var: Option<u8>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Coeffs> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { add(&acc, &rhs) } else { sub(&acc, &rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Coeffs> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.mul_checked(&acc, &rhs)?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphabetic() => {
                    let rhs = self.power()?;
                    acc = self.mul_checked(&acc, &rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Coeffs> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(neg(&self.unary()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Coeffs> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let e = self.integer()?;
        let e = e
            .to_usize()
            .filter(|&e| e <= MAX_DEGREE)
            .ok_or_else(|| Error::Syntax {
                pos: start,
                msg: format!("exponent must be at most {MAX_DEGREE}"),
            })?;
        let mut acc = vec![BigInt::one()];
        for _ in 0..e {
            acc = self.mul_checked(&acc, &base)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Coeffs> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(vec![self.integer()?]),
            Some(c) if c.is_ascii_alphabetic() => {
                if self.src.get(self.pos + 1).is_some_and(|n| n.is_ascii_alphanumeric()) {
                    return Err(self.error("variable names are a single letter"));
                }
                match self.var {
                    Some(v) if v != c => {
                        return Err(self.error(&format!(
                            "second variable '{}' (already using '{}')",
                            c as char, v as char
                        )))
                    }
                    _ => self.var = Some(c),
                }
                self.pos += 1;
                Ok(vec![BigInt::zero(), BigInt::one()])
            }
            Some(_) => Err(self.error("expected a number, variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn mul_checked(&self, a: &Coeffs, b: &Coeffs) -> Result<Coeffs> {
        if a.len() + b.len() - 2 > MAX_DEGREE {
            return Err(self.error(&format!("degree exceeds {MAX_DEGREE}")));
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Ok(out)
    }
}

fn add(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn neg(a: &Coeffs) -> Coeffs {
    a.iter().map(|c| -c).collect()
}

fn sub(a: &Coeffs, b: &Coeffs) -> Coeffs {
    add(a, &neg(b))
}
