//! Polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Integer literals are arbitrary precision and
//! reduced modulo `p`.

use std::str::FromStr;

use num_bigint::BigInt;

use super::field::PrimeField;
use super::monomial::{default_names, Monomial};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// Parses `text` over `𝔽_p` with variables `x0..x{n-1}`.
pub fn parse_polynomial(text: &str, nvars: usize, field: PrimeField) -> Result<Polynomial> {
    parse_polynomial_with(text, &default_names(nvars), field)
}

/// Parses `text` over `𝔽_p` with the declared variable names.
pub fn parse_polynomial_with(text: &str, names: &[String], field: PrimeField) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, names, field };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
    field: PrimeField,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
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

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if let Some(b'-') = self.peek() {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(-&inner);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected exponent"));
            }
            let k: u64 = digits
                .parse()
                .map_err(|_| Error::Syntax { pos: start, msg: "exponent too large".into() })?;
            return base
                .checked_pow(k)
                .map_err(|_| Error::Syntax { pos: start, msg: "exponent too large".into() });
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let v = BigInt::from_str(&d).expect("digits parse as an integer");
                let c = self.field.from_bigint(&v);
                Ok(Polynomial::from_terms(
                    self.nvars(),
                    self.field,
                    [(Monomial::one(self.nvars()), c)],
                ))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let i = self
                    .names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::UnknownVariable { name: name.into(), pos: start })?;
                Ok(Polynomial::var(self.nvars(), self.field, i))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
