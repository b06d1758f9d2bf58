//! Polynomial strings in the base coordinates.
//!
//! Grammar: integer or rational literals (`3`, `-1/2`), variables
//! `x1 … xn`, `+`, `-`, `*`, `^` with nonnegative integer exponents, and
//! parentheses. [`format_polynomial`] writes the canonical form, which
//! parses back to the same element.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded_algebra::{Generator, GradedElement};
use crate::supergeometry::PhaseSpace;
use crate::Rational;

type E = GradedElement<Rational>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    space: PhaseSpace,
    context: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.context, format!("{} at column {} of {:?}", msg.into(), self.pos + 1, self.text()))
    }

    fn text(&self) -> &str {
        std::str::from_utf8(self.src).unwrap_or("")
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn expr(&mut self) -> Result<E> {
        let mut acc = E::zero(self.space);
        let mut sign = if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            sign = if self.eat(b'+') {
                1
            } else if self.eat(b'-') {
                -1
            } else {
                return Ok(acc);
            };
        }
    }

    fn term(&mut self) -> Result<E> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<E> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let e: u32 = self
            .digits()
            .ok_or_else(|| self.err("expected a nonnegative integer exponent"))?
            .parse()
            .map_err(|_| self.err("exponent too large"))?;
        let mut out = E::one(self.space);
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<E> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                let i: usize = self
                    .digits()
                    .ok_or_else(|| self.err("expected a variable index after 'x'"))?
                    .parse()
                    .map_err(|_| self.err("variable index too large"))?;
                if i == 0 || i > self.space.base_dim() {
                    return Err(self.err(format!("variable x{i} out of range 1..={}", self.space.base_dim())));
                }
                Ok(E::generator(self.space, Generator::X(i - 1)))
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().expect("digit").parse().expect("digits");
                let den = if self.eat(b'/') {
                    let d: BigInt =
                        self.digits().ok_or_else(|| self.err("expected a denominator"))?.parse().expect("digits");
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(E::constant(self.space, Rational::new(num, den)))
            }
            Some(c) => Err(self.err(format!("unexpected character {:?}", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse a polynomial in `x1 … xn`; `context` names the field for errors.
pub fn parse_polynomial(space: PhaseSpace, s: &str, context: &str) -> Result<E> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, space, context };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Canonical string of a base function.
pub fn format_polynomial(e: &E) -> Result<String> {
    if !e.is_zero() && !e.is_base_function() {
        return Err(Error::WrongDegree { expected: "polynomial in the base coordinates".into(), found: e.to_string() });
    }
    Ok(e.to_string())
}
