//! Polynomials in `X` over `F_p[T]` from text such as `X^4 + X^2 - T*X - 1/12`.
//!
//! Grammar (whitespace ignored, juxtaposition multiplies):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | power)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'T' | 'X' | '(' expr ')'
//! ```
//! Division is only by nonzero constants; integers are reduced mod `p`.

use crate::error::{Error, Result};
use crate::ff::{Coeff, Fp, PrimeField};
use crate::mkaouar::AlgebraicState;
use crate::poly::Polynomial;

const MAX_EXPONENT: u64 = 1 << 12;

/// `coeffs[i]` is the coefficient of `X^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct XPoly(Vec<Polynomial>);

impl XPoly {
    fn constant(c: Polynomial) -> Self {
        XPoly(vec![c]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn add(&self, rhs: &Self, field: PrimeField) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let zero = Polynomial::zero(field);
        XPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) + rhs.0.get(i).unwrap_or(&zero))
                .collect(),
        )
        .trimmed()
    }

    fn neg(&self, field: PrimeField) -> Self {
        XPoly(self.0.iter().map(|c| c.scale(-field.one())).collect())
    }

    fn mul(&self, rhs: &Self, field: PrimeField) -> Self {
        if self.0.is_empty() || rhs.0.is_empty() {
            return XPoly(Vec::new());
        }
        let mut out = vec![Polynomial::zero(field); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        XPoly(out).trimmed()
    }

    fn as_constant(&self) -> Option<Fp> {
        match self.0.as_slice() {
            [] => None,
            [c] if c.deg() == Some(0) => Some(c.coeff(0)),
            _ => None,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: PrimeField,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<(u64, Fp)> {
        self.skip_ws();
        let start = self.pos;
        let (mut exact, mut reduced) = (Some(0u64), self.field.zero());
        let ten = self.field.elem(10);
        while let Some(d) = self.src.get(self.pos).filter(|b| b.is_ascii_digit()) {
            let d = (d - b'0') as u64;
            exact = exact.and_then(|n| n.checked_mul(10)?.checked_add(d));
            reduced = reduced * ten + self.field.elem(d as i64);
            self.pos += 1;
        }
        if self.pos == start {
            return self.err(start, "expected an integer");
        }
        Ok((exact.unwrap_or(u64::MAX), reduced))
    }

    fn expr(&mut self) -> Result<XPoly> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' {
                acc.add(&rhs, self.field)
            } else {
                acc.add(&rhs.neg(self.field), self.field)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<XPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs, self.field);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    let c = match rhs.as_constant() {
                        Some(c) => c,
                        None if rhs.0.is_empty() => {
                            return self.err(at, "division by zero (denominator divisible by p)")
                        }
                        None => return self.err(at, "can only divide by a constant"),
                    };
                    acc = acc.mul(
                        &XPoly::constant(Polynomial::constant(c.inv().expect("nonzero"))),
                        self.field,
                    );
                }
                Some(b) if b.is_ascii_digit() || matches!(b, b'T' | b'X' | b'(') => {
                    let rhs = self.power()?;
                    acc = acc.mul(&rhs, self.field);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<XPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg(self.field))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<XPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let (e, _) = self.integer()?;
        if e > MAX_EXPONENT {
            return self.err(at, format!("exponent above {MAX_EXPONENT}"));
        }
        let mut out = XPoly::constant(Polynomial::one(self.field));
        for _ in 0..e {
            out = out.mul(&base, self.field);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<XPoly> {
        let at = self.pos;
        match self.peek() {
            Some(b'T') => {
                self.pos += 1;
                Ok(XPoly::constant(Polynomial::t(self.field)))
            }
            Some(b'X') => {
                self.pos += 1;
                Ok(XPoly(vec![Polynomial::zero(self.field), Polynomial::one(self.field)]))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let (_, c) = self.integer()?;
                Ok(XPoly::constant(Polynomial::constant(c)))
            }
            Some(b) => self.err(self.pos, format!("unexpected '{}'", b as char)),
            None => self.err(at.max(self.pos), "unexpected end of input"),
        }
    }
}

/// Coefficients in `X` (ascending) of the parsed expression.
pub fn parse_x_coeffs(text: &str, field: PrimeField) -> Result<Vec<Polynomial>> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        field,
    };
    let out = parser.expr()?;
    if parser.peek().is_some() {
        return parser.err(parser.pos, "trailing input");
    }
    Ok(out.0)
}

pub fn parse_polynomial(text: &str, field: PrimeField) -> Result<AlgebraicState> {
    AlgebraicState::new(field, parse_x_coeffs(text, field)?)
}
