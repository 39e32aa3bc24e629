//! Powers of the quartic root in the basis `{alpha^3, alpha^2, alpha, 1}`,
//! reduced with `alpha^4 = -12 (T alpha^3 - alpha^2 - 1)`.

use crate::error::Result;
use crate::ff::PrimeField;
use crate::poly::Polynomial;

/// `alpha^n = a alpha^3 + b alpha^2 + c alpha + d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerBasisElement {
    pub a: Polynomial,
    pub b: Polynomial,
    pub c: Polynomial,
    pub d: Polynomial,
}

impl PowerBasisElement {
    pub fn one(field: PrimeField) -> Self {
        let z = Polynomial::zero(field);
        PowerBasisElement {
            a: z.clone(),
            b: z.clone(),
            c: z,
            d: Polynomial::one(field),
        }
    }

    /// Multiplies by `alpha` and reduces.
    pub fn mul_alpha(&self) -> Self {
        let f = self.a.field();
        let twelve_a = self.a.scale(f.elem(12));
        let t_term = Polynomial::monomial(f.elem(-12), 1);
        PowerBasisElement {
            a: &(&t_term * &self.a) + &self.b,
            b: &twelve_a + &self.c,
            c: self.d.clone(),
            d: twelve_a,
        }
    }

    /// `[a, b, c, d]`, highest power of `alpha` first.
    pub fn components(&self) -> [&Polynomial; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// `f * self + g * rhs`.
    pub fn combine(&self, f: &Polynomial, rhs: &Self, g: &Polynomial) -> Self {
        let mix = |x: &Polynomial, y: &Polynomial| &(f * x) + &(g * y);
        PowerBasisElement {
            a: mix(&self.a, &rhs.a),
            b: mix(&self.b, &rhs.b),
            c: mix(&self.c, &rhs.c),
            d: mix(&self.d, &rhs.d),
        }
    }
}

/// `alpha^0 .. alpha^n_max`.
pub fn power_table(field: PrimeField, n_max: u64) -> Vec<PowerBasisElement> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(PowerBasisElement::one(field));
    for n in 0..n_max as usize {
        let next = out[n].mul_alpha();
        out.push(next);
    }
    out
}

pub fn power_reduce(field: PrimeField, n: u64) -> Result<PowerBasisElement> {
    let mut x = PowerBasisElement::one(field);
    for _ in 0..n {
        x = x.mul_alpha();
    }
    Ok(x)
}
