//! Truncated Laurent series in `1/T` over `F_p`.
//!
//! A series stores its coefficients from the exponent `top` downward. Unless it
//! is marked exact, everything below the last stored coefficient is unknown,
//! and every operation tracks how far down its result is still determined.

use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{Coeff, Fp, PrimeField};
use crate::poly::{Degree, Polynomial};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: PrimeField,
    /// Exponent of `coeffs[0]`.
    top: i64,
    /// `coeffs[j]` is the coefficient of `T^(top - j)`.
    coeffs: Vec<Fp>,
    /// When set, all coefficients below the stored ones are zero.
    exact: bool,
}

/// The truncated power-series view used for root approximations.
pub type SeriesApprox = LaurentSeries;

impl LaurentSeries {
    pub fn new(field: PrimeField, top: i64, coeffs: Vec<Fp>, exact: bool) -> Self {
        LaurentSeries {
            field,
            top,
            coeffs,
            exact,
        }
    }

    pub fn zero(field: PrimeField) -> Self {
        LaurentSeries {
            field,
            top: 0,
            coeffs: Vec::new(),
            exact: true,
        }
    }

    pub fn from_poly(f: &Polynomial) -> Self {
        match f.deg() {
            None => Self::zero(f.field()),
            Some(d) => LaurentSeries {
                field: f.field(),
                top: d as i64,
                coeffs: f.coeffs().iter().rev().copied().collect(),
                exact: true,
            },
        }
    }

    /// `num / den` expanded down to (and including) `T^low`.
    pub fn from_rational(num: &Polynomial, den: &Polynomial, low: i64) -> Result<Self> {
        let d = Self::from_poly(den);
        let n = Self::from_poly(num);
        n.div_to(&d, low)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Number of stored terms minus one.
    pub fn precision(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Lowest exponent whose coefficient is known; `None` for exact series.
    pub fn low(&self) -> Option<i64> {
        (!self.exact).then(|| self.top - self.coeffs.len() as i64 + 1)
    }

    fn known_at(&self, e: i64) -> bool {
        self.low().is_none_or(|l| e >= l)
    }

    /// Coefficient of `T^e`, or `None` if it is not determined.
    pub fn coeff(&self, e: i64) -> Option<Fp> {
        if !self.known_at(e) {
            return None;
        }
        if e > self.top {
            return Some(self.field.zero());
        }
        let j = (self.top - e) as usize;
        Some(self.coeffs.get(j).copied().unwrap_or(self.field.zero()))
    }

    /// Drops leading zero coefficients.
    pub fn normalized(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if skip == self.coeffs.len() && self.exact {
            return Self::zero(self.field);
        }
        LaurentSeries {
            field: self.field,
            top: self.top - skip as i64,
            coeffs: self.coeffs[skip..].to_vec(),
            exact: self.exact,
        }
    }

    /// Exponent of the leading nonzero coefficient. `Ok(-inf)` for exact
    /// zero; an error if no nonzero coefficient is known.
    pub fn valuation(&self) -> Result<Degree> {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(j) => Ok(Degree::Finite(self.top - j as i64)),
            None if self.exact => Ok(Degree::NegInfinity),
            None => Err(Error::ZeroSeries),
        }
    }

    /// Forgets all coefficients below `T^low`.
    pub fn truncate(&self, low: i64) -> Self {
        let keep = (self.top - low + 1).max(0) as usize;
        let mut coeffs: Vec<Fp> = self.coeffs.iter().take(keep).copied().collect();
        if self.exact {
            coeffs.resize(keep, self.field.zero());
        } else {
            coeffs.truncate(keep);
        }
        LaurentSeries {
            field: self.field,
            top: self.top,
            coeffs,
            exact: false,
        }
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Self {
        let top = self.top.max(rhs.top);
        let low = match (self.low(), rhs.low()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN))),
        };
        let bottom = low.unwrap_or_else(|| {
            let b = |s: &Self| s.top - s.coeffs.len() as i64 + 1;
            b(self).min(b(rhs))
        });
        let coeffs: Vec<Fp> = (bottom..=top)
            .rev()
            .map(|e| {
                let a = self.coeff(e).unwrap_or(self.field.zero());
                let b = rhs.coeff(e).unwrap_or(self.field.zero());
                if negate {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        LaurentSeries {
            field: self.field,
            top,
            coeffs,
            exact: low.is_none(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }

    pub fn scale(&self, c: Fp) -> Self {
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let a = self.normalized();
        let b = rhs.normalized();
        for s in [&a, &b] {
            if s.exact && s.coeffs.is_empty() {
                return Ok(Self::zero(self.field));
            }
            if s.coeffs.is_empty() || s.coeffs[0].is_zero() {
                return Err(Error::ZeroSeries);
            }
        }
        let terms = match (a.exact, b.exact) {
            (true, true) => a.coeffs.len() + b.coeffs.len() - 1,
            (true, false) => b.coeffs.len(),
            (false, true) => a.coeffs.len(),
            (false, false) => a.coeffs.len().min(b.coeffs.len()),
        };
        let na = a.coeffs.len().min(terms);
        let nb = b.coeffs.len().min(terms);
        // Descending coefficient lists multiply as polynomials in 1/T.
        let fa = Polynomial::from_coeffs(self.field, a.coeffs[..na].to_vec());
        let fb = Polynomial::from_coeffs(self.field, b.coeffs[..nb].to_vec());
        let mut out = (&fa * &fb).into_coeffs();
        out.resize(terms, self.field.zero());
        Ok(LaurentSeries {
            field: self.field,
            top: a.top + b.top,
            coeffs: out,
            exact: a.exact && b.exact,
        })
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Result<Self> {
        self.mul(&Self::from_poly(f))
    }

    /// `1 / self` with `terms` coefficients when `self` is exact; inexact
    /// inputs determine their own relative precision.
    pub fn inv_terms(&self, terms: usize) -> Result<Self> {
        let a = self.normalized();
        if a.coeffs.is_empty() || a.coeffs[0].is_zero() {
            return Err(Error::ZeroSeries);
        }
        let n = if a.exact { terms } else { a.coeffs.len() };
        let c_inv = a.coeffs[0].inv().expect("leading coefficient is nonzero");
        if n.min(a.coeffs.len()) > NEWTON_THRESHOLD {
            let out = newton_inverse(self.field, &a.coeffs, c_inv, n);
            return Ok(LaurentSeries {
                field: self.field,
                top: -a.top,
                coeffs: out,
                exact: false,
            });
        }
        let mut out: Vec<Fp> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(c_inv);
                continue;
            }
            let mut s = self.field.zero();
            for j in 1..=k.min(a.coeffs.len() - 1) {
                s += a.coeffs[j] * out[k - j];
            }
            out.push(-(s * c_inv));
        }
        Ok(LaurentSeries {
            field: self.field,
            top: -a.top,
            coeffs: out,
            exact: false,
        })
    }

    /// `self / rhs` determined down to `T^low`.
    pub fn div_to(&self, rhs: &Self, low: i64) -> Result<Self> {
        let num = self.normalized();
        if num.exact && num.coeffs.is_empty() {
            return Ok(Self::zero(self.field));
        }
        let den = rhs.normalized();
        let v = den.valuation()?.finite().ok_or(Error::ZeroSeries)?;
        let top = num.top - v;
        let terms = (top - low + 1).max(1) as usize;
        let q = num.mul(&den.inv_terms(terms)?)?;
        Ok(if q.exact {
            q
        } else {
            q.truncate(low.max(q.low().unwrap_or(low)))
        })
    }

    /// `self^p` via Frobenius: `(sum c_k T^k)^p = sum c_k T^(kp)`.
    pub fn frobenius(&self) -> Self {
        let p = self.field.modulus() as i64;
        let a = self.normalized();
        if a.coeffs.is_empty() {
            return a;
        }
        let len = (a.coeffs.len() - 1) * p as usize + 1;
        let mut coeffs = vec![self.field.zero(); len];
        for (j, &c) in a.coeffs.iter().enumerate() {
            coeffs[j * p as usize] = c;
        }
        if !a.exact {
            // Error term O(T^(p(low - 1))) leaves p - 1 more zeros determined.
            coeffs.extend(std::iter::repeat_n(self.field.zero(), p as usize - 1));
        }
        LaurentSeries {
            field: self.field,
            top: a.top * p,
            coeffs,
            exact: a.exact,
        }
    }

    /// Highest exponent `e >= floor` where the two series differ, or `-inf`
    /// if they agree on all of `[floor, inf)`.
    pub fn first_difference(&self, rhs: &Self, floor: i64) -> Result<Degree> {
        for s in [self, rhs] {
            if let Some(l) = s.low() {
                if l > floor {
                    return Err(Error::PrecisionExhausted(format!(
                        "series known down to T^{l}, comparison needs T^{floor}"
                    )));
                }
            }
        }
        let top = self.top.max(rhs.top);
        for e in (floor..=top).rev() {
            if self.coeff(e) != rhs.coeff(e) {
                return Ok(Degree::Finite(e));
            }
        }
        Ok(Degree::NegInfinity)
    }

    /// Writes the stored truncation as `num / T^shift`.
    pub fn truncation_as_rational(&self) -> (Polynomial, usize) {
        let bottom = self.top - self.coeffs.len() as i64 + 1;
        let shift = (-bottom).max(0) as usize;
        let mut asc = vec![self.field.zero(); (self.top + shift as i64 + 1).max(0) as usize];
        for (j, &c) in self.coeffs.iter().enumerate() {
            let e = self.top - j as i64 + shift as i64;
            if e >= 0 {
                asc[e as usize] = c;
            }
        }
        (Polynomial::from_coeffs(self.field, asc), shift)
    }
}

const NEWTON_THRESHOLD: usize = 256;

/// First `n` coefficients of `1/f` for `f` given by its leading coefficients,
/// via `g <- g + g (1 - f g)`, doubling the precision each step.
fn newton_inverse(field: PrimeField, f: &[Fp], c_inv: Fp, n: usize) -> Vec<Fp> {
    let mut g = vec![c_inv];
    while g.len() < n {
        let m = (2 * g.len()).min(n);
        let fp = Polynomial::from_coeffs(field, f[..m.min(f.len())].to_vec());
        let gp = Polynomial::from_coeffs(field, g.clone());
        let mut r: Vec<Fp> = (&fp * &gp).into_coeffs();
        r.resize(m, field.zero());
        for x in r.iter_mut() {
            *x = -*x;
        }
        r[0] += field.one();
        let corr = (&gp * &Polynomial::from_coeffs(field, r)).into_coeffs();
        g.resize(m, field.zero());
        for (x, c) in g.iter_mut().zip(corr) {
            *x += c;
        }
    }
    g
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*T^{}", self.top - j as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        match self.low() {
            Some(l) => write!(f, " + O(T^{})", l - 1),
            None => Ok(()),
        }
    }
}
