//! Dense univariate polynomials over `F_p` and `F_{p^2}`.
//!
//! Coefficients are stored in ascending degree with no trailing zeros, so the
//! zero polynomial is the empty vector and has degree `-inf`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::ff::{Coeff, Fp, Fp2, PrimeField, QuadraticExtension};

/// Exponent of the absolute value `|f| = |T|^deg f`.
///
/// The real base `|T|` is never needed; every inequality between absolute
/// values is decided by comparing exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        self == Degree::NegInfinity
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Below this length the schoolbook kernel beats Karatsuba.
const KARATSUBA_THRESHOLD: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly<C: Coeff> {
    ctx: C::Ctx,
    coeffs: Vec<C>,
}

/// Polynomial over `F_p`.
pub type Polynomial = Poly<Fp>;
/// Polynomial over `F_{p^2}`.
pub type ExtPolynomial = Poly<Fp2>;

impl<C: Coeff> Poly<C> {
    pub fn zero(ctx: C::Ctx) -> Self {
        Poly {
            ctx,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: C::Ctx) -> Self {
        Self::constant(C::one(ctx))
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(c.ctx(), vec![c])
    }

    /// `c * T^n`.
    pub fn monomial(c: C, n: usize) -> Self {
        let mut coeffs = vec![C::zero(c.ctx()); n + 1];
        coeffs[n] = c;
        Self::from_coeffs(c.ctx(), coeffs)
    }

    /// The indeterminate `T`.
    pub fn t(ctx: C::Ctx) -> Self {
        Self::monomial(C::one(ctx), 1)
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(ctx: C::Ctx, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx, coeffs }
    }

    pub fn from_ints(ctx: C::Ctx, ints: &[i64]) -> Self {
        Self::from_coeffs(ctx, ints.iter().map(|&n| C::from_int(ctx, n)).collect())
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n as i64 - 1),
        }
    }

    /// Degree as an index; `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).copied().unwrap_or_else(|| C::zero(self.ctx))
    }

    pub fn leading(&self) -> Option<C> {
        self.coeffs.last().copied()
    }

    pub fn scale(&self, c: C) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx);
        }
        Poly {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    /// Multiplies by `T^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(self.ctx); n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { ctx: self.ctx, coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(lc.inv().expect("leading coefficient is nonzero")),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: C) -> C {
        self.coeffs.iter().rev().fold(C::zero(self.ctx), |acc, &c| acc * x + c)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q * g + r` with `deg r < deg g`.
    pub fn divmod(&self, g: &Self) -> Result<(Self, Self)> {
        let gl = g.leading().ok_or(Error::DivisionByZero)?;
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok((Self::zero(self.ctx), self.clone()));
        }
        let inv = gl.inv().expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dg;
        let mut quo = vec![C::zero(self.ctx); qlen];
        for i in (0..qlen).rev() {
            let c = rem[i + dg] * inv;
            if c.is_zero() {
                continue;
            }
            quo[i] = c;
            for (j, &gc) in g.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j] - c * gc;
            }
        }
        rem.truncate(dg);
        Ok((Self::from_coeffs(self.ctx, quo), Self::from_coeffs(self.ctx, rem)))
    }

    pub fn quo(&self, g: &Self) -> Result<Self> {
        Ok(self.divmod(g)?.0)
    }

    pub fn rem(&self, g: &Self) -> Result<Self> {
        Ok(self.divmod(g)?.1)
    }

    /// Exact division; `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        let (q, r) = self.divmod(g).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd_monic(&self, g: &Self) -> Result<Self> {
        if self.is_zero() && g.is_zero() {
            return Err(Error::GcdUndefined);
        }
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * C::from_int(self.ctx, n as i64))
            .collect();
        Self::from_coeffs(self.ctx, coeffs)
    }

    /// The primitive with zero constant term.
    ///
    /// Fails when some monomial `c T^n` has `p | n + 1`.
    pub fn formal_integral(&self) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero(self.ctx));
        for (n, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                coeffs.push(c);
                continue;
            }
            let inv = C::from_int(self.ctx, n as i64 + 1)
                .inv()
                .ok_or(Error::NonIntegrable { degree: n })?;
            coeffs.push(c * inv);
        }
        Ok(Self::from_coeffs(self.ctx, coeffs))
    }

    /// `f(v T)`.
    pub fn scale_variable(&self, v: C) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::DegenerateScaling);
        }
        let mut vp = C::one(self.ctx);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * vp;
                vp = vp * v;
                out
            })
            .collect();
        Ok(Self::from_coeffs(self.ctx, coeffs))
    }

    /// True iff every monomial has odd exponent (vacuously for zero).
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| c.is_zero())
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    /// If `self = c * other` for a nonzero scalar `c`, returns `c`.
    pub fn scalar_ratio(&self, other: &Self) -> Option<C> {
        let (a, b) = (self.leading()?, other.leading()?);
        if self.coeffs.len() != other.coeffs.len() {
            return None;
        }
        let c = a * b.inv()?;
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(&x, &y)| x == c * y)
            .then_some(c)
    }

    fn add_slices(&self, rhs: &Self, negate: bool) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = C::zero(self.ctx);
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(zero);
                let b = rhs.coeffs.get(i).copied().unwrap_or(zero);
                if negate {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        Self::from_coeffs(self.ctx, coeffs)
    }
}

fn mul_slices<C: Coeff>(ctx: C::Ctx, a: &[C], b: &[C]) -> Vec<C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero(ctx); a.len() + b.len() - 1];
    mul_into(ctx, a, b, &mut out);
    out
}

/// `out += a * b`, Karatsuba above the threshold.
fn mul_into<C: Coeff>(ctx: C::Ctx, a: &[C], b: &[C], out: &mut [C]) {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.is_empty() {
        return;
    }
    if b.len() < KARATSUBA_THRESHOLD {
        C::mul_acc(a, b, out);
        return;
    }
    if a.len() >= 2 * b.len() {
        // Unbalanced: split the long operand into b-sized chunks.
        for (i, chunk) in a.chunks(b.len()).enumerate() {
            let off = i * b.len();
            mul_into(ctx, chunk, b, &mut out[off..off + chunk.len() + b.len() - 1]);
        }
        return;
    }
    let m = b.len() / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = mul_slices(ctx, a0, b0);
    let z2 = mul_slices(ctx, a1, b1);
    let sa = add_padded(ctx, a0, a1);
    let sb = add_padded(ctx, b0, b1);
    let mut z1 = mul_slices(ctx, &sa, &sb);
    for (i, &c) in z0.iter().enumerate() {
        z1[i] = z1[i] - c;
    }
    for (i, &c) in z2.iter().enumerate() {
        z1[i] = z1[i] - c;
    }
    for (i, &c) in z0.iter().enumerate() {
        out[i] = out[i] + c;
    }
    for (i, &c) in z1.iter().enumerate() {
        if m + i < out.len() {
            out[m + i] = out[m + i] + c;
        } else {
            debug_assert!(c.is_zero());
        }
    }
    for (i, &c) in z2.iter().enumerate() {
        out[2 * m + i] = out[2 * m + i] + c;
    }
}

fn add_padded<C: Coeff>(ctx: C::Ctx, a: &[C], b: &[C]) -> Vec<C> {
    let n = a.len().max(b.len());
    let zero = C::zero(ctx);
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(zero) + b.get(i).copied().unwrap_or(zero))
        .collect()
}

impl<'a, C: Coeff> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        self.add_slices(rhs, false)
    }
}

impl<'a, C: Coeff> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self.add_slices(rhs, true)
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        Poly::from_coeffs(self.ctx, mul_slices(self.ctx, &self.coeffs, &rhs.coeffs))
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, C: Coeff> $tr<&'a Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: &Poly<C>) -> Poly<C> {
                (&self).$m(rhs)
            }
        }
        impl<'a, C: Coeff> $tr<Poly<C>> for &'a Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Coeff> AddAssign<&Poly<C>> for Poly<C> {
    fn add_assign(&mut self, rhs: &Poly<C>) {
        *self = &*self + rhs;
    }
}

impl<C: Coeff> SubAssign<&Poly<C>> for Poly<C> {
    fn sub_assign(&mut self, rhs: &Poly<C>) {
        *self = &*self - rhs;
    }
}

impl Poly<Fp> {
    pub fn field(&self) -> PrimeField {
        self.ctx
    }

    /// `f(T)^p = f(T^p)` over `F_p`.
    pub fn frobenius(&self) -> Self {
        let p = self.ctx.modulus() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ctx.zero(); (self.coeffs.len() - 1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p] = c;
        }
        Poly { ctx: self.ctx, coeffs }
    }

    /// `f^(p^e)` via repeated Frobenius.
    pub fn frobenius_pow(&self, e: u32) -> Self {
        (0..e).fold(self.clone(), |acc, _| acc.frobenius())
    }

    pub fn to_ext(&self, ext: QuadraticExtension) -> ExtPolynomial {
        Poly {
            ctx: ext,
            coeffs: self.coeffs.iter().map(|&c| ext.embed(c)).collect(),
        }
    }

    /// `f(vT)` for `v` in the quadratic extension.
    pub fn scale_variable_ext(&self, v: Fp2) -> Result<ExtPolynomial> {
        self.to_ext(v.extension()).scale_variable(v)
    }

    /// Integer representatives, ascending.
    pub fn to_u32s(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.value()).collect()
    }
}

impl Poly<Fp2> {
    /// Down-cast to `F_p[T]`, failing if any coefficient leaves the base field.
    pub fn to_base(&self) -> Result<Polynomial> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(degree, c)| c.to_base().ok_or(Error::NotInBaseField { degree }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(self.ctx.base(), coeffs))
    }
}

impl<C: Coeff> PartialOrd for Poly<C> {
    /// Orders by absolute value `|f| = |T|^deg f` only; `None` when equal
    /// degrees carry different polynomials.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal if self != other => None,
            o => Some(o),
        }
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Poly<C> {
    /// Text form, terms descending: `9*T^3 + 8*T`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = C::one(self.ctx);
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (n, *c == one) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{c}*T")?,
                (_, true) => write!(f, "T^{n}")?,
                (_, false) => write!(f, "{c}*T^{n}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff + fmt::Display> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
