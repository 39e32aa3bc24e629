//! Prime fields `F_p` and their quadratic extensions `F_{p^2}`.
//!
//! Elements carry their modulus so they can be passed around without a
//! separate context. Moduli are restricted to odd primes below 2^16, which
//! keeps every product of two residues comfortably inside a `u64` and lets
//! the polynomial kernels delay modular reduction.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeField::new`].
pub const MAX_MODULUS: u64 = 65_535;

/// Common interface of the coefficient fields used by [`crate::poly::Poly`].
pub trait Coeff:
    Copy + Eq + fmt::Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    type Ctx: Copy + Eq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_int(ctx: Self::Ctx, n: i64) -> Self;
    fn characteristic(ctx: Self::Ctx) -> u32;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;

    /// `out[i + j] += a[i] * b[j]`. `out` must hold `a.len() + b.len() - 1` slots.
    fn mul_acc(a: &[Self], b: &[Self], out: &mut [Self]) {
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = out[i + j] + x * y;
            }
        }
    }
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Builds the field context, checking that `p` is an odd prime.
    pub fn new(p: u64) -> Result<Self> {
        if !(3..=MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn elem(&self, n: i64) -> Fp {
        Fp::from_int(*self, n)
    }

    pub fn zero(&self) -> Fp {
        Fp {
            value: 0,
            modulus: self.p,
        }
    }

    pub fn one(&self) -> Fp {
        Fp {
            value: 1,
            modulus: self.p,
        }
    }

    /// Embeds `num / den` into `F_p`.
    pub fn rational(&self, num: i64, den: i64) -> Result<Fp> {
        let d = self.elem(den);
        let inv = d.inv().ok_or(Error::RationalNotEmbeddable { num, den, p: self.p })?;
        Ok(self.elem(num) * inv)
    }

    /// Smallest positive quadratic non-residue.
    pub fn smallest_nonresidue(&self) -> Fp {
        (2..self.p as i64)
            .map(|n| self.elem(n))
            .find(|x| x.legendre() == -1)
            .expect("every odd prime field has a non-residue")
    }

    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.p).map(move |v| Fp {
            value: v,
            modulus: self.p,
        })
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (1..self.p).map(move |v| Fp {
            value: v,
            modulus: self.p,
        })
    }

    /// The quadratic extension `F_p[w] / (w^2 - d)` with `d` the smallest non-residue.
    pub fn quadratic_extension(&self) -> QuadraticExtension {
        QuadraticExtension {
            p: self.p,
            d: self.smallest_nonresidue().value,
        }
    }
}

/// Element of `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn field(self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn signed(self) -> i64 {
        let v = self.value as i64;
        let p = self.modulus as i64;
        if v > p / 2 {
            v - p
        } else {
            v
        }
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp {
            value: 1 % self.modulus,
            modulus: self.modulus,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Signed power: negative exponents invert first. Panics on `0^(negative)`.
    pub fn powi(self, e: i64) -> Fp {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().expect("negative power of zero").pow(e.unsigned_abs())
        }
    }

    /// Euler criterion: 1 for nonzero squares, -1 for non-squares, 0 for zero.
    pub fn legendre(self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        let r = self.pow(((self.modulus - 1) / 2) as u64);
        if r.value == 1 {
            1
        } else {
            -1
        }
    }

    /// Tonelli-Shanks. Returns the root with representative in `[0, p/2]`.
    pub fn sqrt(self) -> Option<Fp> {
        match self.legendre() {
            0 => return Some(self),
            -1 => return None,
            _ => {}
        }
        let p = self.modulus as u64;
        let field = self.field();
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = field.smallest_nonresidue();
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow(q.div_ceil(2));
        while t.value != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2.value != 1 {
                t2 = t2 * t2;
                i += 1;
            }
            let b = c.pow(1u64 << (m - i - 1));
            m = i;
            c = b * b;
            t *= c;
            r *= b;
        }
        Some(if r.value > self.modulus / 2 { -r } else { r })
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value + rhs.value;
        Fp {
            value: if s >= self.modulus { s - self.modulus } else { s },
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus - rhs.value
        };
        Fp {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: ((self.value as u64 * rhs.value as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 { 0 } else { self.modulus - self.value },
            modulus: self.modulus,
        }
    }
}

/// Panics when dividing by zero; use [`Coeff::inv`] for a checked inverse.
impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

impl Coeff for Fp {
    type Ctx = PrimeField;

    fn ctx(&self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    fn zero(ctx: PrimeField) -> Fp {
        ctx.zero()
    }

    fn one(ctx: PrimeField) -> Fp {
        ctx.one()
    }

    fn from_int(ctx: PrimeField, n: i64) -> Fp {
        Fp {
            value: n.rem_euclid(ctx.p as i64) as u32,
            modulus: ctx.p,
        }
    }

    fn characteristic(ctx: PrimeField) -> u32 {
        ctx.p
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn inv(&self) -> Option<Fp> {
        if self.value == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i64, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(Fp::from_int(self.ctx(), t0))
    }

    fn mul_acc(a: &[Fp], b: &[Fp], out: &mut [Fp]) {
        let Some(first) = a.first().or(b.first()) else {
            return;
        };
        let p = first.modulus as u64;
        // p < 2^16, so a slot can absorb 2^32 products before overflowing.
        let mut acc: Vec<u64> = out.iter().map(|c| c.value as u64).collect();
        for (i, x) in a.iter().enumerate() {
            let xv = x.value as u64;
            if xv == 0 {
                continue;
            }
            for (slot, y) in acc[i..i + b.len()].iter_mut().zip(b) {
                *slot += xv * y.value as u64;
            }
        }
        for (o, s) in out.iter_mut().zip(acc) {
            o.value = (s % p) as u32;
        }
    }
}

/// `F_p[w] / (w^2 - d)` for a fixed non-residue `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticExtension {
    p: u32,
    d: u32,
}

impl QuadraticExtension {
    pub fn base(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn nonresidue(&self) -> Fp {
        Fp {
            value: self.d,
            modulus: self.p,
        }
    }

    pub fn embed(&self, x: Fp) -> Fp2 {
        Fp2 {
            c0: x.value,
            c1: 0,
            ext: *self,
        }
    }

    pub fn new_elem(&self, c0: Fp, c1: Fp) -> Fp2 {
        Fp2 {
            c0: c0.value,
            c1: c1.value,
            ext: *self,
        }
    }

    /// Square root of a base-field element, always solvable here.
    ///
    /// Residues get their canonical `F_p` root. For a non-residue `x` the
    /// result is `s * w` with `s` the canonical root of `x / d`.
    pub fn sqrt_of_base(&self, x: Fp) -> Fp2 {
        if let Some(r) = x.sqrt() {
            return self.embed(r);
        }
        let s = (x / self.nonresidue())
            .sqrt()
            .expect("x/d is a residue when x and d are both non-residues");
        Fp2 {
            c0: 0,
            c1: s.value,
            ext: *self,
        }
    }
}

/// Element `c0 + c1 * w` of `F_{p^2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    c0: u32,
    c1: u32,
    ext: QuadraticExtension,
}

impl Fp2 {
    pub fn real(self) -> Fp {
        Fp {
            value: self.c0,
            modulus: self.ext.p,
        }
    }

    pub fn imag(self) -> Fp {
        Fp {
            value: self.c1,
            modulus: self.ext.p,
        }
    }

    pub fn extension(self) -> QuadraticExtension {
        self.ext
    }

    /// `Some(x)` when the element lies in the base field.
    pub fn to_base(self) -> Option<Fp> {
        (self.c1 == 0).then(|| self.real())
    }

    pub fn pow(self, mut e: u64) -> Fp2 {
        let mut base = self;
        let mut acc = Fp2::one(self.ext);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn powi(self, e: i64) -> Fp2 {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().expect("negative power of zero").pow(e.unsigned_abs())
        }
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1 == 0 {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "({}+{}w)", self.c0, self.c1)
        }
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, rhs: Fp2) -> Fp2 {
        let re = self.real() + rhs.real();
        let im = self.imag() + rhs.imag();
        Fp2 {
            c0: re.value,
            c1: im.value,
            ext: self.ext,
        }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, rhs: Fp2) -> Fp2 {
        let re = self.real() - rhs.real();
        let im = self.imag() - rhs.imag();
        Fp2 {
            c0: re.value,
            c1: im.value,
            ext: self.ext,
        }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, rhs: Fp2) -> Fp2 {
        let (a0, a1, b0, b1) = (self.real(), self.imag(), rhs.real(), rhs.imag());
        let re = a0 * b0 + self.ext.nonresidue() * a1 * b1;
        let im = a0 * b1 + a1 * b0;
        Fp2 {
            c0: re.value,
            c1: im.value,
            ext: self.ext,
        }
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    fn neg(self) -> Fp2 {
        Fp2 {
            c0: (-self.real()).value,
            c1: (-self.imag()).value,
            ext: self.ext,
        }
    }
}

impl Div for Fp2 {
    type Output = Fp2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp2) -> Fp2 {
        self * rhs.inv().expect("division by zero in F_p^2")
    }
}

impl Coeff for Fp2 {
    type Ctx = QuadraticExtension;

    fn ctx(&self) -> QuadraticExtension {
        self.ext
    }

    fn zero(ctx: QuadraticExtension) -> Fp2 {
        Fp2 { c0: 0, c1: 0, ext: ctx }
    }

    fn one(ctx: QuadraticExtension) -> Fp2 {
        Fp2 { c0: 1, c1: 0, ext: ctx }
    }

    fn from_int(ctx: QuadraticExtension, n: i64) -> Fp2 {
        ctx.embed(ctx.base().elem(n))
    }

    fn characteristic(ctx: QuadraticExtension) -> u32 {
        ctx.p
    }

    fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    fn inv(&self) -> Option<Fp2> {
        let (a0, a1) = (self.real(), self.imag());
        let norm = a0 * a0 - self.ext.nonresidue() * a1 * a1;
        let n_inv = norm.inv()?;
        let re = a0 * n_inv;
        let im = -a1 * n_inv;
        Some(Fp2 {
            c0: re.value,
            c1: im.value,
            ext: self.ext,
        })
    }
}

/// Convenience wrapper: `num / den` in `F_p`.
pub fn embed_rational(num: i64, den: i64, p: u64) -> Result<Fp> {
    PrimeField::new(p)?.rational(num, den)
}

/// Square root of `x` in `F_p` or, failing that, in `F_{p^2}`.
pub fn sqrt_in_ext(x: Fp) -> Fp2 {
    x.field().quadratic_extension().sqrt_of_base(x)
}

/// Legendre symbol via the Euler criterion.
pub fn legendre(x: Fp) -> i8 {
    x.legendre()
}
