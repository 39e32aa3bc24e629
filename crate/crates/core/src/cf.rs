//! Continued fractions with polynomial partial quotients, their continuants,
//! and finite continued fractions of scalars.

use crate::error::{Error, Result};
use crate::ff::{Coeff, Fp, PrimeField};
use crate::poly::Polynomial;

/// `[a_1, a_2, ..., a_n]` with `a_i` in `F_p[T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    field: PrimeField,
    partial_quotients: Vec<Polynomial>,
    /// Set when `a_1` has degree <= 0 (a rational input of absolute value <= 1).
    constant_first: bool,
}

impl CfExpansion {
    pub fn new(field: PrimeField, partial_quotients: Vec<Polynomial>) -> Self {
        let constant_first = partial_quotients.first().is_some_and(|a| a.deg().unwrap_or(0) == 0);
        CfExpansion {
            field,
            partial_quotients,
            constant_first,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn partial_quotients(&self) -> &[Polynomial] {
        &self.partial_quotients
    }

    pub fn into_partial_quotients(self) -> Vec<Polynomial> {
        self.partial_quotients
    }

    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    pub fn constant_first(&self) -> bool {
        self.constant_first
    }

    /// 1-based access, matching `a_n`.
    pub fn get(&self, n: usize) -> Option<&Polynomial> {
        n.checked_sub(1).and_then(|i| self.partial_quotients.get(i))
    }

    pub fn push(&mut self, a: Polynomial) {
        if self.partial_quotients.is_empty() {
            self.constant_first = a.deg().unwrap_or(0) == 0;
        }
        self.partial_quotients.push(a);
    }

    pub fn truncated(&self, n: usize) -> CfExpansion {
        CfExpansion::new(self.field, self.partial_quotients[..n.min(self.len())].to_vec())
    }

    /// The tail `[a_{n+1}, a_{n+2}, ...]`.
    pub fn tail(&self, n: usize) -> CfExpansion {
        CfExpansion::new(self.field, self.partial_quotients[n.min(self.len())..].to_vec())
    }

    pub fn continuants(&self) -> Continuants {
        continuants(self)
    }

    /// `(x_n, y_n)` for the full expansion.
    pub fn to_rational(&self) -> Result<(Polynomial, Polynomial)> {
        if self.is_empty() {
            return Err(Error::EmptyExpansion);
        }
        let c = self.continuants();
        let n = self.len();
        Ok((c.x[n].clone(), c.y[n].clone()))
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.partial_quotients
            .iter()
            .map(|a| a.degree().finite().unwrap_or(-1))
            .collect()
    }
}

/// Euclidean expansion of `num / den`.
///
/// Quotients are kept exactly as division returns them: no sign or monic
/// normalization, since specific leading constants carry information.
pub fn rational_to_cf(num: &Polynomial, den: &Polynomial) -> Result<CfExpansion> {
    if den.is_zero() {
        return Err(Error::NotRational);
    }
    let mut out = CfExpansion::new(num.field(), Vec::new());
    let (mut a, mut b) = (num.clone(), den.clone());
    while !b.is_zero() {
        let (q, r) = a.divmod(&b)?;
        out.push(q);
        a = b;
        b = r;
    }
    Ok(out)
}

/// Numerator and denominator continuants, `x[0..=n]` and `y[0..=n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Continuants {
    pub x: Vec<Polynomial>,
    pub y: Vec<Polynomial>,
}

impl Continuants {
    pub fn len(&self) -> usize {
        self.x.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks `x_n y_{n-1} - x_{n-1} y_n = (-1)^n` for every cached `n >= 1`.
    pub fn determinant_holds(&self) -> bool {
        (1..self.x.len()).all(|n| self.determinant_at(n))
    }

    fn determinant_at(&self, n: usize) -> bool {
        let field = self.x[0].field();
        let det = &(&self.x[n] * &self.y[n - 1]) - &(&self.x[n - 1] * &self.y[n]);
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        det == Polynomial::constant(field.elem(sign))
    }
}

/// `K_n = a_n K_{n-1} + K_{n-2}` with `x_0 = 1, x_1 = a_1`, `y_0 = 0, y_1 = 1`.
pub fn continuants(cf: &CfExpansion) -> Continuants {
    let field = cf.field;
    let n = cf.len();
    let mut x = Vec::with_capacity(n + 1);
    let mut y = Vec::with_capacity(n + 1);
    x.push(Polynomial::one(field));
    y.push(Polynomial::zero(field));
    let mut out = Continuants { x, y };
    for (i, a) in cf.partial_quotients.iter().enumerate() {
        let (nx, ny) = if i == 0 {
            (a.clone(), Polynomial::one(field))
        } else {
            (&(a * &out.x[i]) + &out.x[i - 1], &(a * &out.y[i]) + &out.y[i - 1])
        };
        out.x.push(nx);
        out.y.push(ny);
        debug_assert!(out.determinant_at(i + 1), "continuant determinant at {}", i + 1);
    }
    out
}

/// Evaluates `[u_1, ..., u_m] = u_1 + 1/[u_2, ..., u_m]` from the right.
///
/// Errors if some proper tail vanishes (the fraction is then undefined). The
/// top-level value itself may be zero; see [`eval_scalar_cf_nonzero`].
pub fn eval_scalar_cf(entries: &[Fp]) -> Result<Fp> {
    let (&last, rest) = entries.split_last().ok_or(Error::EmptyExpansion)?;
    let mut acc = last;
    for (idx, &u) in rest.iter().enumerate().rev() {
        let inv = acc.inv().ok_or(Error::ScalarCfUndefined { index: idx + 2 })?;
        acc = u + inv;
    }
    Ok(acc)
}

/// Like [`eval_scalar_cf`] but also requires the value to lie in `F_p^*`.
pub fn eval_scalar_cf_nonzero(entries: &[Fp]) -> Result<Fp> {
    let v = eval_scalar_cf(entries)?;
    if v.is_zero() {
        return Err(Error::ScalarCfUndefined { index: 1 });
    }
    Ok(v)
}

/// Linear fractional map `z -> (a z + b) / (c z + d)` over `F_p[T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: Polynomial,
    pub b: Polynomial,
    pub c: Polynomial,
    pub d: Polynomial,
}

impl Mobius {
    pub fn compose(&self, inner: &Mobius) -> Mobius {
        Mobius {
            a: &(&self.a * &inner.a) + &(&self.b * &inner.c),
            b: &(&self.a * &inner.b) + &(&self.b * &inner.d),
            c: &(&self.c * &inner.a) + &(&self.d * &inner.c),
            d: &(&self.c * &inner.b) + &(&self.d * &inner.d),
        }
    }

    /// Adjugate: the inverse up to the scalar determinant.
    pub fn adjugate(&self) -> Mobius {
        Mobius {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn determinant(&self) -> Polynomial {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }
}

/// `f_l`: `alpha = (x_l z + x_{l-1}) / (y_l z + y_{l-1})` with `z = alpha_{l+1}`.
pub fn convergent_map(cont: &Continuants, l: usize) -> Result<Mobius> {
    if l == 0 || l > cont.len() {
        return Err(Error::InsufficientExpansion(format!(
            "need continuants through index {l}, have {}",
            cont.len()
        )));
    }
    Ok(Mobius {
        a: cont.x[l].clone(),
        b: cont.x[l - 1].clone(),
        c: cont.y[l].clone(),
        d: cont.y[l - 1].clone(),
    })
}

/// `alpha_{l+1} = (-y_{l-1} alpha + x_{l-1}) / (y_l alpha - x_l)`.
pub fn tail_from_convergents(cont: &Continuants, l: usize) -> Result<Mobius> {
    let f = convergent_map(cont, l)?;
    Ok(Mobius {
        a: -&f.d,
        b: f.b,
        c: f.c,
        d: -&f.a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn lin(k: PrimeField, c: i64) -> Polynomial {
        Polynomial::from_ints(k, &[0, c])
    }

    #[test]
    fn euclid_on_small_rational() {
        let k = field(5);
        let cf = rational_to_cf(&Polynomial::from_ints(k, &[-1, 0, 1]), &lin(k, 1)).unwrap();
        assert_eq!(cf.partial_quotients(), &[lin(k, 1), lin(k, 4)]);
        let f = Polynomial::from_ints(k, &[1, 2, 3]);
        let one = Polynomial::one(k);
        assert_eq!(
            rational_to_cf(&f, &one).unwrap().partial_quotients(),
            std::slice::from_ref(&f)
        );
        assert_eq!(rational_to_cf(&f, &Polynomial::zero(k)), Err(Error::NotRational));
    }

    #[test]
    fn constant_first_quotient_is_flagged() {
        let k = field(7);
        let cf = rational_to_cf(&lin(k, 1), &Polynomial::from_ints(k, &[1, 1])).unwrap();
        assert!(cf.constant_first());
        let cf = rational_to_cf(&Polynomial::from_ints(k, &[1, 0, 1]), &lin(k, 1)).unwrap();
        assert!(!cf.constant_first());
    }

    #[test]
    fn continuants_of_published_prefixes() {
        let k = field(7);
        let cf = CfExpansion::new(k, vec![lin(k, 2), lin(k, 6), lin(k, 6)]);
        let c = cf.continuants();
        assert!(c.determinant_holds());
        assert_eq!(c.x[1], lin(k, 2));
        assert_eq!(c.y[1], Polynomial::one(k));

        let k = field(13);
        let cf = CfExpansion::new(k, [1, 12, 7, 11, 8, 5].iter().map(|&c| lin(k, c)).collect());
        let c = cf.continuants();
        let det = &(&c.x[6] * &c.y[5]) - &(&c.x[5] * &c.y[6]);
        assert_eq!(det, Polynomial::one(k));
    }

    #[test]
    fn scalar_cf_evaluation() {
        let k = field(5);
        assert_eq!(eval_scalar_cf(&[k.elem(2), k.elem(3)]).unwrap(), k.elem(4));
        let k = field(7);
        assert_eq!(eval_scalar_cf(&[k.elem(2), k.elem(3)]).unwrap(), k.zero());
        assert!(eval_scalar_cf_nonzero(&[k.elem(2), k.elem(3)]).is_err());
        assert_eq!(eval_scalar_cf(&[k.elem(4)]).unwrap(), k.elem(4));
        assert_eq!(
            eval_scalar_cf(&[k.elem(1), k.elem(2), k.elem(3), k.elem(0)]),
            Err(Error::ScalarCfUndefined { index: 4 })
        );
    }

    #[test]
    fn tail_map_inverts_convergent_map() {
        let k = field(7);
        let cf = CfExpansion::new(k, vec![lin(k, 2), lin(k, 6), lin(k, 6)]);
        let c = cf.continuants();
        for l in 1..=3 {
            let f = convergent_map(&c, l).unwrap();
            let g = tail_from_convergents(&c, l).unwrap();
            let id = f.compose(&g);
            assert!(id.b.is_zero() && id.c.is_zero());
            assert_eq!(id.a, id.d);
            assert!(id.a.is_constant());
        }
        let g = tail_from_convergents(&c, 1).unwrap();
        // alpha_2 = 1 / (alpha - a_1)
        assert!(g.a.is_zero());
        assert_eq!(g.b, Polynomial::one(k));
        assert_eq!(g.c, Polynomial::one(k));
        assert_eq!(g.d, -&lin(k, 2));
    }
}
