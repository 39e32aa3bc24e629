//! The pair `P_{k,a} = (T^2 + a)^k`, `Q_{k,a} = int_0^T P_{k-1,a}`, the
//! constants attached to `P_k / Q_k`, and the sequence `A_{i,k}`.

use crate::error::{Error, Result};
use crate::ff::{Coeff, Fp, PrimeField};
use crate::poly::Polynomial;

/// `(T^2 + a)^m` for any `m >= 0`.
pub fn p_power(field: PrimeField, m: u64, a: Fp) -> Polynomial {
    Polynomial::from_coeffs(field, vec![a, field.zero(), field.one()]).pow(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PQFamily {
    pub k: usize,
    pub a: Fp,
    pub p_poly: Polynomial,
    pub q_poly: Polynomial,
}

impl PQFamily {
    /// Requires `1 <= k` and `2k < p` (so the integration is defined) and `a != 0`.
    pub fn new(field: PrimeField, k: usize, a: Fp) -> Result<Self> {
        check_k(field, k)?;
        if a.is_zero() {
            return Err(Error::OutOfRange("a must be nonzero".into()));
        }
        let p_poly = p_power(field, k as u64, a);
        let q_poly = p_power(field, k as u64 - 1, a).formal_integral()?;
        Ok(PQFamily { k, a, p_poly, q_poly })
    }

    /// The `a = -1` case, `P_k = (T^2 - 1)^k`.
    pub fn normalized(field: PrimeField, k: usize) -> Result<Self> {
        Self::new(field, k, field.elem(-1))
    }
}

pub(crate) fn check_k(field: PrimeField, k: usize) -> Result<()> {
    if k == 0 || 2 * k >= field.modulus() as usize {
        return Err(Error::OutOfRange(format!(
            "k = {k} must satisfy 1 <= k < p/2 (p = {})",
            field.modulus()
        )));
    }
    Ok(())
}

/// `theta_k` and `v_{1,k} .. v_{2k,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PQConstants {
    pub k: usize,
    pub theta: Fp,
    /// `v[i - 1]` is `v_{i,k}`.
    pub v: Vec<Fp>,
}

impl PQConstants {
    pub fn new(field: PrimeField, k: usize) -> Result<Self> {
        check_k(field, k)?;
        let kk = k as i64;
        let mut theta = field.elem(if k.is_multiple_of(2) { 1 } else { -1 });
        for j in 1..=kk {
            theta *= field.one() - field.rational(1, 2 * j)?;
        }
        let mut v = Vec::with_capacity(2 * k);
        v.push(field.elem(2 * kk - 1));
        for i in 1..2 * kk {
            let num = field.elem((2 * kk - 2 * i - 1) * (2 * kk - 2 * i + 1));
            let den = field.elem(i * (2 * kk - i));
            let prev = *v.last().expect("nonempty");
            v.push(num / den / prev);
        }
        Ok(PQConstants { k, theta, v })
    }

    /// `v_{i,k}` with 1-based `i`.
    pub fn v(&self, i: usize) -> Fp {
        self.v[i - 1]
    }

    /// `-4 k^2 theta_k^2`, the factor relating `P_k/Q_k` to its reversal.
    pub fn reversal_factor(&self) -> Fp {
        let f = self.theta.field();
        let k = f.elem(self.k as i64);
        -(f.elem(4) * k * k * self.theta * self.theta)
    }
}

/// `A_{0,k} = T`, `A_{i+1,k} = [A_{i,k}^p / P_k]`, for `i = 0..=i_max`.
pub fn a_sequence(field: PrimeField, k: usize, i_max: usize) -> Result<Vec<Polynomial>> {
    let pk = PQFamily::normalized(field, k)?.p_poly;
    let mut out = Vec::with_capacity(i_max + 1);
    out.push(Polynomial::t(field));
    for i in 0..i_max {
        let next = out[i].frobenius().quo(&pk)?;
        out.push(next);
    }
    Ok(out)
}

/// Closed form `deg A_{i,k} = (p^i (p - 1 - 2k) + 2k) / (p - 1)`.
pub fn a_degree(p: u64, k: u64, i: u32) -> u64 {
    (p.pow(i) * (p - 1 - 2 * k) + 2 * k) / (p - 1)
}
