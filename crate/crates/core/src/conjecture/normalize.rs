//! The change of variables `beta(T) = v alpha(v T)` with `v^2 = -a`, which
//! moves a relation with `(P_{k,a}, Q_{k,a})` to one with `(P_k, Q_k)`.

use crate::error::{Error, Result};
use crate::ff::{sqrt_in_ext, Coeff, Fp, Fp2};
use crate::poly::Polynomial;

use super::derivation::DerivationTrace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedRelation {
    pub p: u32,
    pub l: usize,
    pub k: usize,
    pub v: Fp2,
    pub eps1_prime: Fp,
    pub eps2_prime: Fp,
    /// `b_1 .. b_l`.
    pub b_prefix: Vec<Polynomial>,
    /// `b_j = lambda_j T`.
    pub lambdas: Vec<Fp>,
}

/// `v^((-1)^n)`.
fn alt(v: Fp2, n: usize) -> Fp2 {
    if n.is_multiple_of(2) {
        v
    } else {
        v.inv().expect("v is nonzero")
    }
}

/// `b_n(T) = v^((-1)^(n+1)) a_n(v T)`, required to land in `F_p[T]`.
pub fn alpha_to_beta(a_n: &Polynomial, n: usize, v: Fp2) -> Result<Polynomial> {
    a_n.scale_variable_ext(v)?.scale(alt(v, n + 1)).to_base()
}

/// `a_n(T) = v^((-1)^n) b_n(T / v)`, the inverse of [`alpha_to_beta`].
pub fn beta_to_alpha(b_n: &Polynomial, n: usize, v: Fp2) -> Result<Polynomial> {
    let v_inv = v.inv().ok_or(Error::DegenerateScaling)?;
    b_n.scale_variable_ext(v_inv)?.scale(alt(v, n)).to_base()
}

pub fn normalize_to_beta(trace: &DerivationTrace) -> Result<NormalizedRelation> {
    let field = trace.a.field();
    let p = field.modulus() as u64;
    let (l, k) = (trace.l, trace.k);
    let minus_a = -trace.a;
    let v = sqrt_in_ext(minus_a);

    let sign_l: i64 = if l % 2 == 0 { 1 } else { -1 };
    let e1_exp = k as u64 + (p as i64 - sign_l) as u64 / 2;
    let e2_exp = k as u64 + (p - 1) / 2;
    let eps1_prime = minus_a.pow(e1_exp) * trace.eps1;
    let eps2_prime = minus_a.pow(e2_exp) * trace.eps2;

    // Direct route: beta^p = v^p alpha^p(vT), P_{k,a}(vT) = (-a)^k P_k,
    // Q_{k,a}(vT) = (-a)^(k-1) v Q_k, beta_{l+1} = v^((-1)^l) alpha_{l+1}(vT).
    let ext = v.extension();
    let vp = v.pow(p);
    let direct1 = vp * alt(v, l + 1) * ext.embed(minus_a.pow(k as u64) * trace.eps1);
    let direct2 = vp * v * ext.embed(minus_a.pow(k as u64 - 1) * trace.eps2);
    if direct1.to_base() != Some(eps1_prime) || direct2.to_base() != Some(eps2_prime) {
        return Err(Error::PatternMismatch(
            "normalized constants disagree between closed form and direct substitution".into(),
        ));
    }

    let b_prefix = trace
        .alpha_prefix()
        .iter()
        .enumerate()
        .map(|(j, a)| alpha_to_beta(a, j + 1, v))
        .collect::<Result<Vec<_>>>()?;
    let lambdas = b_prefix
        .iter()
        .map(|b| match (b.deg(), b.coeff(0).is_zero()) {
            (Some(1), true) => Ok(b.coeff(1)),
            _ => Err(Error::PatternMismatch(format!("b = {b} is not a multiple of T"))),
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(NormalizedRelation {
        p: p as u32,
        l,
        k,
        v,
        eps1_prime,
        eps2_prime,
        b_prefix,
        lambdas,
    })
}
