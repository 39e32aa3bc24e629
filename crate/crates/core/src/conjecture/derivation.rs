//! Extraction of the Frobenius relation `alpha^p = e1 P_{k,a} alpha_{l+1} + e2 Q_{k,a}`
//! for the quartic root, from `alpha^p` and `alpha^(p+1)` in the power basis.

use crate::cf::CfExpansion;
use crate::error::{Error, Result};
use crate::ff::{Coeff, Fp, PrimeField};
use crate::hyperquadratic::family::{p_power, PQFamily};
use crate::hyperquadratic::relation::{cf_value_series, FrobeniusRelation};
use crate::mkaouar::{expand_root, AlgebraicState};
use crate::poly::{Degree, Polynomial};
use crate::series::LaurentSeries;

use super::power::power_table;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTrace {
    pub p: u32,
    pub a_p: Polynomial,
    pub a_p1: Polynomial,
    pub u_p: Polynomial,
    pub v_p: Polynomial,
    /// `gcd(a_p, a_{p+1})`, scaled so that `a*_{p+1} = x_l`.
    pub delta: Polynomial,
    pub a_star_p: Polynomial,
    pub a_star_p1: Polynomial,
    pub u_star: Polynomial,
    pub v_star: Polynomial,
    pub w: Polynomial,
    pub l: usize,
    pub k: usize,
    pub eps1: Fp,
    pub eps2: Fp,
    pub a: Fp,
    /// `(-1)^l (x_{l-1} V* - y_{l-1} U*)`, which should be `e2 Q_{k,a}`.
    pub q_part: Polynomial,
    /// The Mkaouar expansion used along the way; at least `l + 2` terms.
    pub expansion: CfExpansion,
}

impl DerivationTrace {
    pub fn relation(&self) -> Result<FrobeniusRelation> {
        let fam = PQFamily::new(PrimeField::new(self.p as u64)?, self.k, self.a)?;
        Ok(FrobeniusRelation {
            frobenius_exponent: 1,
            l: self.l,
            eps1: self.eps1,
            eps2: self.eps2,
            p_poly: fam.p_poly,
            q_poly: fam.q_poly,
        })
    }

    /// `(a_1, ..., a_l)`.
    pub fn alpha_prefix(&self) -> &[Polynomial] {
        &self.expansion.partial_quotients()[..self.l]
    }
}

fn deg(f: &Polynomial) -> i64 {
    f.degree().finite().unwrap_or(i64::MIN / 4)
}

/// Runs the derivation with the default expansion length.
pub fn derive_frobenius_relation(field: PrimeField) -> Result<DerivationTrace> {
    let p = field.modulus() as usize;
    derive_frobenius_relation_with(field, p + 4)
}

/// As [`derive_frobenius_relation`] with `terms` partial quotients of the
/// Mkaouar expansion available for locating the convergent.
pub fn derive_frobenius_relation_with(field: PrimeField, terms: usize) -> Result<DerivationTrace> {
    let p = field.modulus() as u64;
    if p % 3 != 1 {
        return Err(Error::WrongResidueClass {
            p: p as u32,
            expected: "1 mod 3",
        });
    }
    let table = power_table(field, p + 1);
    let (ep, ep1) = (&table[p as usize], &table[p as usize + 1]);
    let compat = &(&ep.a * &ep1.b) - &(&ep1.a * &ep.b);
    if !compat.is_zero() {
        return Err(Error::DerivationInapplicable(format!(
            "a_p b_(p+1) - a_(p+1) b_p = {compat} is not zero"
        )));
    }
    let u_p = &(&ep.a * &ep1.d) - &(&ep1.a * &ep.d);
    let v_p = &(&ep1.a * &ep.c) - &(&ep.a * &ep1.c);
    let gcd = ep.a.gcd_monic(&ep1.a)?;
    let a_star_p = ep.a.div_exact(&gcd).ok_or(Error::GcdUndefined)?;
    let a_star_p1 = ep1.a.div_exact(&gcd).ok_or(Error::GcdUndefined)?;

    let expansion = expand_root(&AlgebraicState::quartic(field)?, terms)?;
    let alpha = cf_value_series(&expansion)?;

    // |alpha - a*_{p+1}/a*_p| < |a*_p|^-2 makes the ratio a convergent.
    let ratio = LaurentSeries::from_rational(&a_star_p1, &a_star_p, alpha.low().unwrap_or(0))?;
    let gap = alpha.first_difference(&ratio, alpha.low().unwrap_or(0))?;
    if gap >= Degree::Finite(-2 * deg(&a_star_p)) {
        return Err(Error::PatternMismatch(format!(
            "a*_(p+1)/a*_p is not a convergent: difference at T^{gap}"
        )));
    }

    let cont = expansion.continuants();
    let l = (1..=cont.len())
        .find(|&j| cont.y[j].scalar_ratio(&a_star_p).is_some() && cont.x[j].scalar_ratio(&a_star_p1).is_some())
        .ok_or_else(|| Error::PatternMismatch("a*_(p+1)/a*_p is not among the computed convergents".into()))?;
    if l + 1 >= cont.len() {
        return Err(Error::InsufficientExpansion(format!(
            "convergent index {l} needs a longer expansion"
        )));
    }
    // Fix the free constant of the gcd so that a*_{p+1} = x_l, a*_p = y_l.
    let c = a_star_p1.scalar_ratio(&cont.x[l]).expect("checked above");
    if a_star_p.scalar_ratio(&cont.y[l]) != Some(c) {
        return Err(Error::PatternMismatch(
            "numerator and denominator scale differently".into(),
        ));
    }
    let delta = gcd.scale(c);
    let a_star_p = cont.y[l].clone();
    let a_star_p1 = cont.x[l].clone();

    let u_star = &(&a_star_p * &ep1.d) - &(&a_star_p1 * &ep.d);
    let v_star = &(&a_star_p1 * &ep.c) - &(&a_star_p * &ep1.c);
    let w = &(&a_star_p1 * &v_star) - &(&a_star_p * &u_star);

    // |a*_p alpha^p + V*| > |a*_p W|
    let lhs = alpha
        .frobenius()
        .mul_poly(&a_star_p)?
        .add(&LaurentSeries::from_poly(&v_star));
    let lhs_deg = lhs.valuation()?;
    if lhs_deg <= Degree::Finite(deg(&a_star_p) + deg(&w)) {
        return Err(Error::PatternMismatch(format!(
            "|a*_p alpha^p + V*| = T^{lhs_deg} does not exceed |a*_p W|"
        )));
    }

    let sign = if l % 2 == 0 { field.one() } else { -field.one() };
    let w_signed = w.scale(sign);
    let q_part = (&(&cont.x[l - 1] * &v_star) - &(&cont.y[l - 1] * &u_star)).scale(sign);

    let (eps1, a, k) = factor_p_part(field, &w_signed)?;
    let fam = PQFamily::new(field, k, a)?;
    let eps2 = q_part
        .scalar_ratio(&fam.q_poly)
        .ok_or_else(|| Error::PatternMismatch(format!("{q_part} is not a multiple of Q_(k,a) = {}", fam.q_poly)))?;

    Ok(DerivationTrace {
        p: p as u32,
        a_p: ep.a.clone(),
        a_p1: ep1.a.clone(),
        u_p,
        v_p,
        delta,
        a_star_p,
        a_star_p1,
        u_star,
        v_star,
        w,
        l,
        k,
        eps1,
        eps2,
        a,
        q_part,
        expansion,
    })
}

/// Writes `f = e (T^2 + a)^k` with `e, a` nonzero and `2k < p`.
fn factor_p_part(field: PrimeField, f: &Polynomial) -> Result<(Fp, Fp, usize)> {
    let mismatch = || Error::PatternMismatch(format!("W = {f} is not of the form e (T^2 + a)^k"));
    let d = f.deg().ok_or_else(mismatch)?;
    if d == 0 || d % 2 == 1 || d >= field.modulus() as usize {
        return Err(mismatch());
    }
    let k = d / 2;
    let eps = f.leading().expect("nonzero");
    let monic = f.monic();
    let a = monic.coeff(d - 2) / field.elem(k as i64);
    if a.is_zero() || p_power(field, k as u64, a) != monic {
        return Err(mismatch());
    }
    Ok((eps, a, k))
}
