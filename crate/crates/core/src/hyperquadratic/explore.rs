//! Expansions of type `(p, l, k)` computed straight from their definition,
//! independently of the closed recurrences, and a sweep over all parameter
//! tuples of a type recording which expansions come out perfect.

use crate::cf::CfExpansion;
use crate::error::{Error, Result};
use crate::ff::{Fp, PrimeField};
use crate::mkaouar::cf_from_series;
use crate::poly::Polynomial;
use crate::series::LaurentSeries;

use super::family::{a_sequence, PQFamily};
use super::index::IndexSequence;
use super::perfect::PerfectExpansionSpec;
use super::relation::FrobeniusRelation;

/// Largest number of series coefficients [`expand_from_relation`] works with.
pub const DEFAULT_PRECISION_BUDGET: i64 = 1 << 14;

/// First `count` partial quotients of the `alpha` with prescribed
/// `a_1 .. a_l` and `alpha^(p^e) = e1 P alpha_{l+1} + e2 Q`.
pub fn expand_from_relation(first: &[Polynomial], rel: &FrobeniusRelation, count: usize) -> Result<CfExpansion> {
    let cf = expand_from_relation_budget(first, rel, count, DEFAULT_PRECISION_BUDGET)?;
    if cf.len() < count {
        return Err(Error::PrecisionExhausted(format!(
            "only {} of {count} partial quotients certified within the precision budget",
            cf.len()
        )));
    }
    Ok(cf)
}

/// As [`expand_from_relation`], but returns the certified prefix (possibly
/// shorter than `count`) once `max_precision` coefficients do not suffice.
///
/// Iterates `alpha <- f_l((alpha^(p^e) - e2 Q) / (e1 P))` on power series;
/// every round multiplies the known precision by about `p^e` up to a cap,
/// and the cap doubles when it is reached.
pub fn expand_from_relation_budget(
    first: &[Polynomial],
    rel: &FrobeniusRelation,
    count: usize,
    max_precision: i64,
) -> Result<CfExpansion> {
    if first.len() != rel.l || first.is_empty() {
        return Err(Error::OutOfRange(format!(
            "need exactly l = {} initial quotients",
            rel.l
        )));
    }
    if first.iter().any(|a| a.deg().unwrap_or(0) == 0) {
        return Err(Error::OutOfRange(
            "initial partial quotients must have degree >= 1".into(),
        ));
    }
    let field = first[0].field();
    let prefix = CfExpansion::new(field, first.to_vec());
    let cont = prefix.continuants();
    let l = rel.l;
    let (xl, xl1, yl, yl1) = (&cont.x[l], &cont.x[l - 1], &cont.y[l], &cont.y[l - 1]);
    let dy = yl.deg().expect("nonzero") as i64;
    let mut alpha = LaurentSeries::from_rational(xl, yl, -2 * dy)?.truncate(-2 * dy);
    let q_term = LaurentSeries::from_poly(&rel.q_poly).scale(rel.eps2);
    let p_series = LaurentSeries::from_poly(&rel.p_poly).scale(rel.eps1);
    let mut target = (-4 * (dy + count as i64)).max(-max_precision);
    let mut best = prefix;
    loop {
        let mut power = alpha.clone();
        for _ in 0..rel.frobenius_exponent {
            power = power.frobenius();
        }
        let low = power.low().unwrap_or(-1).max(target);
        let z = power.truncate(low).sub(&q_term).div_to(&p_series, low)?;
        let num = z.mul_poly(xl)?.add(&LaurentSeries::from_poly(xl1));
        let den = z.mul_poly(yl)?.add(&LaurentSeries::from_poly(yl1));
        let next = num.div_to(&den, num.low().unwrap_or(-1))?.truncate(target);
        let cf = cf_from_series(&next)?;
        if cf.len() < l || cf.partial_quotients()[..l] != *first {
            return Err(Error::PatternMismatch(
                "prescribed quotients are not reproduced: the relation is inconsistent with them".into(),
            ));
        }
        if cf.len() >= count {
            return Ok(cf.truncated(count));
        }
        let stalled = next.low() >= alpha.low();
        if cf.len() > best.len() {
            best = cf;
        }
        if stalled {
            if target <= -max_precision {
                return Ok(best);
            }
            target = (2 * target).max(-max_precision);
        }
        alpha = next;
    }
}

/// `Some((lambda, i))` if `a = lambda A_{i,k}` for one of the given `A_{i,k}`.
pub fn match_a_multiple(a: &Polynomial, a_polys: &[Polynomial]) -> Option<(Fp, usize)> {
    a_polys
        .iter()
        .enumerate()
        .find_map(|(i, ai)| a.scalar_ratio(ai).map(|c| (c, i)))
}

/// Number of leading partial quotients that are scalar multiples of some
/// `A_{i,k}` (with `i <= i_max`).
pub fn perfect_prefix_len(cf: &CfExpansion, k: usize, i_max: usize) -> Result<usize> {
    let a_polys = a_sequence(cf.field(), k, i_max)?;
    Ok(cf
        .partial_quotients()
        .iter()
        .take_while(|a| match_a_multiple(a, &a_polys).is_some())
        .count())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeSample {
    pub eps1: Fp,
    pub eps2: Fp,
    pub lambdas: Vec<Fp>,
    /// Whether [`PerfectExpansionSpec::new`] accepts the tuple.
    pub criterion: bool,
    /// Whether the first `count` partial quotients are all multiples of some
    /// `A_{i,k}`; `None` if the precision budget ran out before a verdict.
    pub perfect: Option<bool>,
}

/// Every `(e1, e2, lambda_1..lambda_l)` of type `(p, l, k)` with
/// `a_j = lambda_j T`, expanded to `count` terms. Exploratory only.
pub fn type_sweep(field: PrimeField, l: usize, k: usize, count: usize, max_precision: i64) -> Result<Vec<TypeSample>> {
    let fam = PQFamily::normalized(field, k)?;
    let units: Vec<Fp> = field.nonzero_elements().collect();
    let total = units
        .len()
        .checked_pow(l as u32 + 2)
        .filter(|&n| n <= 1 << 16)
        .ok_or_else(|| Error::OutOfRange(format!("(p-1)^(l+2) tuples is too many for p = {}", field.modulus())))?;
    let i_max = count.ilog2() as usize + 2;
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let mut digit = || {
            let d = units[c % units.len()];
            c /= units.len();
            d
        };
        let eps1 = digit();
        let eps2 = digit();
        let lambdas: Vec<Fp> = (0..l).map(|_| digit()).collect();
        let criterion =
            PerfectExpansionSpec::new(field, k, eps1, eps2, lambdas.clone(), IndexSequence::zeros(l, k)?).is_ok();
        let first: Vec<Polynomial> = lambdas.iter().map(|&x| Polynomial::monomial(x, 1)).collect();
        let rel = FrobeniusRelation {
            frobenius_exponent: 1,
            l,
            eps1,
            eps2,
            p_poly: fam.p_poly.clone(),
            q_poly: fam.q_poly.clone(),
        };
        let cf = expand_from_relation_budget(&first, &rel, count, max_precision)?;
        let prefix = perfect_prefix_len(&cf, k, i_max)?;
        let perfect = if prefix < cf.len() {
            Some(false)
        } else if cf.len() >= count {
            Some(true)
        } else {
            None
        };
        out.push(TypeSample {
            eps1,
            eps2,
            lambdas,
            criterion,
            perfect,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperquadratic::perfect::theorem1_generate;

    #[test]
    fn relation_expansion_matches_generation() {
        let f = PrimeField::new(7).unwrap();
        let lam: Vec<Fp> = [2, 6, 6].iter().map(|&x| f.elem(x)).collect();
        let spec = PerfectExpansionSpec::with_zero_indices(f, 2, f.elem(3), f.elem(5), lam).unwrap();
        let g = theorem1_generate(&spec, 60).unwrap();
        let rel = FrobeniusRelation::from_spec(&spec).unwrap();
        let direct = expand_from_relation(&g.cf.partial_quotients()[..3], &rel, 60).unwrap();
        assert_eq!(direct, g.cf);
    }

    #[test]
    fn criterion_implies_perfect_small_type() {
        let f = PrimeField::new(5).unwrap();
        let samples = type_sweep(f, 1, 1, 20, 512).unwrap();
        assert_eq!(samples.len(), 64);
        assert!(samples.iter().any(|s| s.criterion));
        for s in &samples {
            if s.criterion {
                assert_eq!(s.perfect, Some(true), "{s:?}");
            }
        }
    }
}
