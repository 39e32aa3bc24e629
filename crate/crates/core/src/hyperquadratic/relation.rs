//! Numerical check of a Frobenius relation
//! `alpha^(p^e) = e1 P alpha_{l+1} + e2 Q` against a computed expansion.

use crate::cf::CfExpansion;
use crate::error::{Error, Result};
use crate::ff::{Fp, PrimeField};
use crate::poly::{Degree, Polynomial};
use crate::series::LaurentSeries;

use super::family::PQFamily;
use super::perfect::PerfectExpansionSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusRelation {
    /// `alpha` is raised to `p^frobenius_exponent`.
    pub frobenius_exponent: u32,
    pub l: usize,
    pub eps1: Fp,
    pub eps2: Fp,
    pub p_poly: Polynomial,
    pub q_poly: Polynomial,
}

impl FrobeniusRelation {
    /// The Frobenius relation of a type `(p, l, k)` spec, with `P_k`, `Q_k` at `a = -1`.
    pub fn from_spec(spec: &PerfectExpansionSpec) -> Result<Self> {
        let fam = PQFamily::normalized(spec.field(), spec.k())?;
        Ok(FrobeniusRelation {
            frobenius_exponent: 1,
            l: spec.l(),
            eps1: spec.eps1(),
            eps2: spec.eps2(),
            p_poly: fam.p_poly,
            q_poly: fam.q_poly,
        })
    }
}

/// Value of a finite expansion as a series, with the truncation error of
/// the last convergent accounted for (known down to `-2 deg y_N`).
pub fn cf_value_series(cf: &CfExpansion) -> Result<LaurentSeries> {
    let (x, y) = cf.to_rational()?;
    let dy = y.deg().ok_or(Error::ZeroSeries)? as i64;
    let s = LaurentSeries::from_rational(&x, &y, -2 * dy)?;
    Ok(s.truncate(-2 * dy))
}

/// Highest exponent `>= -precision` where the two sides of `rel` differ on
/// the expansion `cf`; `-inf` when they agree to that precision.
pub fn relation_residual(cf: &CfExpansion, rel: &FrobeniusRelation, precision: i64) -> Result<Degree> {
    if cf.len() <= rel.l + 1 {
        return Err(Error::InsufficientExpansion(format!(
            "{} partial quotients do not determine a tail after index {}",
            cf.len(),
            rel.l
        )));
    }
    let floor = -precision;
    let mut lhs = cf_value_series(cf)?;
    for _ in 0..rel.frobenius_exponent {
        lhs = lhs.frobenius();
    }
    let tail = cf_value_series(&cf.tail(rel.l))?;
    let rhs = tail
        .mul_poly(&rel.p_poly)?
        .scale(rel.eps1)
        .add(&LaurentSeries::from_poly(&rel.q_poly).scale(rel.eps2));
    lhs.first_difference(&rhs, floor).map_err(|e| match e {
        Error::PrecisionExhausted(m) => Error::InsufficientExpansion(m),
        other => other,
    })
}

/// Convenience: the relation of `spec` over `field`.
pub fn spec_residual(
    field: PrimeField,
    spec: &PerfectExpansionSpec,
    cf: &CfExpansion,
    precision: i64,
) -> Result<Degree> {
    debug_assert_eq!(field, spec.field());
    relation_residual(cf, &FrobeniusRelation::from_spec(spec)?, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperquadratic::perfect::theorem1_generate;

    fn p13_spec() -> PerfectExpansionSpec {
        let f = PrimeField::new(13).unwrap();
        let lam = [5, 12, 9, 11, 1, 5].iter().map(|&x| f.elem(x)).collect();
        PerfectExpansionSpec::with_zero_indices(f, 4, f.elem(12), f.elem(9), lam).unwrap()
    }

    #[test]
    fn generated_expansion_satisfies_relation() {
        let spec = p13_spec();
        let g = theorem1_generate(&spec, 100).unwrap();
        let rel = FrobeniusRelation::from_spec(&spec).unwrap();
        assert_eq!(relation_residual(&g.cf, &rel, 80).unwrap(), Degree::NegInfinity);
    }

    #[test]
    fn perturbed_relation_fails() {
        let spec = p13_spec();
        let g = theorem1_generate(&spec, 100).unwrap();
        let mut rel = FrobeniusRelation::from_spec(&spec).unwrap();
        rel.eps2 += rel.eps2.field().one();
        assert!(relation_residual(&g.cf, &rel, 80).unwrap().finite().is_some());
    }

    #[test]
    fn short_expansion_is_rejected() {
        let spec = p13_spec();
        let g = theorem1_generate(&spec, 6).unwrap();
        let rel = FrobeniusRelation::from_spec(&spec).unwrap();
        assert!(matches!(
            relation_residual(&g.cf, &rel, 80),
            Err(Error::InsufficientExpansion(_))
        ));
        let g = theorem1_generate(&spec, 12).unwrap();
        assert!(matches!(
            relation_residual(&g.cf, &rel, 10_000),
            Err(Error::InsufficientExpansion(_))
        ));
    }
}
