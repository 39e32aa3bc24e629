//! Exact checks of the continued fraction identities satisfied by `P_k / Q_k`
//! and by `P_{kp-i} / Q_k^p`.

use serde::Serialize;

use crate::cf::{eval_scalar_cf, rational_to_cf, CfExpansion};
use crate::error::Result;
use crate::ff::{Coeff, Fp, PrimeField};
use crate::poly::Polynomial;

use super::family::{a_sequence, check_k, p_power, PQConstants, PQFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop1Report {
    pub p: u32,
    pub k: usize,
    pub theta: u32,
    pub cf_matches: bool,
    pub reversal_holds: bool,
    /// `A_i^p = A_{i+1} P_k - 2k theta^(i+1) Q_k` for `i = 0, 1, 2`.
    pub a_identity: [bool; 3],
    /// First partial quotient index (1-based) where Euclid disagrees.
    pub first_mismatch: Option<usize>,
}

impl Prop1Report {
    pub fn passed(&self) -> bool {
        self.cf_matches && self.reversal_holds && self.a_identity.iter().all(|&b| b)
    }
}

fn linear_quotients(scalars: &[Fp]) -> Vec<Polynomial> {
    scalars.iter().map(|&c| Polynomial::monomial(c, 1)).collect()
}

fn first_mismatch(a: &[Polynomial], b: &[Polynomial]) -> Option<usize> {
    (0..a.len().max(b.len())).find(|&j| a.get(j) != b.get(j)).map(|j| j + 1)
}

/// `num / den == c * [b_n, ..., b_1]` where `b` is `cf` reversed.
fn reversal_holds(num: &Polynomial, den: &Polynomial, cf: &[Polynomial], c: Fp) -> Result<bool> {
    let field = num.field();
    let rev: Vec<Polynomial> = cf.iter().rev().cloned().collect();
    let (rn, rd) = CfExpansion::new(field, rev).to_rational()?;
    Ok((num * &rd) == (&rn * den).scale(c))
}

pub fn prop1_verify(field: PrimeField, k: usize) -> Result<Prop1Report> {
    let fam = PQFamily::normalized(field, k)?;
    let consts = PQConstants::new(field, k)?;
    let predicted = linear_quotients(&consts.v);
    let euclid = rational_to_cf(&fam.p_poly, &fam.q_poly)?;
    let first_mismatch = first_mismatch(euclid.partial_quotients(), &predicted);
    let reversal = reversal_holds(&fam.p_poly, &fam.q_poly, &predicted, consts.reversal_factor())?;

    let a = a_sequence(field, k, 3)?;
    let two_k = field.elem(2 * k as i64);
    let mut a_identity = [false; 3];
    for (i, slot) in a_identity.iter_mut().enumerate() {
        let lhs = a[i].frobenius();
        let rhs = &(&a[i + 1] * &fam.p_poly) - &fam.q_poly.scale(two_k * consts.theta.pow(i as u64 + 1));
        *slot = lhs == rhs;
    }
    Ok(Prop1Report {
        p: field.modulus(),
        k,
        theta: consts.theta.value(),
        cf_matches: first_mismatch.is_none(),
        reversal_holds: reversal,
        a_identity,
        first_mismatch,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Prop2Outcome {
    Pass,
    Fail {
        first_mismatch: Option<usize>,
        reversal_holds: bool,
    },
    /// `delta_j` is undefined or zero, so the predicted list cannot be built.
    Undefined {
        j: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop2Report {
    pub p: u32,
    pub k: usize,
    pub i: usize,
    pub outcome: Prop2Outcome,
}

impl Prop2Report {
    pub fn passed(&self) -> bool {
        self.outcome == Prop2Outcome::Pass
    }
}

/// `delta_j = 2 i theta_i [v_{j,k}, ..., v_{1,k}]` for `j = 1..2k-1`.
fn prop2_deltas(field: PrimeField, ck: &PQConstants, ci: &PQConstants) -> std::result::Result<Vec<Fp>, usize> {
    let scale = field.elem(2 * ci.k as i64) * ci.theta;
    (1..2 * ck.k)
        .map(|j| {
            let entries: Vec<Fp> = (1..=j).rev().map(|m| ck.v(m)).collect();
            match eval_scalar_cf(&entries) {
                Ok(x) if !x.is_zero() => Ok(scale * x),
                _ => Err(j),
            }
        })
        .collect()
}

/// Predicted expansion of `P_{kp-i} / Q_k^p`, or the first undefined `j`.
pub fn prop2_predicted(field: PrimeField, k: usize, i: usize) -> Result<std::result::Result<Vec<Polynomial>, usize>> {
    check_k(field, k)?;
    check_k(field, i)?;
    let ck = PQConstants::new(field, k)?;
    let ci = PQConstants::new(field, i)?;
    let a1 = a_sequence(field, i, 1)?.pop().expect("two entries");
    let deltas = match prop2_deltas(field, &ck, &ci) {
        Ok(d) => d,
        Err(j) => return Ok(Err(j)),
    };
    let mut out = Vec::with_capacity(2 * k + (2 * k - 1) * 2 * i);
    for (j, &d) in deltas.iter().enumerate() {
        out.push(a1.scale(ck.v(j + 1)));
        let d_inv = d.inv().expect("nonzero");
        for m in 1..=2 * i {
            let s = if m % 2 == 1 { d_inv } else { d };
            out.push(Polynomial::monomial(-(s * ci.v(m)), 1));
        }
    }
    out.push(a1.scale(ck.v(2 * k)));
    Ok(Ok(out))
}

pub fn prop2_verify(field: PrimeField, k: usize, i: usize) -> Result<Prop2Report> {
    let report = |outcome| Prop2Report {
        p: field.modulus(),
        k,
        i,
        outcome,
    };
    let predicted = match prop2_predicted(field, k, i)? {
        Ok(v) => v,
        Err(j) => return Ok(report(Prop2Outcome::Undefined { j })),
    };
    let p = field.modulus() as u64;
    let num = p_power(field, k as u64 * p - i as u64, field.elem(-1));
    let den = PQFamily::normalized(field, k)?.q_poly.frobenius();
    let euclid = rational_to_cf(&num, &den)?;
    let mismatch = first_mismatch(euclid.partial_quotients(), &predicted);
    let factor = PQConstants::new(field, k)?.reversal_factor();
    let reversal = reversal_holds(&num, &den, &predicted, factor)?;
    Ok(report(if mismatch.is_none() && reversal {
        Prop2Outcome::Pass
    } else {
        Prop2Outcome::Fail {
            first_mismatch: mismatch,
            reversal_holds: reversal,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn prop1_examples() {
        for (p, kk, theta) in [(13, 4, 2), (7, 2, 3), (5, 1, 2)] {
            let r = prop1_verify(k(p), kk).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.theta, theta);
        }
    }

    #[test]
    fn prop1_detects_wrong_factor() {
        let f = k(11);
        let fam = PQFamily::normalized(f, 3).unwrap();
        let c = PQConstants::new(f, 3).unwrap();
        let pred = linear_quotients(&c.v);
        assert!(reversal_holds(&fam.p_poly, &fam.q_poly, &pred, c.reversal_factor()).unwrap());
        assert!(!reversal_holds(&fam.p_poly, &fam.q_poly, &pred, c.reversal_factor() + f.one()).unwrap());
    }

    #[test]
    fn prop2_small_case_shape() {
        let f = k(7);
        let pred = prop2_predicted(f, 1, 1).unwrap().unwrap();
        assert_eq!(pred.len(), 4);
        assert_eq!(pred[0].deg(), Some(5));
        assert_eq!(pred[1].deg(), Some(1));
        assert!(prop2_verify(f, 1, 1).unwrap().passed());
    }

    #[test]
    fn prop2_larger_case() {
        let r = prop2_verify(k(13), 4, 4).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
