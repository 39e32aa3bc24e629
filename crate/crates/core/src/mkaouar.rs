//! Continued fraction of the unique large root of `P(X)` in `F_p[T][X]`.
//!
//! If the subleading coefficient dominates (`|a_i| < |a_{n-1}|` for every
//! `i != n-1`), `P` has exactly one root `u` with `|u| >= |T|`, its polynomial
//! part is `-[a_{n-1}/a_n]`, and the complete quotient `1/(u - [u])` is again
//! the dominant root of `X^n P([u] + 1/X)`. Iterating yields the partial
//! quotients one at a time without ever approximating `u`.

use crate::cf::{rational_to_cf, CfExpansion};
use crate::error::{Error, Result};
use crate::ff::{Coeff, PrimeField};
use crate::poly::{Degree, Polynomial};
use crate::series::LaurentSeries;

/// `P(X) = sum a_i X^i` with `a_i` in `F_p[T]`; `coeffs[i]` is `a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicState {
    field: PrimeField,
    coeffs: Vec<Polynomial>,
}

/// Result of one reduction step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// `u = q + 1/v` with `v` the dominant root of `next`.
    Continue { q: Polynomial, next: AlgebraicState },
    /// `P(q) = 0`: the root is the polynomial `q` and the expansion stops.
    Rational { q: Polynomial },
}

impl AlgebraicState {
    pub fn new(field: PrimeField, mut coeffs: Vec<Polynomial>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(AlgebraicState { field, coeffs })
    }

    /// `-X^4/12 - T X^3 + X^2 + 1`, whose dominant root is the inverse of the
    /// root of `x^4 + x^2 - T x - 1/12`.
    pub fn quartic(field: PrimeField) -> Result<Self> {
        if field.modulus() < 5 {
            return Err(Error::OutOfRange("the quartic needs p >= 5".into()));
        }
        let c = |n: i64| Polynomial::constant(field.elem(n));
        let coeffs = vec![
            c(1),
            Polynomial::zero(field),
            c(1),
            Polynomial::from_ints(field, &[0, -1]),
            Polynomial::constant(field.rational(-1, 12)?),
        ];
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// Degree in `X`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Condition (*): `deg a_i < deg a_{n-1}` for all `i != n-1`.
    pub fn check_star(&self) -> bool {
        let n = self.degree();
        let dom = self.coeffs[n - 1].degree();
        dom != Degree::NegInfinity
            && self
                .coeffs
                .iter()
                .enumerate()
                .all(|(i, a)| i == n - 1 || a.degree() < dom)
    }

    /// Coefficients `c_j` of `P(q + Y) = sum c_j Y^j`, by repeated synthetic division.
    pub fn taylor_shift(&self, q: &Polynomial) -> Vec<Polynomial> {
        let n = self.degree();
        let mut c = self.coeffs.clone();
        for i in 0..n {
            for j in (i..n).rev() {
                let t = q * &c[j + 1];
                c[j] += &t;
            }
        }
        c
    }

    /// Evaluates `P` at a polynomial argument.
    pub fn eval(&self, x: &Polynomial) -> Polynomial {
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(self.field), |acc, a| &(&acc * x) + a)
    }

    pub fn step(&self) -> Result<Step> {
        if !self.check_star() {
            return Err(Error::StarViolated(format!("{:?}", self.degrees())));
        }
        let n = self.degree();
        let q = -&self.coeffs[n - 1].quo(&self.coeffs[n])?;
        let shifted = self.taylor_shift(&q);
        if shifted[0].is_zero() {
            return Ok(Step::Rational { q });
        }
        // X^n P(q + 1/X): coefficient of X^(n-j) is c_j.
        let next: Vec<Polynomial> = shifted.into_iter().rev().collect();
        let next = AlgebraicState {
            field: self.field,
            coeffs: next,
        };
        if !next.check_star() {
            return Err(Error::StarViolated(format!("after step: {:?}", next.degrees())));
        }
        Ok(Step::Continue { q, next })
    }

    /// Divides all coefficients by their monic gcd. Roots are unchanged.
    pub fn reduce_content(&self) -> Self {
        let nonzero: Vec<&Polynomial> = self.coeffs.iter().filter(|c| !c.is_zero()).collect();
        let mut g = nonzero[0].monic();
        for c in &nonzero[1..] {
            if g.is_constant() {
                break;
            }
            g = g.gcd_monic(c).expect("nonzero operands");
        }
        if g.is_constant() {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.div_exact(&g).expect("gcd divides every coefficient"))
            .collect();
        AlgebraicState {
            field: self.field,
            coeffs,
        }
    }

    pub fn degrees(&self) -> Vec<Degree> {
        self.coeffs.iter().map(|c| c.degree()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandOptions {
    pub reduce_content: bool,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions { reduce_content: true }
    }
}

/// Iterator over the partial quotients of the dominant root.
pub struct PartialQuotients {
    state: Option<AlgebraicState>,
    opts: ExpandOptions,
}

impl Iterator for PartialQuotients {
    type Item = Result<Polynomial>;

    fn next(&mut self) -> Option<Self::Item> {
        let state = self.state.take()?;
        match state.step() {
            Ok(Step::Rational { q }) => Some(Ok(q)),
            Ok(Step::Continue { q, next }) => {
                self.state = Some(if self.opts.reduce_content {
                    next.reduce_content()
                } else {
                    next
                });
                Some(Ok(q))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

pub fn partial_quotients(state: &AlgebraicState, opts: ExpandOptions) -> PartialQuotients {
    PartialQuotients {
        state: Some(state.clone()),
        opts,
    }
}

/// First `count` partial quotients (fewer if the root is rational).
pub fn expand_root(state: &AlgebraicState, count: usize) -> Result<CfExpansion> {
    expand_root_with(state, count, ExpandOptions::default())
}

pub fn expand_root_with(state: &AlgebraicState, count: usize, opts: ExpandOptions) -> Result<CfExpansion> {
    if count > 0 && !state.check_star() {
        return Err(Error::StarViolated(format!("{:?}", state.degrees())));
    }
    let pq = partial_quotients(state, opts).take(count).collect::<Result<Vec<_>>>()?;
    Ok(CfExpansion::new(state.field, pq))
}

/// The quartic recurrences written out coefficient by coefficient, exactly as
/// the five-array loop computes them (no content reduction).
pub fn expand_quartic_program(field: PrimeField, count: usize) -> Result<CfExpansion> {
    let c = |n: i64| Polynomial::constant(field.elem(n));
    let mut a = Polynomial::constant(field.rational(-1, 12)?);
    let mut b = Polynomial::from_ints(field, &[0, -1]);
    let mut cc = c(1);
    let mut d = Polynomial::zero(field);
    let mut e = c(1);
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(CfExpansion::new(field, out));
    }
    let mut qp = -&b.quo(&a)?;
    out.push(qp.clone());
    while out.len() < count {
        let q2 = &qp * &qp;
        let q3 = &q2 * &qp;
        let q4 = &q3 * &qp;
        let na = &(&(&(&(&a * &q4) + &(&b * &q3)) + &(&cc * &q2)) + &(&d * &qp)) + &e;
        if na.is_zero() {
            break;
        }
        let nb = &(&(&(&a * &q3).scale(field.elem(4)) + &(&b * &q2).scale(field.elem(3)))
            + &(&cc * &qp).scale(field.elem(2)))
            + &d;
        let nc = &(&(&a * &q2).scale(field.elem(6)) + &(&b * &qp).scale(field.elem(3))) + &cc;
        let nd = &(&a * &qp).scale(field.elem(4)) + &b;
        let ne = a;
        (a, b, cc, d, e) = (na, nb, nc, nd, ne);
        qp = -&b.quo(&a)?;
        out.push(qp.clone());
    }
    Ok(CfExpansion::new(field, out))
}

/// Power series of the root `u` of `u^4 + u^2 - T u - 1/12 = 0` in `1/T`,
/// from `T^-1` down to `T^(-1-precision)`.
///
/// Comparing coefficients of `T u = u^4 + u^2 - 1/12` gives each `c_k` from
/// `c_1 .. c_{k-2}`.
pub fn series_root_quartic(field: PrimeField, precision: usize) -> Result<LaurentSeries> {
    if field.modulus() < 5 {
        return Err(Error::OutOfRange("the quartic needs p >= 5".into()));
    }
    let zero = field.zero();
    let m = precision + 1;
    // c[k] is the coefficient of T^-k; sq[s] of u^2 at T^-s.
    let mut c = vec![zero; m + 1];
    let mut sq = vec![zero; m + 1];
    c[1] = field.rational(-1, 12)?;
    for k in 2..=m {
        let s = k - 1;
        sq[s] = (1..s).fold(zero, |acc, i| acc + c[i] * c[s - i]);
        let quad = (2..s.saturating_sub(1)).fold(zero, |acc, s1| acc + sq[s1] * sq[s - s1]);
        c[k] = sq[s] + quad;
    }
    Ok(LaurentSeries::new(field, -1, c[1..].to_vec(), false))
}

/// Continued fraction of a truncated series, keeping only the partial
/// quotients guaranteed to be those of the full series.
///
/// With unknown coefficients starting at `T^(low-1)`, the `n`-th partial
/// quotient of the truncation is certified when `2 deg y_n <= -low`.
pub fn cf_from_series(s: &LaurentSeries) -> Result<CfExpansion> {
    let s = s.normalized();
    if s.coeffs().is_empty() || s.coeffs()[0].is_zero() {
        return Err(Error::ZeroSeries);
    }
    let (num, shift) = s.truncation_as_rational();
    let den = Polynomial::monomial(s.field().one(), shift);
    let full = rational_to_cf(&num, &den)?;
    let Some(low) = s.low() else {
        return Ok(full);
    };
    let cont = full.continuants();
    let certified = (1..=full.len())
        .take_while(|&n| {
            let dy = cont.y[n].deg().expect("continuants are nonzero") as i64;
            2 * dy <= -low
        })
        .count();
    Ok(full.truncated(certified))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn lin(f: PrimeField, c: i64) -> Polynomial {
        Polynomial::from_ints(f, &[0, c])
    }

    fn state(f: PrimeField, coeffs: &[&[i64]]) -> AlgebraicState {
        AlgebraicState::new(f, coeffs.iter().map(|c| Polynomial::from_ints(f, c)).collect()).unwrap()
    }

    #[test]
    fn star_condition() {
        assert!(AlgebraicState::quartic(k(13)).unwrap().check_star());
        let f = k(7);
        assert!(!state(f, &[&[0, 0, 0, 0, 1], &[0, 0, -1], &[1]]).check_star());
        assert!(state(f, &[&[1], &[0, -1], &[1]]).check_star());
    }

    #[test]
    fn first_steps_of_the_quartic() {
        for (p, c) in [(13, 1), (7, 2), (5, 3)] {
            let f = k(p);
            match AlgebraicState::quartic(f).unwrap().step().unwrap() {
                Step::Continue { q, next } => {
                    assert_eq!(q, lin(f, c), "p = {p}");
                    assert!(next.check_star());
                }
                Step::Rational { .. } => panic!("quartic root is irrational"),
            }
        }
    }

    #[test]
    fn periodic_quadratic() {
        let f = k(7);
        let s = state(f, &[&[1], &[0, -1], &[1]]);
        let Step::Continue { q, next } = s.step().unwrap() else {
            panic!()
        };
        assert_eq!(q, lin(f, 1));
        assert_eq!(next, state(f, &[&[1], &[0, 1], &[1]]));
        let Step::Continue { q, next } = next.step().unwrap() else {
            panic!()
        };
        assert_eq!(q, lin(f, -1));
        assert_eq!(next, s);
        let cf = expand_root(&s, 6).unwrap();
        let expect: Vec<_> = (0..6).map(|i| lin(f, if i % 2 == 0 { 1 } else { -1 })).collect();
        assert_eq!(cf.partial_quotients(), expect.as_slice());
    }

    #[test]
    fn rational_root_terminates() {
        let f = k(7);
        // (X - T)(X - 1/T)... use X^2 - (T^2+1)/T X + 1 scaled: T X^2 - (T^2 + 1) X + T.
        let s = state(f, &[&[0, 1], &[-1, 0, -1], &[0, 1]]);
        assert!(s.check_star());
        let cf = expand_root(&s, 10).unwrap();
        assert_eq!(cf.partial_quotients(), &[lin(f, 1)]);
    }

    #[test]
    fn published_prefixes() {
        let cases: [(u64, &[i64]); 3] = [(13, &[1, 12, 7, 11, 8, 5]), (7, &[2, 6, 6]), (5, &[3])];
        for (p, want) in cases {
            let f = k(p);
            let cf = expand_root(&AlgebraicState::quartic(f).unwrap(), want.len()).unwrap();
            let want: Vec<_> = want.iter().map(|&c| lin(f, c)).collect();
            assert_eq!(cf.partial_quotients(), want.as_slice());
        }
    }

    #[test]
    fn zero_count_is_empty() {
        let cf = expand_root(&AlgebraicState::quartic(k(13)).unwrap(), 0).unwrap();
        assert!(cf.is_empty());
    }

    #[test]
    fn program_matches_generic_path() {
        for p in [5, 7, 11, 13] {
            let f = k(p);
            let generic = expand_root(&AlgebraicState::quartic(f).unwrap(), 25).unwrap();
            let program = expand_quartic_program(f, 25).unwrap();
            assert_eq!(generic, program, "p = {p}");
        }
    }

    #[test]
    fn series_root_leading_terms() {
        let s = series_root_quartic(k(13), 4).unwrap();
        assert_eq!(s.coeff(-1).unwrap().value(), 1);
        // 1/(12^2) = 1 mod 13
        assert_eq!(s.coeff(-3).unwrap().value(), 1);
        let s = series_root_quartic(k(7), 20).unwrap();
        assert_eq!(s.coeff(-1).unwrap().value(), 4);
        for e in (2..=20).step_by(2) {
            assert!(s.coeff(-e).unwrap().is_zero());
        }
    }

    #[test]
    fn cf_from_short_series_certifies_first_quotient() {
        let f = k(13);
        let u = series_root_quartic(f, 6).unwrap();
        let alpha = u.inv_terms(0).unwrap().truncate(-1);
        assert_eq!(alpha.precision(), 2);
        let cf = cf_from_series(&alpha).unwrap();
        assert_eq!(cf.len(), 1);
        assert_eq!(cf.partial_quotients()[0], lin(f, -12));
    }

    #[test]
    fn cf_from_exact_series_is_full() {
        let f = k(7);
        let num = Polynomial::from_ints(f, &[1, 0, 3, 1]);
        let cf = cf_from_series(&LaurentSeries::from_poly(&num)).unwrap();
        assert_eq!(cf.partial_quotients(), &[num]);
        assert!(cf_from_series(&LaurentSeries::zero(f)).is_err());
    }
}
