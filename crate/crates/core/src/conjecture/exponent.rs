//! Rational approximation exponent `nu = 2 + nu_0`, with
//! `nu_0 = limsup deg a_{n+1} / (deg a_1 + ... + deg a_n)`.

use num_rational::Ratio;
use serde::Serialize;

use crate::cf::CfExpansion;
use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Perfect expansions whose `nu_0` has a closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// Type `(p, l, k)` with `a_j = lambda_j T` for `j <= l`: `(p - 2k - 1) / l`.
    ZeroInitial { p: u64, l: u64, k: u64 },
    /// Type `(p, 1, 1)` with `a_1 = lambda_1 A_{i,1}`:
    /// `(p-1)(p^(i+1) - 3p^i) / (p^(i+1) - 3p^i + 2)`.
    TypeOneOne { p: u64, i: u32 },
}

impl ClosedForm {
    pub fn nu0(&self) -> Result<Rational> {
        let overflow = || Error::OutOfRange("closed form overflows 64-bit rationals".into());
        match *self {
            ClosedForm::ZeroInitial { p, l, k } => {
                if l == 0 || 2 * k + 1 > p {
                    return Err(Error::OutOfRange(format!("(p, l, k) = ({p}, {l}, {k})")));
                }
                Ok(Rational::new((p - 2 * k - 1) as i64, l as i64))
            }
            ClosedForm::TypeOneOne { p, i } => {
                let pi = (p as i64).checked_pow(i).ok_or_else(overflow)?;
                let diff = pi.checked_mul(p as i64 - 3).ok_or_else(overflow)?;
                let num = diff.checked_mul(p as i64 - 1).ok_or_else(overflow)?;
                let den = diff + 2;
                if den == 0 {
                    return Err(Error::OutOfRange(format!("p = {p}, i = {i}")));
                }
                Ok(Rational::new(num, den))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentReport {
    pub window: usize,
    /// Largest ratio over `n = 1..=window`.
    #[serde(serialize_with = "ser_ratio")]
    pub nu0_empirical: Rational,
    /// `n + 1` at which the maximum is reached (first occurrence).
    pub argmax: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub nu_empirical: Rational,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub nu0_closed: Option<Rational>,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub nu_closed: Option<Rational>,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_ratio<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Windowed maximum of `deg a_{n+1} / sum_{j <= n} deg a_j`, reported next to
/// the closed form when one is known. The two are never merged.
pub fn approximation_exponent(cf: &CfExpansion, window: usize, closed: Option<ClosedForm>) -> Result<ExponentReport> {
    if window == 0 {
        return Err(Error::OutOfRange("window must be positive".into()));
    }
    if cf.len() < window + 1 {
        return Err(Error::InsufficientExpansion(format!(
            "window {window} needs {} partial quotients, have {}",
            window + 1,
            cf.len()
        )));
    }
    let degs = cf.degrees();
    let mut sum = 0i64;
    let mut best: Option<(Rational, usize)> = None;
    for n in 1..=window {
        sum += degs[n - 1];
        if sum <= 0 {
            return Err(Error::OutOfRange("partial quotients must have positive degree".into()));
        }
        let r = Rational::new(degs[n], sum);
        if best.is_none_or(|(b, _)| r > b) {
            best = Some((r, n + 1));
        }
    }
    let (nu0_empirical, argmax) = best.expect("window >= 1");
    let two = Rational::from_integer(2);
    let nu0_closed = closed.map(|c| c.nu0()).transpose()?;
    Ok(ExponentReport {
        window,
        nu0_empirical,
        argmax,
        nu_empirical: two + nu0_empirical,
        nu0_closed,
        nu_closed: nu0_closed.map(|x| two + x),
    })
}
