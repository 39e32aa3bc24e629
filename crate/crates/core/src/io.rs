//! JSON forms of polynomials, expansions and verdicts.
//!
//! Polynomial: `{"p": 13, "ext": false, "coeffs": [c_0, c_1, ...]}` with
//! ascending degree. Over `F_{p^2}` each coefficient is a pair `[re, im]` in
//! the basis `1, w` where `w^2` is the smallest non-residue.
//! Expansion: `{"p": 13, "pq": [<polynomial>, ...]}`.

use serde::{Deserialize, Serialize};

use crate::cf::CfExpansion;
use crate::error::{Error, Result};
use crate::ff::{Fp, Fp2, PrimeField};
use crate::poly::{ExtPolynomial, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Base(i64),
    Ext([i64; 2]),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub p: u64,
    pub ext: bool,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfJson {
    pub p: u64,
    pub pq: Vec<PolyJson>,
}

impl From<&Polynomial> for PolyJson {
    fn from(f: &Polynomial) -> Self {
        PolyJson {
            p: f.field().modulus() as u64,
            ext: false,
            coeffs: f.coeffs().iter().map(|c| CoeffJson::Base(c.value() as i64)).collect(),
        }
    }
}

impl From<&ExtPolynomial> for PolyJson {
    fn from(f: &ExtPolynomial) -> Self {
        PolyJson {
            p: f.ctx().base().modulus() as u64,
            ext: true,
            coeffs: f
                .coeffs()
                .iter()
                .map(|c| CoeffJson::Ext([c.real().value() as i64, c.imag().value() as i64]))
                .collect(),
        }
    }
}

impl From<&CfExpansion> for CfJson {
    fn from(cf: &CfExpansion) -> Self {
        CfJson {
            p: cf.field().modulus() as u64,
            pq: cf.partial_quotients().iter().map(PolyJson::from).collect(),
        }
    }
}

fn base_coeff(field: PrimeField, c: &CoeffJson) -> Result<Fp> {
    match c {
        CoeffJson::Base(n) => Ok(field.elem(*n)),
        CoeffJson::Ext(_) => Err(Error::Malformed("pair coefficient in a base-field polynomial".into())),
    }
}

impl PolyJson {
    /// Polynomial over `F_p`; an `ext` polynomial is accepted only if it has
    /// base-field coefficients.
    pub fn to_poly(&self) -> Result<Polynomial> {
        if self.ext {
            return self.to_ext_poly()?.to_base();
        }
        let field = PrimeField::new(self.p)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| base_coeff(field, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_coeffs(field, coeffs))
    }

    pub fn to_ext_poly(&self) -> Result<ExtPolynomial> {
        let field = PrimeField::new(self.p)?;
        let ext = field.quadratic_extension();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match (self.ext, c) {
                (true, CoeffJson::Ext([a, b])) => Ok(ext.new_elem(field.elem(*a), field.elem(*b))),
                (false, c) => base_coeff(field, c).map(|x| ext.embed(x)),
                (true, CoeffJson::Base(_)) => {
                    Err(Error::Malformed("extension coefficients must be [re, im] pairs".into()))
                }
            })
            .collect::<Result<Vec<Fp2>>>()?;
        Ok(ExtPolynomial::from_coeffs(ext, coeffs))
    }
}

impl CfJson {
    pub fn to_cf(&self) -> Result<CfExpansion> {
        let field = PrimeField::new(self.p)?;
        let pq = self.pq.iter().map(PolyJson::to_poly).collect::<Result<Vec<_>>>()?;
        if pq.iter().any(|a| a.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(CfExpansion::new(field, pq))
    }
}

fn from_str<T: for<'a> Deserialize<'a>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
}

pub fn poly_to_json(f: &Polynomial) -> String {
    serde_json::to_string(&PolyJson::from(f)).expect("serializable")
}

pub fn poly_from_json(s: &str) -> Result<Polynomial> {
    from_str::<PolyJson>(s)?.to_poly()
}

pub fn cf_to_json(cf: &CfExpansion) -> String {
    serde_json::to_string(&CfJson::from(cf)).expect("serializable")
}

pub fn cf_from_json(s: &str) -> Result<CfExpansion> {
    from_str::<CfJson>(s)?.to_cf()
}
