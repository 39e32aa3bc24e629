//! Perfect expansions of type `(p, l, k)`: every partial quotient is a
//! nonzero multiple `lambda_n A_{i(n),k}`.

use crate::cf::{eval_scalar_cf, CfExpansion};
use crate::error::{Error, Result};
use crate::ff::{Coeff, Fp, PrimeField};
use crate::poly::Polynomial;

use super::family::{a_sequence, check_k, PQConstants};
use super::index::IndexSequence;

/// `x^((-1)^n)`.
fn alt(x: Fp, n: usize) -> Fp {
    if n.is_multiple_of(2) {
        x
    } else {
        x.inv().expect("nonzero")
    }
}

/// First `l` quotients `lambda_j A_{i(j),k}` plus the tail relation
/// `alpha^p = e1 P_k alpha_{l+1} + e2 Q_k`, validated against the `delta` conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectExpansionSpec {
    field: PrimeField,
    eps1: Fp,
    eps2: Fp,
    lambdas: Vec<Fp>,
    indices: IndexSequence,
    constants: PQConstants,
    /// `delta_1 .. delta_l` as scalar brackets.
    deltas: Vec<Fp>,
}

impl PerfectExpansionSpec {
    pub fn new(
        field: PrimeField,
        k: usize,
        eps1: Fp,
        eps2: Fp,
        lambdas: Vec<Fp>,
        indices: IndexSequence,
    ) -> Result<Self> {
        check_k(field, k)?;
        let l = lambdas.len();
        if indices.l() != l || indices.k() != k {
            return Err(Error::OutOfRange("index sequence does not match (l, k)".into()));
        }
        if eps1.is_zero() || eps2.is_zero() || lambdas.iter().any(|x| x.is_zero()) {
            return Err(Error::OutOfRange("epsilons and lambdas must be nonzero".into()));
        }
        let constants = PQConstants::new(field, k)?;
        let theta = constants.theta;
        let two_k = field.elem(2 * k as i64);
        let seed = two_k * theta / eps2;
        let mut deltas = Vec::with_capacity(l);
        for n in 1..=l {
            // [theta^i(n) lambda_n, ..., theta^i(1) lambda_1, 2k theta / e2]
            let mut entries: Vec<Fp> = (1..=n)
                .rev()
                .map(|j| theta.pow(indices.initial()[j - 1] as u64) * lambdas[j - 1])
                .collect();
            entries.push(seed);
            match eval_scalar_cf(&entries) {
                Ok(d) if !d.is_zero() => deltas.push(d),
                _ => return Err(Error::DeltaUndefined { n }),
            }
        }
        let expected = two_k * eps1 / eps2;
        if deltas[l - 1] != expected {
            return Err(Error::DeltaMismatch {
                found: deltas[l - 1].value(),
                expected: expected.value(),
            });
        }
        Ok(PerfectExpansionSpec {
            field,
            eps1,
            eps2,
            lambdas,
            indices,
            constants,
            deltas,
        })
    }

    /// Convenience: all initial indices zero.
    pub fn with_zero_indices(field: PrimeField, k: usize, eps1: Fp, eps2: Fp, lambdas: Vec<Fp>) -> Result<Self> {
        let indices = IndexSequence::zeros(lambdas.len(), k)?;
        Self::new(field, k, eps1, eps2, lambdas, indices)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn l(&self) -> usize {
        self.lambdas.len()
    }
    pub fn k(&self) -> usize {
        self.constants.k
    }
    pub fn eps1(&self) -> Fp {
        self.eps1
    }
    pub fn eps2(&self) -> Fp {
        self.eps2
    }
    pub fn lambdas(&self) -> &[Fp] {
        &self.lambdas
    }
    pub fn indices(&self) -> &IndexSequence {
        &self.indices
    }
    pub fn constants(&self) -> &PQConstants {
        &self.constants
    }
    pub fn initial_deltas(&self) -> &[Fp] {
        &self.deltas
    }
}

/// A generated perfect expansion together with its scalar sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedExpansion {
    pub cf: CfExpansion,
    /// `lambdas[n - 1] = lambda_n`.
    pub lambdas: Vec<Fp>,
    pub deltas: Vec<Fp>,
    pub indices: Vec<u32>,
    /// `A_{0,k} .. A_{max i,k}`.
    pub a_polys: Vec<Polynomial>,
}

/// First `count` partial quotients `a_n = lambda_n A_{i(n),k}`.
pub fn theorem1_generate(spec: &PerfectExpansionSpec, count: usize) -> Result<GeneratedExpansion> {
    let field = spec.field;
    let k = spec.k();
    let l = spec.l();
    let theta = spec.constants.theta;
    let two_k = field.elem(2 * k as i64);
    let len = count.max(l);
    let mut lambdas: Vec<Option<Fp>> = vec![None; len];
    let mut deltas: Vec<Option<Fp>> = vec![None; len];
    for n in 1..=l {
        lambdas[n - 1] = Some(spec.lambdas[n - 1]);
        deltas[n - 1] = Some(spec.deltas[n - 1]);
    }
    let e1 = spec.eps1;
    let mut n = 1;
    while spec.indices.f(n) <= len {
        let fnn = spec.indices.f(n);
        let lam_n = lambdas[n - 1].expect("filled before use");
        let del_n = deltas[n - 1].expect("filled before use");
        lambdas[fnn - 1] = Some(alt(e1, n) * lam_n);
        deltas[fnn - 1] = Some(alt(e1, n) * del_n * theta);
        let base = two_k * theta * del_n;
        for i in 1..=2 * k {
            let idx = fnn + i;
            if idx > len {
                break;
            }
            let v_i = spec.constants.v(i);
            let b = alt(base, i);
            lambdas[idx - 1] = Some(-(v_i * alt(e1, n + i) * b));
            let ratio = field.elem(i as i64) * v_i / field.elem(2 * k as i64 - 2 * i as i64 + 1);
            deltas[idx - 1] = Some(alt(e1, n + i) * ratio * b);
        }
        n += 1;
    }
    let lambdas: Vec<Fp> = lambdas
        .into_iter()
        .take(count)
        .map(|x| x.expect("all indices covered"))
        .collect();
    let deltas: Vec<Fp> = deltas
        .into_iter()
        .take(count)
        .map(|x| x.expect("all indices covered"))
        .collect();
    if let Some(pos) = lambdas.iter().position(|x| x.is_zero()) {
        return Err(Error::VanishingScalar {
            what: "lambda",
            n: pos + 1,
        });
    }
    if let Some(pos) = deltas.iter().position(|x| x.is_zero()) {
        return Err(Error::VanishingScalar {
            what: "delta",
            n: pos + 1,
        });
    }
    let indices = spec.indices.prefix(count);
    assemble(field, k, lambdas, deltas, indices)
}

fn assemble(
    field: PrimeField,
    k: usize,
    lambdas: Vec<Fp>,
    deltas: Vec<Fp>,
    indices: Vec<u32>,
) -> Result<GeneratedExpansion> {
    let max_i = indices.iter().copied().max().unwrap_or(0) as usize;
    let a_polys = a_sequence(field, k, max_i)?;
    let pq = lambdas
        .iter()
        .zip(&indices)
        .map(|(&lam, &i)| a_polys[i as usize].scale(lam))
        .collect();
    Ok(GeneratedExpansion {
        cf: CfExpansion::new(field, pq),
        lambdas,
        deltas,
        indices,
        a_polys,
    })
}

/// Type `(p, 1, 1)` perfect expansion from its own closed recurrences.
///
/// The `delta` sequence here is the negative of the one [`theorem1_generate`]
/// carries for the same expansion (`delta_1 = -2 e1 / e2` versus `2k e1 / e2`);
/// the partial quotients coincide.
pub fn corollary1_generate(field: PrimeField, i1: u32, eps1: Fp, eps2: Fp, count: usize) -> Result<GeneratedExpansion> {
    if eps1.is_zero() || eps2.is_zero() {
        return Err(Error::OutOfRange("epsilons must be nonzero".into()));
    }
    let two = field.elem(2);
    let s = eps2 * eps2 + two * eps1;
    if s.is_zero() {
        return Err(Error::ExcludedByHypothesis("e2^2 + 2 e1 = 0".into()));
    }
    let len = count.max(1);
    let mut lam = vec![field.zero(); len + 1];
    let mut del = vec![field.zero(); len + 1];
    let mut idx = vec![0u32; len + 1];
    lam[1] = s * field.elem(-2).pow(i1 as u64) / eps2;
    del[1] = -(two * eps1) / eps2;
    idx[1] = i1;
    let mut n = 1;
    while 3 * n - 1 <= len {
        lam[3 * n - 1] = alt(eps1, n) * lam[n];
        del[3 * n - 1] = -(alt(eps1, n) * del[n]) / two;
        idx[3 * n - 1] = idx[n] + 1;
        if 3 * n <= len {
            lam[3 * n] = -(alt(eps1, n + 1) * del[n].inv().expect("nonzero"));
            del[3 * n] = -(alt(eps1, n + 1) * del[n].inv().expect("nonzero"));
        }
        if 3 * n < len {
            lam[3 * n + 1] = -lam[3 * n].inv().expect("nonzero");
            del[3 * n + 1] = two * del[3 * n].inv().expect("nonzero");
        }
        n += 1;
    }
    let take = |v: Vec<Fp>| v.into_iter().skip(1).take(count).collect::<Vec<_>>();
    assemble(
        field,
        1,
        take(lam),
        take(del),
        idx.into_iter().skip(1).take(count).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn elems(f: PrimeField, v: &[i64]) -> Vec<Fp> {
        v.iter().map(|&x| f.elem(x)).collect()
    }

    #[test]
    fn published_specs_validate() {
        let f = k(7);
        let s = PerfectExpansionSpec::with_zero_indices(f, 2, f.elem(3), f.elem(5), elems(f, &[2, 6, 6]));
        assert!(s.is_ok(), "{s:?}");
        let f = k(13);
        let s = PerfectExpansionSpec::with_zero_indices(f, 4, f.elem(12), f.elem(9), elems(f, &[5, 12, 9, 11, 1, 5]));
        assert!(s.is_ok(), "{s:?}");
    }

    #[test]
    fn validation_errors_are_distinguished() {
        let f = k(7);
        let bad = PerfectExpansionSpec::with_zero_indices(f, 2, f.elem(4), f.elem(5), elems(f, &[2, 6, 6]));
        assert!(matches!(bad, Err(Error::DeltaMismatch { .. })));
        // [1, 2k theta / e2] with 2k theta / e2 = -1 makes delta_1 = 0.
        let seed = f.elem(4) * f.elem(3) / f.elem(5);
        let bad = PerfectExpansionSpec::with_zero_indices(f, 2, f.elem(3), f.elem(5), vec![-seed.inv().unwrap()]);
        assert!(matches!(bad, Err(Error::DeltaUndefined { n: 1 })));
    }

    #[test]
    fn generation_prefix_and_degrees() {
        let f = k(7);
        let spec = PerfectExpansionSpec::with_zero_indices(f, 2, f.elem(3), f.elem(5), elems(f, &[2, 6, 6])).unwrap();
        let g = theorem1_generate(&spec, 120).unwrap();
        assert_eq!(g.cf.len(), 120);
        assert_eq!(&g.lambdas[..3], elems(f, &[2, 6, 6]).as_slice());
        for (n, a) in g.cf.partial_quotients().iter().enumerate() {
            let i = g.indices[n];
            assert_eq!(a.deg().unwrap() as u64, super::super::family::a_degree(7, 2, i));
            assert!(a.is_odd());
        }
    }

    #[test]
    fn extremal_k_gives_linear_quotients() {
        let f = k(7);
        // k = 3 = (p-1)/2, l = 1: solve delta_l = 2k e1 / e2 for lambda_1.
        let c = PQConstants::new(f, 3).unwrap();
        let (e1, e2, lam) = f
            .nonzero_elements()
            .flat_map(|e1| f.nonzero_elements().map(move |e2| (e1, e2)))
            .map(|(e1, e2)| {
                let seed = f.elem(6) * c.theta / e2;
                (e1, e2, f.elem(6) * e1 / e2 - seed.inv().unwrap())
            })
            .find(|t| !t.2.is_zero())
            .unwrap();
        let spec = PerfectExpansionSpec::with_zero_indices(f, 3, e1, e2, vec![lam]).unwrap();
        let g = theorem1_generate(&spec, 60).unwrap();
        assert!(g.cf.partial_quotients().iter().all(|a| a.deg() == Some(1)));
    }

    #[test]
    fn corollary1_matches_theorem1() {
        for p in [5u64, 7, 11, 13] {
            let f = k(p);
            for i1 in 0..2u32 {
                for e1 in f.nonzero_elements() {
                    for e2 in f.nonzero_elements() {
                        let Ok(c1) = corollary1_generate(f, i1, e1, e2, 40) else {
                            assert!((e2 * e2 + f.elem(2) * e1).is_zero());
                            continue;
                        };
                        let spec = PerfectExpansionSpec::new(
                            f,
                            1,
                            e1,
                            e2,
                            vec![c1.lambdas[0]],
                            IndexSequence::new(1, 1, vec![i1]).unwrap(),
                        )
                        .unwrap();
                        let t1 = theorem1_generate(&spec, 40).unwrap();
                        assert_eq!(c1.cf, t1.cf, "p={p} i1={i1} e=({e1},{e2})");
                        let neg: Vec<Fp> = t1.deltas.iter().map(|&d| -d).collect();
                        assert_eq!(c1.deltas, neg);
                    }
                }
            }
        }
    }

    #[test]
    fn corollary1_delta_example() {
        let f = k(7);
        let g = corollary1_generate(f, 0, f.elem(3), f.elem(5), 5).unwrap();
        assert_eq!(g.deltas[0].value(), 3);
        // 1 + 2*3 = 0 mod 7
        for e2 in [1, 6] {
            assert!(matches!(
                corollary1_generate(f, 0, f.elem(3), f.elem(e2), 5),
                Err(Error::ExcludedByHypothesis(_))
            ));
        }
    }
}
