//! The index sequence `i(n)` of a perfect expansion.

use crate::error::{Error, Result};

/// `i(1..=l)` given; `i(f(n)) = i(n) + 1` with `f(n) = (2k+1) n + l - 2k`;
/// `i(n) = 0` for every other `n > l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSequence {
    l: usize,
    k: usize,
    initial: Vec<u32>,
}

impl IndexSequence {
    pub fn new(l: usize, k: usize, initial: Vec<u32>) -> Result<Self> {
        if l == 0 || k == 0 {
            return Err(Error::OutOfRange("l and k must be positive".into()));
        }
        if initial.len() != l {
            return Err(Error::OutOfRange(format!(
                "expected {l} initial indices, got {}",
                initial.len()
            )));
        }
        Ok(IndexSequence { l, k, initial })
    }

    /// All initial indices zero.
    pub fn zeros(l: usize, k: usize) -> Result<Self> {
        Self::new(l, k, vec![0; l])
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn initial(&self) -> &[u32] {
        &self.initial
    }

    pub fn f(&self, n: usize) -> usize {
        (2 * self.k + 1) * n + self.l - 2 * self.k
    }

    /// `m >= 1` with `f(m) = n`, if any.
    pub fn preimage(&self, n: usize) -> Option<usize> {
        let shifted = (n + 2 * self.k).checked_sub(self.l)?;
        (shifted % (2 * self.k + 1) == 0)
            .then(|| shifted / (2 * self.k + 1))
            .filter(|&m| m >= 1)
    }

    /// `i(1..=count)`; entry `n - 1` holds `i(n)`.
    pub fn prefix(&self, count: usize) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::with_capacity(count);
        for n in 1..=count {
            let v = if n <= self.l {
                self.initial[n - 1]
            } else {
                match self.preimage(n) {
                    Some(m) => out[m - 1] + 1,
                    None => 0,
                }
            };
            out.push(v);
        }
        out
    }
}

/// Largest `e` with `m^e | n`.
pub fn valuation(m: u64, mut n: u64) -> u32 {
    assert!(m >= 2 && n > 0);
    let mut e = 0;
    while n.is_multiple_of(m) {
        n /= m;
        e += 1;
    }
    e
}

/// `i(n) = v_{(2p+1)/3}((p-1)(4n-1)/6)` for `p = 1 mod 3`.
pub fn corollary2_index(p: u64, n: u64) -> Result<u32> {
    if p % 3 != 1 || p < 7 {
        return Err(Error::WrongResidueClass {
            p: p as u32,
            expected: "1 mod 3",
        });
    }
    if n == 0 {
        return Err(Error::OutOfRange("n must be >= 1".into()));
    }
    Ok(valuation((2 * p + 1) / 3, (p - 1) * (4 * n - 1) / 6))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corollary1_shape() {
        let s = IndexSequence::zeros(1, 1).unwrap();
        assert_eq!(s.prefix(10), vec![0, 1, 0, 0, 2, 0, 0, 1, 0, 0]);
        assert_eq!(s.f(1), 2);
    }

    #[test]
    fn recurrence_properties() {
        let s = IndexSequence::new(3, 2, vec![1, 0, 2]).unwrap();
        let pre = s.prefix(400);
        assert_eq!(s.f(1), 4);
        for n in 1..=70 {
            assert_eq!(pre[s.f(n) - 1], pre[n - 1] + 1);
        }
        for n in 4..=400 {
            if s.preimage(n).is_none() {
                assert_eq!(pre[n - 1], 0);
            }
        }
    }

    #[test]
    fn corollary2_examples() {
        assert_eq!(corollary2_index(7, 4).unwrap(), 1);
        assert_eq!(corollary2_index(7, 19).unwrap(), 2);
        let s = IndexSequence::zeros(3, 2).unwrap();
        assert_eq!(s.f(4), 19);
        assert_eq!(corollary2_index(7, 2).unwrap(), 0);
        assert!(corollary2_index(11, 3).is_err());
    }
}
