//! Independent verifications over grids of parameters. Results always come
//! back in input order, whichever execution strategy runs them.

use crate::conjecture::{verify_conjecture1, Conj1Verdict};
use crate::error::Result;
use crate::ff::{is_prime, PrimeField};
use crate::hyperquadratic::{prop1_verify, prop2_verify, Prop1Report, Prop2Report};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "HQCF_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

/// Thread cap from `HQCF_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// `items.map(f)`, order preserved.
pub fn map_ordered<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel => parallel_map(items, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let run = || items.par_iter().map(&f).collect();
    match thread_cap() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => items.iter().map(&f).collect(),
        },
        None => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Odd primes in `lo..=hi`.
pub fn odd_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&n| n % 2 == 1 && is_prime(n)).collect()
}

/// Primes `p ≡ residue (mod 3)` in `lo..=hi`.
pub fn primes_mod3(lo: u64, hi: u64, residue: u64) -> Vec<u64> {
    odd_primes(lo, hi).into_iter().filter(|p| p % 3 == residue).collect()
}

fn fields(primes: &[u64]) -> Result<Vec<PrimeField>> {
    primes.iter().map(|&p| PrimeField::new(p)).collect()
}

/// Every `(p, k)` with `1 <= k < p/2`.
pub fn sweep_prop1(exec: Execution, primes: &[u64]) -> Result<Vec<Prop1Report>> {
    let grid: Vec<(PrimeField, usize)> = fields(primes)?
        .into_iter()
        .flat_map(|f| (1..=(f.modulus() as usize - 1) / 2).map(move |k| (f, k)))
        .collect();
    map_ordered(exec, &grid, |&(f, k)| prop1_verify(f, k))
        .into_iter()
        .collect()
}

/// Every `(p, k, i)` with `1 <= k, i < p/2`.
pub fn sweep_prop2(exec: Execution, primes: &[u64]) -> Result<Vec<Prop2Report>> {
    let mut grid = Vec::new();
    for f in fields(primes)? {
        let h = (f.modulus() as usize - 1) / 2;
        for k in 1..=h {
            for i in 1..=h {
                grid.push((f, k, i));
            }
        }
    }
    map_ordered(exec, &grid, |&(f, k, i)| prop2_verify(f, k, i))
        .into_iter()
        .collect()
}

/// [`verify_conjecture1`] for each prime, `n_terms` compared quotients each.
pub fn sweep_conj1(exec: Execution, primes: &[u64], n_terms: usize) -> Result<Vec<Conj1Verdict>> {
    let fs = fields(primes)?;
    map_ordered(exec, &fs, |&f| verify_conjecture1(f, n_terms))
        .into_iter()
        .collect()
}
