//! Index-tuple counting.
//!
//! The k-th power of a sum over `n` terms expands into `n^k` ordered index
//! tuples. Grouping those tuples by the number of distinct indices they
//! contain ("rho") is what turns moments of the empirical mean into mixed
//! moments of the sequence. The number of tuples with exactly `r` distinct
//! indices is `S(k, r) * n (n-1) ... (n-r+1)`; this module provides that
//! closed form together with a brute-force enumeration used to check it.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest `n^k` the enumeration oracle will walk.
pub const ORACLE_LIMIT: u64 = 10_000_000;

/// Number of distinct entries of an index tuple.
pub fn rho(tuple: &[usize]) -> Result<usize> {
    if tuple.is_empty() {
        return Err(Error::EmptyTuple);
    }
    Ok(tuple.iter().collect::<BTreeSet<_>>().len())
}

/// Stirling number of the second kind, by the triangular recurrence
/// `S(k, r) = r S(k-1, r) + S(k-1, r-1)`.
pub fn stirling2(k: usize, r: usize) -> BigUint {
    if r > k {
        return BigUint::zero();
    }
    // row[j] holds S(i, j) for the current i.
    let mut row = vec![BigUint::zero(); r + 1];
    row[0] = BigUint::one();
    for i in 1..=k {
        for j in (1..=r.min(i)).rev() {
            row[j] = &row[j] * j + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row[r].clone()
}

/// `n (n-1) ... (n-r+1)`, zero when `r > n`.
pub fn falling_factorial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    (0..r).fold(BigUint::one(), |acc, i| acc * (n - i))
}

/// Binomial coefficient by exact multiplicative recurrence.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Row `n` of Pascal's triangle: `C(n, 0), ..., C(n, n)`.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for i in 0..n {
        c = c * (n - i) / (i + 1);
        row.push(c.clone());
    }
    row
}

/// Rows `0..=n` of Pascal's triangle, built by addition.
#[derive(Debug, Clone)]
pub struct PascalTriangle {
    rows: Vec<Vec<BigUint>>,
}

impl PascalTriangle {
    pub fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
        rows.push(vec![BigUint::one()]);
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = Vec::with_capacity(i + 1);
            row.push(BigUint::one());
            for j in 1..i {
                row.push(&prev[j - 1] + &prev[j]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        Self { rows }
    }

    /// `C(n, k)`; zero outside the triangle's support. Panics if `n` exceeds
    /// the size the triangle was built for.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        if k > n {
            BigUint::zero()
        } else {
            self.rows[n][k].clone()
        }
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }
}

/// Closed-form count of tuples in `{1..n}^k` with exactly `r` distinct entries.
pub fn count_tuples_with_rho(n: usize, k: usize, r: usize) -> Result<BigUint> {
    if n == 0 || k == 0 {
        return Err(Error::IndexOutOfRange { index: n.min(k), max: usize::MAX });
    }
    if r == 0 || r > k {
        return Err(Error::IndexOutOfRange { index: r, max: k });
    }
    Ok(stirling2(k, r) * falling_factorial(n, r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionBound {
    /// Tuples with fewer than `k` distinct indices.
    pub count: BigUint,
    /// `(k-1)^k n^(k-1)`.
    pub bound: BigUint,
    pub holds: bool,
}

impl CollisionBound {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "count": biguint_json(&self.count),
            "bound": biguint_json(&self.bound),
            "holds": self.holds,
        })
    }
}

/// Compares the number of tuples with a repeated index against the
/// `(k-1)^k n^(k-1)` over-count obtained by first choosing `k-1` candidate
/// indices and then filling each of the `k` positions from them.
pub fn check_collision_bound(n: usize, k: usize) -> Result<CollisionBound> {
    if k < 2 {
        return Err(Error::IndexOutOfRange { index: k, max: usize::MAX });
    }
    if n == 0 {
        return Err(Error::IndexOutOfRange { index: 0, max: usize::MAX });
    }
    let mut count = BigUint::zero();
    for r in 1..k {
        count += count_tuples_with_rho(n, k, r)?;
    }
    let bound = num_traits::pow(BigUint::from(k - 1), k) * num_traits::pow(BigUint::from(n), k - 1);
    let holds = count <= bound;
    Ok(CollisionBound { count, bound, holds })
}

/// How [`tuple_stats`] obtains its counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleMethod {
    ClosedForm,
    /// Walk every tuple; limited to `n^k <= ORACLE_LIMIT`.
    Enumerate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleStats {
    pub n: usize,
    pub k: usize,
    /// Entry `r - 1` counts tuples with `rho = r`.
    pub counts_by_rho: Vec<BigUint>,
}

impl TupleStats {
    pub fn total(&self) -> BigUint {
        self.counts_by_rho.iter().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "counts_by_rho": self.counts_by_rho.iter().map(biguint_json).collect::<Vec<_>>(),
        })
    }
}

/// JSON number when it fits in `u64`, decimal string otherwise.
pub fn biguint_json(x: &BigUint) -> serde_json::Value {
    match u64::try_from(x) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::String(x.to_string()),
    }
}

pub fn tuple_stats(n: usize, k: usize, method: TupleMethod) -> Result<TupleStats> {
    if n == 0 || k == 0 {
        return Err(Error::IndexOutOfRange { index: 0, max: usize::MAX });
    }
    let counts_by_rho = match method {
        TupleMethod::ClosedForm => (1..=k).map(|r| count_tuples_with_rho(n, k, r)).collect::<Result<Vec<_>>>()?,
        TupleMethod::Enumerate => enumerate_rho_counts(n, k)?.into_iter().map(BigUint::from).collect(),
    };
    Ok(TupleStats { n, k, counts_by_rho })
}

/// Brute-force histogram of `rho` over all of `{1..n}^k`.
fn enumerate_rho_counts(n: usize, k: usize) -> Result<Vec<u64>> {
    let size = num_traits::pow(BigUint::from(n), k);
    if size > BigUint::from(ORACLE_LIMIT) {
        return Err(Error::TooLarge { size: size.to_string(), limit: ORACLE_LIMIT });
    }
    // Split on the first coordinate; integer sums are order-independent.
    let per_first: Vec<Vec<u64>> = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut counts = vec![0u64; k];
            let mut tuple = vec![1usize; k];
            tuple[0] = first;
            let mut scratch = Vec::with_capacity(k);
            loop {
                scratch.clear();
                scratch.extend_from_slice(&tuple);
                scratch.sort_unstable();
                scratch.dedup();
                counts[scratch.len() - 1] += 1;
                // Odometer over positions 1..k.
                let mut pos = k;
                loop {
                    if pos == 1 {
                        return counts;
                    }
                    pos -= 1;
                    if tuple[pos] < n {
                        tuple[pos] += 1;
                        break;
                    }
                    tuple[pos] = 1;
                }
            }
        })
        .collect();
    let mut total = vec![0u64; k];
    for counts in per_first {
        for (t, c) in total.iter_mut().zip(counts) {
            *t += c;
        }
    }
    Ok(total)
}
