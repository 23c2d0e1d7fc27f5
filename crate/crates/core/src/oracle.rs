//! Brute-force enumeration checks.
//!
//! Everything here computes probabilities the slow way: draw by draw along a
//! bit vector, summed over all of `{0,1}^n`, or by walking every index tuple.
//! None of it goes through the count-law formulas, so it can be used to check
//! them. [`run_suite`] bundles the checks for a given size.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{self, TupleMethod};
use crate::error::{Error, Result};
use crate::generators::{generate, FamilySpec};
use crate::law::{BinaryAssignment, CountDistribution};
use crate::measure::MixingMeasure;
use crate::moments::{mixed_moment, sn_moment, sn_moment_direct};
use crate::scalar::{ratio, Rational, Scalar};

/// Largest sequence length accepted by [`run_suite`].
pub const SUITE_MAX_N: usize = 12;
/// Largest moment order accepted by [`run_suite`].
pub const SUITE_MAX_K: usize = 6;

/// All bit vectors of length `n`, in binary counting order with the first
/// coordinate as the lowest bit.
pub fn bit_vectors(n: usize) -> impl Iterator<Item = Vec<u8>> {
    assert!(n < 32, "enumeration of 2^{n} vectors is not supported");
    (0u32..(1 << n)).map(move |bits| (0..n).map(|i| ((bits >> i) & 1) as u8).collect())
}

/// A binary process described by its one-step predictive probabilities.
#[derive(Debug, Clone, PartialEq)]
pub enum SequentialModel<S> {
    Iid {
        p: S,
    },
    /// Urn with `a` ones and `b` zeros; each drawn ball is returned with one more of its colour.
    Polya {
        a: S,
        b: S,
    },
    /// Mixture of i.i.d. coins: atoms `(p, w)`.
    Mixture(Vec<(S, S)>),
    /// Draws without replacement from `ones` ones and `zeros` zeros.
    Urn {
        ones: usize,
        zeros: usize,
    },
}

impl<S: Scalar> SequentialModel<S> {
    /// Probability of observing exactly `x` as the first `x.len()` draws.
    pub fn path_probability(&self, x: &[u8]) -> S {
        match self {
            SequentialModel::Iid { p } => {
                x.iter().fold(S::one(), |acc, &b| acc * if b == 1 { p.clone() } else { S::one() - p.clone() })
            }
            SequentialModel::Polya { a, b } => {
                let (mut ones, mut zeros) = (a.clone(), b.clone());
                let mut prob = S::one();
                for &bit in x {
                    let total = ones.clone() + zeros.clone();
                    if bit == 1 {
                        prob = prob * ones.clone() / total;
                        ones = ones + S::one();
                    } else {
                        prob = prob * zeros.clone() / total;
                        zeros = zeros + S::one();
                    }
                }
                prob
            }
            SequentialModel::Mixture(atoms) => {
                atoms.iter().map(|(p, w)| w.clone() * SequentialModel::Iid { p: p.clone() }.path_probability(x)).sum()
            }
            SequentialModel::Urn { ones, zeros } => {
                let (mut ones, mut zeros) = (*ones, *zeros);
                let mut prob = S::one();
                for &bit in x {
                    let total = ones + zeros;
                    let favourable = if bit == 1 { &mut ones } else { &mut zeros };
                    if *favourable == 0 {
                        return S::zero();
                    }
                    prob = prob * S::from_usize(*favourable) / S::from_usize(total);
                    *favourable -= 1;
                }
                prob
            }
        }
    }

    /// The matching generator family; the urn maps to an explicit law of
    /// full length `ones + zeros`, all of whose mass sits at `ones`.
    pub fn family(&self) -> Result<FamilySpec<S>> {
        Ok(match self {
            SequentialModel::Iid { p } => FamilySpec::iid(p.clone())?,
            SequentialModel::Polya { a, b } => FamilySpec::polya(a.clone(), b.clone())?,
            SequentialModel::Mixture(atoms) => FamilySpec::Mixture(MixingMeasure::new(atoms.iter().cloned())?),
            SequentialModel::Urn { ones, zeros } => {
                let n = ones + zeros;
                let weights = (0..=n).map(|m| if m == *ones { S::one() } else { S::zero() }).collect();
                FamilySpec::Explicit(CountDistribution::new(n, weights)?)
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            SequentialModel::Iid { p } => format!("iid(p={p})"),
            SequentialModel::Polya { a, b } => format!("polya(a={a}, b={b})"),
            SequentialModel::Mixture(atoms) => format!("mixture({} atoms)", atoms.len()),
            SequentialModel::Urn { ones, zeros } => format!("urn({ones} ones, {zeros} zeros)"),
        }
    }

    /// Largest sequence length the model supports.
    pub fn max_len(&self) -> usize {
        match self {
            SequentialModel::Urn { ones, zeros } => ones + zeros,
            _ => usize::MAX,
        }
    }
}

/// The exact families every suite runs against.
pub fn standard_models() -> Vec<SequentialModel<Rational>> {
    vec![
        SequentialModel::Iid { p: ratio(1, 3) },
        SequentialModel::Polya { a: ratio(1, 1), b: ratio(1, 1) },
        SequentialModel::Polya { a: ratio(1, 2), b: ratio(3, 2) },
        SequentialModel::Mixture(vec![(ratio(1, 4), ratio(1, 3)), (ratio(2, 3), ratio(2, 3))]),
        SequentialModel::Urn { ones: 7, zeros: 5 },
    ]
}

/// `P(count = m)` from summing path probabilities over `{0,1}^n`.
pub fn count_law_by_enumeration<S: Scalar>(model: &SequentialModel<S>, n: usize) -> Vec<S> {
    let mut law = vec![S::zero(); n + 1];
    for x in bit_vectors(n) {
        let m = x.iter().filter(|&&b| b == 1).count();
        law[m] = law[m].clone() + model.path_probability(&x);
    }
    law
}

/// `E[X_{i_1} ... X_{i_k}]` (indices 1-based, repeats allowed) by summing over `{0,1}^n`.
pub fn product_expectation_by_enumeration<S: Scalar>(point: impl Fn(&[u8]) -> S, n: usize, tuple: &[usize]) -> S {
    bit_vectors(n).filter(|x| tuple.iter().all(|&i| x[i - 1] == 1)).map(|x| point(&x)).sum()
}

/// Number of partitions of a `k`-set into `r` blocks, by walking restricted growth strings.
pub fn count_set_partitions(k: usize, r: usize) -> u64 {
    fn walk(pos: usize, k: usize, used: usize, r: usize) -> u64 {
        if pos == k {
            return u64::from(used == r);
        }
        // Too few positions left to open the remaining blocks.
        if r > used + (k - pos) {
            return 0;
        }
        let mut total = 0;
        for block in 0..=used.min(r.saturating_sub(1)) {
            let next_used = if block == used { used + 1 } else { used };
            if next_used <= r {
                total += walk(pos + 1, k, next_used, r);
            }
        }
        total
    }
    if k == 0 {
        return u64::from(r == 0);
    }
    walk(0, k, 0, r)
}

/// Deterministic pseudo-random index tuples in `{1..n}^k`.
pub fn random_tuples(n: usize, k: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..k).map(|_| rng.random_range(1..=n)).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(check: &str, subject: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { check: check.into(), subject: subject.into(), passed, detail: detail.into() }
    }
}

/// Point probabilities from the count law agree with draw-by-draw
/// probabilities, grouped sums agree with the count law, and the law is normalized.
pub fn check_point_probabilities(model: &SequentialModel<Rational>, n: usize) -> Result<CheckResult> {
    let law = generate(&model.family()?, n)?;
    let by_enumeration = count_law_by_enumeration(model, n);
    if law.weights() != by_enumeration.as_slice() {
        return Ok(CheckResult::new(
            "point-probability",
            model.name(),
            false,
            format!("n={n}: count law differs from enumeration"),
        ));
    }
    let mut total = Rational::zero();
    for x in bit_vectors(n) {
        let p = law.point_probability(&x)?;
        if p != model.path_probability(&x) {
            return Ok(CheckResult::new("point-probability", model.name(), false, format!("n={n}: mismatch at {x:?}")));
        }
        total += p;
    }
    let ok = total.is_one();
    Ok(CheckResult::new("point-probability", model.name(), ok, format!("n={n}: total {total}")))
}

/// `E[X_{i_1} ... X_{i_k}]` equals the mixed moment of order `rho(i)`, by
/// enumeration and through the event probability of the distinct indices.
pub fn check_repeated_indices(
    model: &SequentialModel<Rational>,
    n: usize,
    k: usize,
    tuples: usize,
    seed: u64,
) -> Result<CheckResult> {
    let law = generate(&model.family()?, n)?;
    for tuple in random_tuples(n, k, tuples, seed) {
        let r = combinatorics::rho(&tuple)?;
        let expected = mixed_moment(&law, r)?;
        let brute = product_expectation_by_enumeration(|x| model.path_probability(x), n, &tuple);
        let mut distinct = tuple.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let event = law.event_probability(&BinaryAssignment::new(distinct.iter().map(|&i| (i, 1)).collect())?)?;
        if brute != expected || event != expected {
            return Ok(CheckResult::new(
                "repeated-indices",
                model.name(),
                false,
                format!("n={n} k={k} tuple={tuple:?}: enumeration {brute}, event {event}, mixed moment {expected}"),
            ));
        }
    }
    Ok(CheckResult::new("repeated-indices", model.name(), true, format!("n={n} k={k}: {tuples} tuples")))
}

/// `E[S_n^k]` three ways: distinct-index expansion with closed-form counts,
/// the same expansion with enumerated tuple counts, and directly from the count law.
pub fn check_moment_expansion(model: &SequentialModel<Rational>, n: usize, k: usize) -> Result<CheckResult> {
    let law = generate(&model.family()?, n)?;
    let enumerated = combinatorics::tuple_stats(n, k, TupleMethod::Enumerate)?;
    let scale = Rational::from_biguint(&num_traits::pow(num_bigint::BigUint::from(n), k));
    let mut via_tuples = Rational::zero();
    for (r, count) in (1..=k).zip(&enumerated.counts_by_rho) {
        if r <= n {
            via_tuples += Rational::from_biguint(count) * mixed_moment(&law, r)?;
        }
    }
    via_tuples /= scale;
    let closed = sn_moment(&law, k)?;
    let direct = sn_moment_direct(&law, k);
    let ok = closed == direct && via_tuples == direct;
    Ok(CheckResult::new(
        "moment-expansion",
        model.name(),
        ok,
        format!("n={n} k={k}: stirling {closed}, tuples {via_tuples}, direct {direct}"),
    ))
}

/// The collision bound holds and its count matches enumeration.
pub fn check_collision(n: usize, k: usize) -> Result<CheckResult> {
    let bound = combinatorics::check_collision_bound(n, k)?;
    let enumerated = combinatorics::tuple_stats(n, k, TupleMethod::Enumerate)?;
    let brute: num_bigint::BigUint = enumerated.counts_by_rho[..k - 1].iter().sum();
    let ok = bound.holds && brute == bound.count;
    Ok(CheckResult::new(
        "collision-bound",
        format!("n={n} k={k}"),
        ok,
        format!("count {} (enumerated {brute}), bound {}", bound.count, bound.bound),
    ))
}

/// Closed-form tuple counts and Stirling numbers against enumeration.
pub fn check_tuple_counts(n: usize, k: usize) -> Result<CheckResult> {
    let closed = combinatorics::tuple_stats(n, k, TupleMethod::ClosedForm)?;
    let brute = combinatorics::tuple_stats(n, k, TupleMethod::Enumerate)?;
    let stirling_ok = (0..=k).all(|r| combinatorics::stirling2(k, r) == count_set_partitions(k, r).into());
    Ok(CheckResult::new(
        "tuple-counts",
        format!("n={n} k={k}"),
        closed == brute && stirling_ok,
        format!("by rho {:?}", closed.counts_by_rho.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    ))
}

/// Every exact check for sequence lengths up to `n` and orders up to `k`.
pub fn run_suite(n: usize, k: usize) -> Result<Vec<CheckResult>> {
    if n == 0 || n > SUITE_MAX_N {
        return Err(Error::BadParams(format!("n must be in 1..={SUITE_MAX_N}, got {n}")));
    }
    if k == 0 || k > SUITE_MAX_K {
        return Err(Error::BadParams(format!("k must be in 1..={SUITE_MAX_K}, got {k}")));
    }
    let mut results = Vec::new();
    for model in standard_models() {
        let top = n.min(model.max_len());
        for len in 1..=top {
            results.push(check_point_probabilities(&model, len)?);
        }
        for order in 1..=k.min(top) {
            results.push(check_repeated_indices(&model, top, order, 25, 0x5eed + order as u64)?);
        }
        for order in 1..=k {
            results.push(check_moment_expansion(&model, top, order)?);
        }
    }
    for order in 2..=k {
        results.push(check_collision(n, order)?);
    }
    for order in 1..=k {
        results.push(check_tuple_counts(n, order)?);
    }
    Ok(results)
}
