//! Mixtures of i.i.d. Bernoulli laws and the comparison of two binary
//! exchangeable laws through their finite-dimensional distributions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::binomial_weights;
use crate::law::{count_ones, CountDistribution};
use crate::measure::MixingMeasure;
use crate::moments::sn_moment;
use crate::scalar::{max_of, Scalar};

/// Largest prefix length for which every bit vector is compared individually;
/// beyond it one representative per count is used.
pub const FULL_ENUMERATION_MAX: usize = 12;

/// `p^(#ones) (1-p)^(#zeros)`.
pub fn bernoulli_product<S: Scalar>(p: &S, x: &[u8]) -> Result<S> {
    if p.is_negative() || *p > S::one() {
        return Err(Error::OutOfRange(p.to_string()));
    }
    let ones = count_ones(x)?;
    Ok(p.powu(ones) * (S::one() - p.clone()).powu(x.len() - ones))
}

/// `P(Y = x) = sum_j w_j p_j^(#ones) (1 - p_j)^(#zeros)` for the mixture `Y` directed by `mu`.
pub fn synthesize_fdd<S: Scalar>(mu: &MixingMeasure<S>, x: &[u8]) -> Result<S> {
    mu.atoms().iter().map(|a| Ok(a.w.clone() * bernoulli_product(&a.p, x)?)).sum()
}

/// Law of `T_k = Y_1 + ... + Y_k`: `P(T_k = m) = C(k, m) sum_j w_j p_j^m (1-p_j)^(k-m)`.
pub fn count_law_of_mixture<S: Scalar>(mu: &MixingMeasure<S>, k: usize) -> Result<CountDistribution<S>> {
    if k == 0 {
        return Err(Error::BadParams("sequence length must be positive".into()));
    }
    let mut weights = vec![S::zero(); k + 1];
    for atom in mu.atoms().iter().filter(|a| !a.w.is_zero()) {
        for (acc, b) in weights.iter_mut().zip(binomial_weights(k, &atom.p)) {
            *acc = acc.clone() + atom.w.clone() * b;
        }
    }
    CountDistribution::derived(k, weights)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<S> {
    pub k_max: usize,
    /// Entry `k - 1`: `max_{j <= k} |E[S_k^j] - E[T_k^j]|` for the normalized
    /// counts `S_k` of X and `T_k` of Y.
    pub per_k_moment_gap: Vec<S>,
    /// Entry `k - 1`: `max_m |P(X count = m) - P(Y count = m)|` over length `k`.
    pub per_count_gap: Vec<S>,
    /// The count `m` attaining `per_count_gap`.
    pub per_count_argmax: Vec<usize>,
    /// Entry `k - 1`: `max_x |P(X = x) - P(Y = x)|` over bit vectors of length `k`.
    pub per_event_gap: Vec<S>,
    pub tolerance: S,
    pub passed: bool,
}

impl<S: Scalar> VerificationReport<S> {
    pub fn max_gap(&self) -> S {
        max_of(self.per_k_moment_gap.iter().chain(&self.per_count_gap).chain(&self.per_event_gap).cloned())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let list = |v: &[S]| v.iter().map(Scalar::to_json).collect::<Vec<_>>();
        serde_json::json!({
            "k_max": self.k_max,
            "per_k_moment_gap": list(&self.per_k_moment_gap),
            "per_count_gap": list(&self.per_count_gap),
            "per_count_argmax": self.per_count_argmax,
            "per_event_gap": list(&self.per_event_gap),
            "max_gap": self.max_gap().to_json(),
            "tolerance": self.tolerance.to_json(),
            "passed": self.passed,
        })
    }
}

struct LevelGaps<S> {
    moment: S,
    count: S,
    count_argmax: usize,
    event: S,
}

fn compare_level<S: Scalar>(dx: &CountDistribution<S>, mu: &MixingMeasure<S>, k: usize) -> Result<LevelGaps<S>> {
    let law_x = dx.marginalize(k)?;
    let law_y = count_law_of_mixture(mu, k)?;

    let mut moment = S::zero();
    for j in 1..=k {
        let gap = (sn_moment(&law_x, j)? - sn_moment(&law_y, j)?).abs();
        if gap > moment {
            moment = gap;
        }
    }

    let (mut count, mut count_argmax) = (S::zero(), 0);
    for (m, (a, b)) in law_x.weights().iter().zip(law_y.weights()).enumerate() {
        let gap = (a.clone() - b.clone()).abs();
        if gap > count {
            count = gap;
            count_argmax = m;
        }
    }

    let mut event = S::zero();
    let mut check = |x: &[u8]| -> Result<()> {
        let gap = (law_x.point_probability(x)? - synthesize_fdd(mu, x)?).abs();
        if gap > event {
            event = gap;
        }
        Ok(())
    };
    if k <= FULL_ENUMERATION_MAX {
        for bits in 0u32..(1 << k) {
            let x: Vec<u8> = (0..k).map(|i| ((bits >> i) & 1) as u8).collect();
            check(&x)?;
        }
    } else {
        for m in 0..=k {
            let x: Vec<u8> = (0..k).map(|i| u8::from(i < m)).collect();
            check(&x)?;
        }
    }
    Ok(LevelGaps { moment, count, count_argmax, event })
}

/// Compares the exchangeable law `dx` with the mixture directed by `mu` on
/// every prefix length `k <= k_max`: moments of the normalized counts, the
/// count laws, and the individual bit-vector probabilities. Passes when no
/// gap exceeds `tol`.
pub fn verify_representation<S: Scalar>(
    dx: &CountDistribution<S>,
    mu: &MixingMeasure<S>,
    k_max: usize,
    tol: &S,
) -> Result<VerificationReport<S>> {
    if k_max == 0 || k_max > dx.n() {
        return Err(Error::IndexOutOfRange { index: k_max, max: dx.n() });
    }
    let levels = (1..=k_max).into_par_iter().map(|k| compare_level(dx, mu, k)).collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport {
        k_max,
        per_k_moment_gap: Vec::with_capacity(k_max),
        per_count_gap: Vec::with_capacity(k_max),
        per_count_argmax: Vec::with_capacity(k_max),
        per_event_gap: Vec::with_capacity(k_max),
        tolerance: tol.clone(),
        passed: false,
    };
    for level in levels {
        report.per_k_moment_gap.push(level.moment);
        report.per_count_gap.push(level.count);
        report.per_count_argmax.push(level.count_argmax);
        report.per_event_gap.push(level.event);
    }
    report.passed = report.max_gap() <= *tol;
    Ok(report)
}
