//! Exchangeable laws on `{0,1}^n`.
//!
//! A binary exchangeable law is determined by the distribution of the number
//! of ones: every bit vector with `m` ones has probability
//! `P(count = m) / C(n, m)`. [`CountDistribution`] stores only that count
//! law, so non-exchangeable laws cannot be represented.

use crate::combinatorics::{binomial, PascalTriangle};
use crate::error::{Error, Result};
use crate::scalar::{scalar_from_json, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution<S> {
    n: usize,
    weights: Vec<S>,
}

impl<S: Scalar> CountDistribution<S> {
    /// Validates `weights[m] = P(count = m)` for a sequence of length `n`.
    ///
    /// Weights must be nonnegative and sum to one, exactly for rationals and
    /// within `1e-12` for floats.
    pub fn new(n: usize, weights: Vec<S>) -> Result<Self> {
        Self::validated(n, weights, S::construction_tol())
    }

    /// Validation for laws computed from other laws, where summation error
    /// is allowed up to the derived tolerance.
    pub(crate) fn derived(n: usize, weights: Vec<S>) -> Result<Self> {
        Self::validated(n, weights, S::derived_tol())
    }

    fn validated(n: usize, weights: Vec<S>, tol: S) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParams("sequence length must be positive".into()));
        }
        if weights.len() != n + 1 {
            return Err(Error::LengthMismatch { expected: n + 1, found: weights.len() });
        }
        if let Some((index, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::NegativeWeight { index, value: w.to_string() });
        }
        let sum: S = weights.iter().cloned().sum();
        if (sum.clone() - S::one()).abs() > tol {
            return Err(Error::NotNormalized { sum: sum.to_string() });
        }
        Ok(Self { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `weights()[m] = P(count = m)`.
    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn weight(&self, m: usize) -> &S {
        &self.weights[m]
    }

    /// Probability of one specific bit vector of length `n`.
    pub fn point_probability(&self, x: &[u8]) -> Result<S> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: x.len() });
        }
        let m = count_ones(x)?;
        Ok(self.weights[m].clone() / S::from_biguint(&binomial(self.n, m)))
    }

    /// Law of the count among the first `k` coordinates (hypergeometric contraction).
    pub fn marginalize(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.n {
            return Err(Error::IndexOutOfRange { index: k, max: self.n });
        }
        if k == self.n {
            return Ok(self.clone());
        }
        let n = self.n;
        let pascal = PascalTriangle::new(n);
        let total = pascal.get(n, k);
        let weights = (0..=k)
            .map(|j| {
                (j..=n - (k - j))
                    .filter(|&m| !self.weights[m].is_zero())
                    .map(|m| {
                        let ways = pascal.get(m, j) * pascal.get(n - m, k - j);
                        self.weights[m].clone() * S::from_ratio(&ways, &total)
                    })
                    .sum()
            })
            .collect();
        Self::derived(k, weights)
    }

    /// Probability that the listed coordinates take the listed values.
    ///
    /// Only the number of constrained coordinates and the number of ones among
    /// them matter, not which coordinates they are.
    pub fn event_probability(&self, a: &BinaryAssignment) -> Result<S> {
        if let Some(&(index, _)) = a.pairs.iter().find(|(i, _)| *i > self.n) {
            return Err(Error::IndexOutOfRange { index, max: self.n });
        }
        let k = a.len();
        let ones = a.ones();
        if k == 0 {
            return Ok(S::one());
        }
        // Given count M on all n coordinates, the chance that k fixed
        // coordinates show a fixed pattern with `ones` ones is
        // C(n-k, M-ones) / C(n, M).
        let n = self.n;
        let pascal = PascalTriangle::new(n);
        Ok((ones..=n - (k - ones))
            .filter(|&m| !self.weights[m].is_zero())
            .map(|m| self.weights[m].clone() * S::from_ratio(&pascal.get(n - k, m - ones), &pascal.get(n, m)))
            .sum())
    }

    pub fn to_float(&self) -> CountDistribution<f64> {
        CountDistribution { n: self.n, weights: self.weights.iter().map(Scalar::to_f64).collect() }
    }

    /// Converts between scalar modes through the exact rational value.
    pub fn convert<T: Scalar>(&self) -> Result<CountDistribution<T>> {
        let weights = self
            .weights
            .iter()
            .map(|w| {
                w.to_rational()
                    .map(|r| T::from_rational(&r))
                    .ok_or_else(|| Error::Parse(format!("non-finite weight {w}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CountDistribution::derived(self.n, weights)
    }

    /// Largest absolute weight difference; the laws must have equal length.
    pub fn max_abs_diff(&self, other: &Self) -> Result<S> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, found: other.n });
        }
        Ok(crate::scalar::max_of(self.weights.iter().zip(&other.weights).map(|(a, b)| (a.clone() - b.clone()).abs())))
    }

    /// `{"n": n, "weights": [...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "weights": self.weights.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    /// Reads `{"n": n, "weights": [...]}`; unknown keys are ignored.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let n = value
            .get("n")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer field \"n\"".into()))? as usize;
        let weights = value
            .get("weights")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field \"weights\"".into()))?
            .iter()
            .map(scalar_from_json)
            .collect::<Result<Vec<S>>>()?;
        Self::new(n, weights)
    }
}

/// A partial specification `X_{i_1} = x_1, ..., X_{i_k} = x_k` with distinct
/// 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryAssignment {
    pairs: Vec<(usize, u8)>,
}

impl BinaryAssignment {
    pub fn new(pairs: Vec<(usize, u8)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(index, value) in &pairs {
            if index == 0 {
                return Err(Error::IndexOutOfRange { index, max: usize::MAX });
            }
            if value > 1 {
                return Err(Error::BadParams(format!("value {value} at index {index} is not binary")));
            }
            if !seen.insert(index) {
                return Err(Error::DuplicateIndex(index));
            }
        }
        Ok(Self { pairs })
    }

    /// Assigns `values[j]` to coordinate `j + 1`.
    pub fn prefix(values: &[u8]) -> Result<Self> {
        Self::new(values.iter().enumerate().map(|(j, &v)| (j + 1, v)).collect())
    }

    pub fn pairs(&self) -> &[(usize, u8)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.pairs.iter().filter(|(_, v)| *v == 1).count()
    }
}

/// Number of ones in a bit vector; rejects entries other than 0 and 1.
pub fn count_ones(x: &[u8]) -> Result<usize> {
    x.iter().try_fold(0usize, |acc, &b| match b {
        0 => Ok(acc),
        1 => Ok(acc + 1),
        _ => Err(Error::BadParams(format!("bit value {b} is not 0 or 1"))),
    })
}
