//! Mixed moments of exchangeable laws and moments of the empirical mean.
//!
//! For a binary exchangeable law of length `n`, `E[X_1 ... X_k]` is the
//! probability that the first `k` coordinates are all one, which given
//! `count = m` equals `(m)_k / (n)_k`. The `k`-th moment of the empirical mean
//! `S_n = (1/n) sum X_i` expands over index tuples grouped by the number of
//! distinct indices `r`; each group contributes `S(k, r) (n)_r` copies of the
//! mixed moment of order `r`.

use crate::combinatorics::{falling_factorial, stirling2};
use crate::error::{Error, Result};
use crate::law::CountDistribution;
use crate::measure::MixingMeasure;
use crate::scalar::{max_of, scalar_from_json, Scalar};

use num_bigint::BigUint;

/// `values[k - 1] = m_k`; `m_0 = 1` is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector<S> {
    values: Vec<S>,
}

impl<S: Scalar> MomentVector<S> {
    pub fn new(values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(Self { values })
    }

    pub(crate) fn from_values(values: Vec<S>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `m_k` for `k >= 0`, with `m_0 = 1`.
    pub fn get(&self, k: usize) -> Option<S> {
        if k == 0 {
            Some(S::one())
        } else {
            self.values.get(k - 1).cloned()
        }
    }

    /// `1 >= m_1 >= m_2 >= ... >= 0`, which holds for moments of any measure on `[0, 1]`.
    pub fn is_monotone(&self) -> bool {
        let mut prev = S::one();
        for v in &self.values {
            if v.is_negative() || *v > prev {
                return false;
            }
            prev = v.clone();
        }
        true
    }

    /// The sequence `m_0, m_1, ..., m_K`.
    pub fn with_leading_one(&self) -> Vec<S> {
        std::iter::once(S::one()).chain(self.values.iter().cloned()).collect()
    }

    pub fn to_float(&self) -> MomentVector<f64> {
        MomentVector { values: self.values.iter().map(Scalar::to_f64).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.values.iter().map(Scalar::to_json).collect())
    }

    /// Accepts a bare array or an object with a `"moments"` array.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let array = value
            .as_array()
            .or_else(|| value.get("moments").and_then(serde_json::Value::as_array))
            .ok_or_else(|| Error::Parse("expected a JSON array of moments".into()))?;
        Self::new(array.iter().map(scalar_from_json).collect::<Result<Vec<_>>>()?)
    }
}

/// `E[X_1 X_2 ... X_k] = sum_m P(count = m) (m)_k / (n)_k`.
pub fn mixed_moment<S: Scalar>(d: &CountDistribution<S>, k: usize) -> Result<S> {
    let n = d.n();
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let denom = falling_factorial(n, k);
    Ok((k..=n)
        .filter(|&m| !d.weight(m).is_zero())
        .map(|m| d.weight(m).clone() * S::from_ratio(&falling_factorial(m, k), &denom))
        .sum())
}

/// `E[S_n^k]` by the expansion over distinct-index counts:
/// `n^-k sum_r S(k, r) (n)_r E[X_1 ... X_r]`.
///
/// Terms with `r > n` vanish because `(n)_r = 0`.
pub fn sn_moment<S: Scalar>(d: &CountDistribution<S>, k: usize) -> Result<S> {
    if k == 0 {
        return Ok(S::one());
    }
    let n = d.n();
    let scale = num_traits::pow(BigUint::from(n), k);
    let mut total = S::zero();
    for r in 1..=k.min(n) {
        let tuples = stirling2(k, r) * falling_factorial(n, r);
        total = total + S::from_ratio(&tuples, &scale) * mixed_moment(d, r)?;
    }
    Ok(total)
}

/// `E[S_n^k] = sum_m P(count = m) (m / n)^k`, straight from the count law.
pub fn sn_moment_direct<S: Scalar>(d: &CountDistribution<S>, k: usize) -> S {
    let n = S::from_usize(d.n());
    d.weights().iter().enumerate().map(|(m, w)| w.clone() * (S::from_usize(m) / n.clone()).powu(k)).sum()
}

/// Mixed moments of orders `1..=count`.
pub fn moment_vector<S: Scalar>(d: &CountDistribution<S>, count: usize) -> Result<MomentVector<S>> {
    if count == 0 || count > d.n() {
        return Err(Error::IndexOutOfRange { index: count, max: d.n() });
    }
    let values = (1..=count).map(|k| mixed_moment(d, k)).collect::<Result<Vec<_>>>()?;
    Ok(MomentVector { values })
}

/// Moments of the empirical mean, orders `1..=count`.
pub fn sn_moment_vector<S: Scalar>(d: &CountDistribution<S>, count: usize) -> Result<MomentVector<S>> {
    if count == 0 {
        return Err(Error::EmptyVector);
    }
    let values = (1..=count).map(|k| sn_moment(d, k)).collect::<Result<Vec<_>>>()?;
    Ok(MomentVector { values })
}

/// Sup-norm distance over the common prefix of two moment vectors.
pub fn moment_gap<S: Scalar>(a: &MomentVector<S>, b: &MomentVector<S>) -> Result<S> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(max_of(a.values.iter().zip(&b.values).map(|(x, y)| (x.clone() - y.clone()).abs())))
}

/// `integral of f dmu` for `f(x) = sum_j coeffs[j] x^j`, computed from the moments of `mu`.
pub fn polynomial_expectation<S: Scalar>(mu: &MixingMeasure<S>, coeffs: &[S]) -> S {
    if coeffs.is_empty() {
        return S::zero();
    }
    let moments = mu.moments(coeffs.len() - 1).with_leading_one();
    coeffs.iter().zip(moments).map(|(c, m)| c.clone() * m).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    fn law(n: usize, w: &[(i64, i64)]) -> CountDistribution<Rational> {
        CountDistribution::new(n, w.iter().map(|&(a, b)| ratio(a, b)).collect()).unwrap()
    }

    fn uniform(n: usize) -> CountDistribution<Rational> {
        CountDistribution::new(n, vec![ratio(1, n as i64 + 1); n + 1]).unwrap()
    }

    #[test]
    fn mixed_moment_examples() {
        assert_eq!(mixed_moment(&law(2, &[(1, 4), (1, 2), (1, 4)]), 2).unwrap(), ratio(1, 4));
        assert_eq!(mixed_moment(&uniform(3), 2).unwrap(), ratio(1, 3));
        assert_eq!(mixed_moment(&law(2, &[(0, 1), (0, 1), (1, 1)]), 1).unwrap(), ratio(1, 1));
        assert!(matches!(mixed_moment(&uniform(3), 4), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn sn_moment_examples() {
        let fair = law(2, &[(1, 4), (1, 2), (1, 4)]);
        assert_eq!(sn_moment(&fair, 2).unwrap(), ratio(3, 8));
        assert_eq!(sn_moment(&fair, 1).unwrap(), mixed_moment(&fair, 1).unwrap());
        let ones = law(2, &[(0, 1), (0, 1), (1, 1)]);
        for k in 1..8 {
            assert_eq!(sn_moment(&ones, k).unwrap(), ratio(1, 1));
        }
    }

    #[test]
    fn sn_moment_allows_order_above_length() {
        let d = uniform(3);
        for k in 1..=9 {
            assert_eq!(sn_moment(&d, k).unwrap(), sn_moment_direct(&d, k), "k={k}");
        }
    }

    #[test]
    fn moment_vector_examples() {
        let v = moment_vector(&uniform(5), 4).unwrap();
        assert_eq!(v.values(), &[ratio(1, 2), ratio(1, 3), ratio(1, 4), ratio(1, 5)]);
        assert!(v.is_monotone());
        let ones = law(3, &[(0, 1), (0, 1), (0, 1), (1, 1)]);
        assert_eq!(moment_vector(&ones, 3).unwrap().values(), vec![ratio(1, 1); 3].as_slice());
        assert!(moment_vector(&ones, 4).is_err());
    }

    #[test]
    fn moment_gap_examples() {
        let a = MomentVector::new(vec![ratio(1, 2), ratio(1, 3)]).unwrap();
        let b = MomentVector::new(vec![ratio(1, 2), ratio(1, 4)]).unwrap();
        assert_eq!(moment_gap(&a, &a).unwrap(), ratio(0, 1));
        assert_eq!(moment_gap(&a, &b).unwrap(), ratio(1, 12));
        assert_eq!(moment_gap(&b, &a).unwrap(), ratio(1, 12));
        let long = MomentVector::new(vec![ratio(1, 2), ratio(1, 3), ratio(0, 1)]).unwrap();
        assert_eq!(moment_gap(&a, &long).unwrap(), ratio(0, 1));
        assert_eq!(MomentVector::<f64>::new(vec![]), Err(Error::EmptyVector));
    }

    #[test]
    fn polynomial_expectation_examples() {
        let delta = MixingMeasure::point_mass(ratio(1, 2)).unwrap();
        let sq = [ratio(0, 1), ratio(0, 1), ratio(1, 1)];
        assert_eq!(polynomial_expectation(&delta, &sq), ratio(1, 4));
        assert_eq!(polynomial_expectation(&delta, &[ratio(1, 1)]), ratio(1, 1));
        // Grid average of x over {0, 1/g, ..., 1} is exactly 1/2.
        let g = 40;
        let grid = MixingMeasure::new((0..=g).map(|j| (j as f64 / g as f64, 1.0 / (g as f64 + 1.0)))).unwrap();
        assert!((polynomial_expectation(&grid, &[0.0, 1.0]) - 0.5).abs() < 1e-12);
        assert!((polynomial_expectation(&grid, &[1.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moments_json() {
        let v = MomentVector::<Rational>::from_json(&serde_json::json!(["1/2", 0.25])).unwrap();
        assert_eq!(v.values(), &[ratio(1, 2), ratio(1, 4)]);
        assert_eq!(v.to_json(), serde_json::json!(["1/2", "1/4"]));
        assert!(MomentVector::<f64>::from_json(&serde_json::json!([])).is_err());
        let wrapped = MomentVector::<f64>::from_json(&serde_json::json!({"moments": [0.5]})).unwrap();
        assert_eq!(wrapped.values(), &[0.5]);
    }
}
