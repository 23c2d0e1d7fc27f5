//! Exchangeable families used as test corpus and demo inputs.
//!
//! Every family except `Explicit` is infinitely extendable: the law at length
//! `k` is the marginal of the law at any longer length.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::binomial_row;
use crate::error::{Error, Result};
use crate::law::CountDistribution;
use crate::measure::MixingMeasure;
use crate::scalar::Scalar;
use crate::synthesis::count_law_of_mixture;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec<S> {
    /// Independent coin flips with success probability `p`.
    Iid { p: S },
    /// Polya urn starting with `a` ones and `b` zeros, adding one ball of the drawn colour.
    Polya { a: S, b: S },
    /// A fixed law; lengths up to its own are available by marginalization.
    Explicit(CountDistribution<S>),
    /// Mixture of i.i.d. laws.
    Mixture(MixingMeasure<S>),
}

impl<S: Scalar> FamilySpec<S> {
    pub fn iid(p: S) -> Result<Self> {
        if p.is_negative() || p > S::one() {
            return Err(Error::BadParams(format!("iid probability {p} outside [0, 1]")));
        }
        Ok(FamilySpec::Iid { p })
    }

    pub fn polya(a: S, b: S) -> Result<Self> {
        if !a.is_positive() || !b.is_positive() {
            return Err(Error::BadParams(format!("polya parameters must be positive, got a={a} b={b}")));
        }
        Ok(FamilySpec::Polya { a, b })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FamilySpec::Iid { .. } => "iid",
            FamilySpec::Polya { .. } => "polya",
            FamilySpec::Explicit(_) => "explicit",
            FamilySpec::Mixture(_) => "mixture",
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::Iid { p } => Self::iid(p.clone()).map(drop),
            FamilySpec::Polya { a, b } => Self::polya(a.clone(), b.clone()).map(drop),
            FamilySpec::Explicit(_) | FamilySpec::Mixture(_) => Ok(()),
        }
    }
}

/// Count law of the first `n` coordinates of the family.
pub fn generate<S: Scalar>(spec: &FamilySpec<S>, n: usize) -> Result<CountDistribution<S>> {
    if n == 0 {
        return Err(Error::BadParams("sequence length must be positive".into()));
    }
    spec.validate()?;
    match spec {
        FamilySpec::Iid { p } => CountDistribution::derived(n, binomial_weights(n, p)),
        FamilySpec::Polya { a, b } => CountDistribution::derived(n, polya_weights(n, a, b)),
        FamilySpec::Explicit(d) => {
            if d.n() < n {
                return Err(Error::LengthMismatch { expected: n, found: d.n() });
            }
            d.marginalize(n)
        }
        FamilySpec::Mixture(mu) => count_law_of_mixture(mu, n),
    }
}

const RESCALE_ABOVE: f64 = 1e250;

/// Normalizes weights built by a ratio recurrence, rescaling in float mode
/// so intermediate values stay finite.
fn recurrence_weights<S: Scalar>(n: usize, ratio: impl Fn(usize) -> S) -> Vec<S> {
    let mut u = Vec::with_capacity(n + 1);
    u.push(S::one());
    let cap = S::from_f64(RESCALE_ABOVE).expect("finite");
    let shrink = S::from_f64(1.0 / RESCALE_ABOVE).expect("finite");
    for m in 0..n {
        let next = u[m].clone() * ratio(m);
        if !S::is_exact() && next > cap {
            u.iter_mut().for_each(|x| *x = x.clone() * shrink.clone());
            u.push(next * shrink.clone());
        } else {
            u.push(next);
        }
    }
    let total: S = u.iter().cloned().sum();
    u.into_iter().map(|x| x / total.clone()).collect()
}

/// Binomial(n, p) probabilities.
pub fn binomial_weights<S: Scalar>(n: usize, p: &S) -> Vec<S> {
    let q = S::one() - p.clone();
    if p.is_zero() || q.is_zero() {
        let hit = if p.is_zero() { 0 } else { n };
        return (0..=n).map(|m| if m == hit { S::one() } else { S::zero() }).collect();
    }
    if S::is_exact() {
        return binomial_row(n)
            .iter()
            .enumerate()
            .map(|(m, c)| S::from_biguint(c) * p.powu(m) * q.powu(n - m))
            .collect();
    }
    let odds = p.clone() / q;
    recurrence_weights(n, |m| S::from_usize(n - m) / S::from_usize(m + 1) * odds.clone())
}

/// Beta-binomial probabilities of the Polya urn:
/// `C(n, m) a^(m) b^(n-m) / (a+b)^(n)` with rising factorials `x^(j)`.
pub fn polya_weights<S: Scalar>(n: usize, a: &S, b: &S) -> Vec<S> {
    if S::is_exact() {
        let rising = |x: &S| {
            let mut out = Vec::with_capacity(n + 1);
            out.push(S::one());
            for i in 0..n {
                let next = out[i].clone() * (x.clone() + S::from_usize(i));
                out.push(next);
            }
            out
        };
        let ra = rising(a);
        let rb = rising(b);
        let denom = rising(&(a.clone() + b.clone()))[n].clone();
        return binomial_row(n)
            .iter()
            .enumerate()
            .map(|(m, c)| S::from_biguint(c) * ra[m].clone() * rb[n - m].clone() / denom.clone())
            .collect();
    }
    recurrence_weights(n, |m| {
        S::from_usize(n - m) / S::from_usize(m + 1) * (a.clone() + S::from_usize(m))
            / (b.clone() + S::from_usize(n - m - 1))
    })
}

/// Number of independent random streams the trials are split over. Fixed, so
/// results do not depend on the thread count.
pub const SAMPLE_SHARDS: u64 = 16;

/// Simulated histogram of the count over `trials` independent length-`n` runs.
pub fn sample_count_histogram<S: Scalar>(spec: &FamilySpec<S>, n: usize, trials: u64, seed: u64) -> Result<Vec<u64>> {
    if trials == 0 {
        return Err(Error::BadParams("trials must be positive".into()));
    }
    if n == 0 {
        return Err(Error::BadParams("sequence length must be positive".into()));
    }
    spec.validate()?;
    let sampler = Sampler::new(spec, n)?;
    let histograms: Vec<Vec<u64>> = (0..SAMPLE_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let share = trials / SAMPLE_SHARDS + u64::from(shard < trials % SAMPLE_SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut counts = vec![0u64; n + 1];
            for _ in 0..share {
                counts[sampler.draw(n, &mut rng)] += 1;
            }
            counts
        })
        .collect();
    let mut total = vec![0u64; n + 1];
    for h in histograms {
        total.iter_mut().zip(h).for_each(|(t, c)| *t += c);
    }
    Ok(total)
}

/// Empirical count law from [`sample_count_histogram`]; frequencies are exact in rational mode.
pub fn sample_counts<S: Scalar>(
    spec: &FamilySpec<S>,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<CountDistribution<S>> {
    let counts = sample_count_histogram(spec, n, trials, seed)?;
    let weights = counts.iter().map(|&c| S::from_ratio(&c.into(), &trials.into())).collect();
    CountDistribution::derived(n, weights)
}

enum Sampler {
    Iid {
        p: f64,
    },
    Polya {
        a: f64,
        b: f64,
    },
    /// Inverse-CDF draw of the count itself.
    Counts {
        cdf: Vec<f64>,
    },
    Mixture {
        cdf: Vec<f64>,
        atoms: Vec<f64>,
    },
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

fn inverse_cdf(cdf: &[f64], u: f64) -> usize {
    let total = cdf.last().copied().unwrap_or(1.0);
    cdf.partition_point(|&c| c <= u * total).min(cdf.len() - 1)
}

impl Sampler {
    fn new<S: Scalar>(spec: &FamilySpec<S>, n: usize) -> Result<Self> {
        Ok(match spec {
            FamilySpec::Iid { p } => Sampler::Iid { p: p.to_f64() },
            FamilySpec::Polya { a, b } => Sampler::Polya { a: a.to_f64(), b: b.to_f64() },
            FamilySpec::Explicit(_) => {
                let law = generate(spec, n)?;
                Sampler::Counts { cdf: cumulative(law.weights().iter().map(Scalar::to_f64)) }
            }
            FamilySpec::Mixture(mu) => Sampler::Mixture {
                cdf: cumulative(mu.atoms().iter().map(|a| a.w.to_f64())),
                atoms: mu.atoms().iter().map(|a| a.p.to_f64()).collect(),
            },
        })
    }

    fn draw<R: Rng>(&self, n: usize, rng: &mut R) -> usize {
        let flips = |p: f64, rng: &mut R| (0..n).filter(|_| rng.random::<f64>() < p).count();
        match self {
            Sampler::Iid { p } => flips(*p, rng),
            Sampler::Polya { a, b } => {
                let mut ones = 0usize;
                for i in 0..n {
                    let p = (a + ones as f64) / (a + b + i as f64);
                    if rng.random::<f64>() < p {
                        ones += 1;
                    }
                }
                ones
            }
            Sampler::Counts { cdf } => inverse_cdf(cdf, rng.random()),
            Sampler::Mixture { cdf, atoms } => {
                let p = atoms[inverse_cdf(cdf, rng.random())];
                flips(p, rng)
            }
        }
    }
}
