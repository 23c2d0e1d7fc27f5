//! From exchangeable laws and moment data to mixing measures.
//!
//! [`law_of_sn`] gives the finite-`n` approximation of the mixing measure:
//! the law of the empirical mean, with atoms at `m/n`. [`recover_measure`]
//! goes the other way, fitting a measure on a uniform grid of `[0, 1]` to a
//! finite list of moments.

mod active_set;
mod pgd;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::generators::{generate, FamilySpec};
use crate::law::CountDistribution;
use crate::measure::MixingMeasure;
use crate::moments::MomentVector;
use crate::scalar::{Rational, Scalar};

/// Law of `S_n = count / n` as a measure on `{0, 1/n, ..., 1}`, zero-weight atoms dropped.
pub fn law_of_sn<S: Scalar>(d: &CountDistribution<S>) -> MixingMeasure<S> {
    let n = S::from_usize(d.n());
    let atoms = d
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(m, w)| (S::from_usize(m) / n.clone(), w.clone()));
    MixingMeasure::new(atoms).expect("a count law maps to a probability measure on [0, 1]")
}

/// `m_k = sum_j w_j p_j^k` for `k = 1..=count`.
pub fn measure_moments<S: Scalar>(mu: &MixingMeasure<S>, count: usize) -> MomentVector<S> {
    mu.moments(count)
}

/// The most negative signed finite difference found by
/// [`check_complete_monotonicity`].
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityCheck<S> {
    pub holds: bool,
    /// Difference order `j`.
    pub order: usize,
    /// Offset `k` into the sequence `m_0, m_1, ...`.
    pub offset: usize,
    /// `(-1)^j (Delta^j m)_k`.
    pub value: S,
}

/// Checks `(-1)^j (Delta^j m)_k >= -tol` for every difference reachable in
/// `m_0 = 1, m_1, ..., m_K`, where `(Delta m)_k = m_{k+1} - m_k`.
pub fn check_complete_monotonicity<S: Scalar>(m: &MomentVector<S>, tol: &S) -> Result<MonotonicityCheck<S>> {
    if m.is_empty() {
        return Err(Error::EmptyVector);
    }
    let mut level = m.with_leading_one();
    let mut worst: Option<(usize, usize, S)> = None;
    let mut order = 0;
    loop {
        for (offset, d) in level.iter().enumerate() {
            let signed = if order % 2 == 0 { d.clone() } else { -d.clone() };
            if worst.as_ref().is_none_or(|(_, _, v)| signed < *v) {
                worst = Some((order, offset, signed));
            }
        }
        if level.len() == 1 {
            break;
        }
        level = level.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
        order += 1;
    }
    let (order, offset, value) = worst.expect("at least one difference");
    Ok(MonotonicityCheck { holds: value >= -tol.clone(), order, offset, value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    ProjectedGradient,
    ActiveSet,
}

impl Solver {
    pub fn as_str(self) -> &'static str {
        match self {
            Solver::ProjectedGradient => "projected-gradient",
            Solver::ActiveSet => "active-set",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOptions {
    /// Support is `{j / grid_size : 0 <= j <= grid_size}`.
    pub grid_size: usize,
    /// Largest acceptable residual `||moments(mu) - m||_2`.
    pub tol: f64,
    /// Slack for the complete-monotonicity screen.
    pub screen_tol: f64,
    pub max_iter: usize,
    /// Gradient descent stops once one step improves the objective by less than this.
    pub min_improvement: f64,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self { grid_size: 200, tol: 1e-6, screen_tol: 1e-8, max_iter: 50_000, min_improvement: 1e-14 }
    }
}

#[derive(Debug, Clone)]
pub struct Recovery<S> {
    pub measure: MixingMeasure<S>,
    /// `||moments(measure) - m||_2`, rounded to f64.
    pub residual: f64,
    /// Squared residual in the working scalar mode.
    pub objective: S,
    pub iterations: usize,
    pub solver: Solver,
}

impl<S: Scalar> Recovery<S> {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.measure.to_json();
        v["residual"] = serde_json::json!(self.residual);
        v["objective"] = self.objective.to_json();
        v["iterations"] = serde_json::json!(self.iterations);
        v["solver"] = serde_json::json!(self.solver.as_str());
        v
    }
}

/// [`recover_measure_with`] with default screening and iteration settings.
pub fn recover_measure<S: Scalar>(m: &MomentVector<S>, grid_size: usize, tol: f64) -> Result<Recovery<S>> {
    recover_measure_with(m, &RecoveryOptions { grid_size, tol, ..RecoveryOptions::default() })
}

/// Fits a probability measure on a uniform grid to the moments `m`.
///
/// Inputs failing the complete-monotonicity screen are rejected. In float
/// mode the fit is projected gradient descent from the uniform grid measure;
/// if that stops above `tol`, an exact active-set solve is tried and the
/// better of the two is kept. In rational mode only the exact active-set solve
/// runs, so moments realizable on the grid are matched with zero residual.
/// Finitely many moments do not determine a measure, so the two solvers can
/// return different measures with the same moments.
pub fn recover_measure_with<S: Scalar>(m: &MomentVector<S>, opts: &RecoveryOptions) -> Result<Recovery<S>> {
    if opts.grid_size == 0 {
        return Err(Error::BadParams("grid size must be positive".into()));
    }
    let screen_tol = S::from_f64(opts.screen_tol)
        .ok_or_else(|| Error::BadParams(format!("screening tolerance {}", opts.screen_tol)))?;
    let screen = check_complete_monotonicity(m, &screen_tol)?;
    if !screen.holds {
        return Err(Error::NotCompletelyMonotone {
            order: screen.order,
            offset: screen.offset,
            value: screen.value.to_string(),
        });
    }

    let mut best = if S::is_exact() {
        solve_active_set(m, opts)?
    } else {
        let pgd = solve_pgd(m, opts)?;
        if pgd.residual <= opts.tol {
            pgd
        } else {
            let exact = solve_active_set(m, opts)?;
            if exact.residual < pgd.residual {
                exact
            } else {
                pgd
            }
        }
    };
    best.measure = best.measure.without_null_atoms();
    if best.residual > opts.tol {
        return Err(Error::NoConvergence { iterations: best.iterations, residual: best.residual.to_string() });
    }
    Ok(best)
}

fn finish<S: Scalar>(
    m: &MomentVector<S>,
    atoms: Vec<(S, S)>,
    iterations: usize,
    solver: Solver,
) -> Result<Recovery<S>> {
    let measure = MixingMeasure::new(atoms)?;
    let fitted = measure.moments(m.len());
    let objective: S = fitted.values().iter().zip(m.values()).map(|(a, b)| (a.clone() - b.clone()).powu(2)).sum();
    let residual = objective.to_f64().sqrt();
    Ok(Recovery { measure, residual, objective, iterations, solver })
}

fn solve_pgd<S: Scalar>(m: &MomentVector<S>, opts: &RecoveryOptions) -> Result<Recovery<S>> {
    let cols = opts.grid_size + 1;
    let rows = m.len();
    let nodes: Vec<f64> = (0..cols).map(|j| j as f64 / opts.grid_size as f64).collect();
    let mut data = Vec::with_capacity(rows * cols);
    for k in 1..=rows {
        data.extend(nodes.iter().map(|p| p.powi(k as i32)));
    }
    let design = pgd::Design { rows, cols, data };
    let target: Vec<f64> = m.values().iter().map(Scalar::to_f64).collect();
    let out = pgd::minimize(&design, &target, opts.max_iter, opts.min_improvement);
    let atoms = (0..cols)
        .filter(|&j| out.weights[j] > 0.0)
        .map(|j| {
            let p = S::from_ratio(&j.into(), &opts.grid_size.into());
            let w = S::from_f64(out.weights[j]).expect("finite weight");
            (p, w)
        })
        .collect();
    finish(m, atoms, out.iterations, Solver::ProjectedGradient)
}

fn solve_active_set<S: Scalar>(m: &MomentVector<S>, opts: &RecoveryOptions) -> Result<Recovery<S>> {
    let grid = Rational::from_usize(opts.grid_size);
    let columns: Vec<Vec<Rational>> = (0..=opts.grid_size)
        .map(|j| {
            let p = Rational::from_usize(j) / &grid;
            (1..=m.len()).map(|k| p.powu(k)).collect()
        })
        .collect();
    let target = m
        .values()
        .iter()
        .map(|v| v.to_rational().ok_or_else(|| Error::Parse(format!("non-finite moment {v}"))))
        .collect::<Result<Vec<_>>>()?;
    let out = active_set::minimize(&columns, &target, opts.max_iter);
    let atoms = out
        .weights
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(j, w)| (S::from_ratio(&j.into(), &opts.grid_size.into()), S::from_rational(w)))
        .collect();
    finish(m, atoms, out.iterations, Solver::ActiveSet)
}

/// Finite-`n` approximation of the mixing measure of a family: the law of
/// the empirical mean of its first `n` coordinates.
pub fn estimate_definetti<S: Scalar>(family: &FamilySpec<S>, n: usize) -> Result<MixingMeasure<S>> {
    Ok(law_of_sn(&generate(family, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{moment_gap, sn_moment};
    use crate::scalar::ratio;

    fn moments(values: &[(i64, i64)]) -> MomentVector<Rational> {
        MomentVector::new(values.iter().map(|&(a, b)| ratio(a, b)).collect()).unwrap()
    }

    #[test]
    fn law_of_sn_examples() {
        let fair = CountDistribution::new(2, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]).unwrap();
        let mu = law_of_sn(&fair);
        assert_eq!(
            mu,
            MixingMeasure::new([(ratio(0, 1), ratio(1, 4)), (ratio(1, 2), ratio(1, 2)), (ratio(1, 1), ratio(1, 4))])
                .unwrap()
        );
        let polya = generate(&FamilySpec::polya(ratio(1, 1), ratio(1, 1)).unwrap(), 4).unwrap();
        let mu = law_of_sn(&polya);
        assert_eq!(mu.len(), 5);
        assert!(mu.atoms().iter().enumerate().all(|(j, a)| a.p == ratio(j as i64, 4) && a.w == ratio(1, 5)));
        assert_eq!(measure_moments(&mu, 2).values(), &[ratio(1, 2), ratio(3, 8)]);
        for k in 1..6 {
            assert_eq!(mu.moments(k).values()[k - 1], sn_moment(&polya, k).unwrap());
        }
        let ones = CountDistribution::new(2, vec![ratio(0, 1), ratio(0, 1), ratio(1, 1)]).unwrap();
        assert_eq!(law_of_sn(&ones), MixingMeasure::point_mass(ratio(1, 1)).unwrap());
    }

    #[test]
    fn monotonicity_examples() {
        let tol = ratio(0, 1);
        let uniform = moments(&[(1, 2), (1, 3), (1, 4), (1, 5)]);
        assert!(check_complete_monotonicity(&uniform, &tol).unwrap().holds);
        let bad = check_complete_monotonicity(&moments(&[(9, 10), (1, 5)]), &tol).unwrap();
        assert!(!bad.holds);
        assert_eq!((bad.order, bad.offset, bad.value), (2, 0, ratio(-3, 5)));
        assert!(check_complete_monotonicity(&moments(&[(1, 1); 3]), &tol).unwrap().holds);
        assert!(MomentVector::<Rational>::new(vec![]).is_err());
    }

    #[test]
    fn tolerance_admits_small_violations() {
        let m = MomentVector::new(vec![0.5, 0.5 + 1e-10]).unwrap();
        assert!(!check_complete_monotonicity(&m, &0.0).unwrap().holds);
        assert!(check_complete_monotonicity(&m, &1e-8).unwrap().holds);
    }

    #[test]
    fn recover_point_mass_at_one() {
        let r = recover_measure(&MomentVector::new(vec![1.0; 3]).unwrap(), 10, 1e-6).unwrap();
        assert!(r.residual < 1e-6);
        assert!(r.measure.mass_near(&1.0, &0.0) > 1.0 - 1e-4);
        let exact = recover_measure(&moments(&[(1, 1); 3]), 10, 0.0).unwrap();
        assert_eq!(exact.measure, MixingMeasure::point_mass(ratio(1, 1)).unwrap());
        assert!(exact.objective.is_zero());
    }

    #[test]
    fn recover_point_mass_at_half() {
        let m = MomentVector::new(vec![0.5, 0.25, 0.125, 0.0625]).unwrap();
        let r = recover_measure(&m, 100, 1e-6).unwrap();
        assert!(r.residual < 1e-6, "residual {}", r.residual);
        assert!(r.measure.mass_near(&0.5, &0.02) >= 0.99);
        assert!(moment_gap(&r.measure.moments(4), &m).unwrap() < 1e-6);
    }

    #[test]
    fn recover_uniform() {
        let m = MomentVector::new((1..=6).map(|k| 1.0 / (k as f64 + 1.0)).collect()).unwrap();
        let r = recover_measure(&m, 200, 1e-5).unwrap();
        assert!(r.residual < 1e-5, "residual {}", r.residual);
        for j in 0..=200 {
            let x = j as f64 / 200.0;
            assert!((r.measure.cdf(&x) - x).abs() <= 0.05, "cdf at {x}: {}", r.measure.cdf(&x));
        }
    }

    #[test]
    fn recovery_rejects_bad_moments() {
        let err = recover_measure(&moments(&[(9, 10), (1, 5)]), 50, 1e-6).unwrap_err();
        assert!(matches!(err, Error::NotCompletelyMonotone { order: 2, offset: 0, .. }));
    }

    #[test]
    fn recovery_reports_no_convergence() {
        // Moments of delta_{1/3} cannot be matched on the grid {0, 1/2, 1}.
        let m = moments(&[(1, 3), (1, 9), (1, 27)]);
        let err = recover_measure(&m, 2, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn exact_recovery_of_grid_measure() {
        let mu = MixingMeasure::new([
            (ratio(1, 10), ratio(1, 5)),
            (ratio(3, 10), ratio(1, 2)),
            (ratio(9, 10), ratio(3, 10)),
        ])
        .unwrap();
        let m = mu.moments(6);
        let r = recover_measure(&m, 20, 0.0).unwrap();
        assert!(r.objective.is_zero());
        assert_eq!(r.measure.moments(6), m);
    }
}
