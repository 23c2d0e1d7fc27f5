//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use exchangeable::oracle::{
    check_collision, check_moment_expansion, check_point_probabilities, check_repeated_indices, standard_models,
};
use exchangeable::scalar::ratio;
use exchangeable::{
    check_complete_monotonicity, count_law_of_mixture, generate, law_of_sn, measure_moments, moment_gap,
    recover_measure, sample_counts, sn_moment, verify_representation, FamilySpec, MixingMeasure, MomentVector,
    Rational, Scalar,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT_SUITE_MAX_N: usize = 10;
const EXACT_SUITE_BUDGET: Duration = Duration::from_secs(10);
const EVENT_TUPLES: usize = 100;
const EVENT_MAX_N: usize = 8;
const EVENT_MAX_K: usize = 5;
const EXPANSION_MAX_K: usize = 6;
const COLLISION_K: (usize, usize) = (2, 5);
const COLLISION_N: (usize, usize) = (2, 8);
const CONVERGENCE_N: [usize; 3] = [50, 100, 200];
const IID_EXCESS_TOL: f64 = 1e-12;
const RECOVERY_GRID: usize = 200;
const UNIFORM_MOMENT_TOL: f64 = 1e-5;
const UNIFORM_CDF_TOL: f64 = 0.05;
const POINT_MASS_GRID: usize = 100;
const POINT_MASS_TOL: f64 = 1e-6;
const POINT_MASS_RADIUS: f64 = 0.02;
const POINT_MASS_MIN_MASS: f64 = 0.99;
const RECOVERY_BUDGET: Duration = Duration::from_secs(30);
const ROUND_TRIP_K: usize = 8;
const SCREEN_MEASURES: usize = 1000;
const SCREEN_MOMENTS: usize = 8;
const MC_TRIALS: u64 = 100_000;
const MC_SEED: u64 = 20_240_601;
const MC_MAX_N: usize = 5;
const MC_TV_TOL: f64 = 0.02;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn exact_point_probabilities() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for model in standard_models() {
        for n in 1..=EXACT_SUITE_MAX_N.min(model.max_len()) {
            let r = check_point_probabilities(&model, n).map_err(|e| e.to_string())?;
            if !r.passed {
                return Err(format!("{}: {}", r.subject, r.detail));
            }
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < EXACT_SUITE_BUDGET,
        format!("{checks} family/length pairs, n <= {EXACT_SUITE_MAX_N}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn repeated_index_events() -> Outcome {
    let mut checks = 0;
    for model in standard_models() {
        for n in 1..=EVENT_MAX_N {
            for k in 1..=EVENT_MAX_K {
                let seed = (n * 100 + k) as u64;
                let r = check_repeated_indices(&model, n, k, EVENT_TUPLES, seed).map_err(|e| e.to_string())?;
                if !r.passed {
                    return Err(format!("{}: {}", r.subject, r.detail));
                }
                checks += EVENT_TUPLES;
            }
        }
    }
    Ok(format!("{checks} tuples, n <= {EVENT_MAX_N}, k <= {EVENT_MAX_K}"))
}

fn moment_expansion() -> Outcome {
    let mut checks = 0;
    for model in standard_models() {
        for n in 1..=EXACT_SUITE_MAX_N.min(model.max_len()) {
            for k in 1..=EXPANSION_MAX_K {
                let r = check_moment_expansion(&model, n, k).map_err(|e| e.to_string())?;
                if !r.passed {
                    return Err(format!("{}: {}", r.subject, r.detail));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (family, n, k) cases equal exactly"))
}

fn collision_bound() -> Outcome {
    for k in COLLISION_K.0..=COLLISION_K.1 {
        for n in COLLISION_N.0..=COLLISION_N.1 {
            let r = check_collision(n, k).map_err(|e| e.to_string())?;
            if !r.passed {
                return Err(format!("{}: {}", r.subject, r.detail));
            }
        }
    }
    Ok(format!(
        "k in {}..={}, n in {}..={} against enumeration",
        COLLISION_K.0, COLLISION_K.1, COLLISION_N.0, COLLISION_N.1
    ))
}

fn definetti_convergence() -> Outcome {
    let uniform = MomentVector::new((1..=4).map(|k| ratio(1, k + 1)).collect()).map_err(|e| e.to_string())?;
    let polya = FamilySpec::polya(ratio(1, 1), ratio(1, 1)).map_err(|e| e.to_string())?;
    let mut gaps = Vec::new();
    for &n in &CONVERGENCE_N {
        let mu = law_of_sn(&generate(&polya, n).map_err(|e| e.to_string())?);
        let gap = moment_gap(&measure_moments(&mu, 4), &uniform).map_err(|e| e.to_string())?;
        if gap > ratio(1, 2 * n as i64) {
            return Err(format!("N={n}: gap {gap} above 1/{}", 2 * n));
        }
        gaps.push(gap);
    }
    if gaps.windows(2).any(|w| w[1] > w[0]) {
        return Err(format!("gaps not decreasing: {gaps:?}"));
    }
    let mut worst_excess = 0.0_f64;
    for &p in &[0.1, 0.3, 0.5, 0.85] {
        let iid = FamilySpec::iid(p).map_err(|e| e.to_string())?;
        for &n in &CONVERGENCE_N {
            let second = sn_moment(&generate(&iid, n).map_err(|e| e.to_string())?, 2).map_err(|e| e.to_string())?;
            let excess = second - p * p;
            worst_excess = worst_excess.max((excess - p * (1.0 - p) / n as f64).abs());
        }
    }
    let shown: Vec<String> = gaps.iter().map(|g| format!("{:.3e}", Scalar::to_f64(g))).collect();
    ensure(
        worst_excess <= IID_EXCESS_TOL,
        format!("polya gaps {} ; iid excess error {worst_excess:.1e}", shown.join(", ")),
    )
}

fn recovery() -> Outcome {
    let start = Instant::now();
    let uniform = MomentVector::new((1..=6).map(|k| 1.0 / (k as f64 + 1.0)).collect()).map_err(|e| e.to_string())?;
    let r = recover_measure(&uniform, RECOVERY_GRID, UNIFORM_MOMENT_TOL).map_err(|e| e.to_string())?;
    let fitted = moment_gap(&r.measure.moments(6), &uniform).map_err(|e| e.to_string())?;
    let cdf_err = (0..=RECOVERY_GRID)
        .map(|j| {
            let x = j as f64 / RECOVERY_GRID as f64;
            (r.measure.cdf(&x) - x).abs()
        })
        .fold(0.0, f64::max);
    if fitted > UNIFORM_MOMENT_TOL || cdf_err > UNIFORM_CDF_TOL {
        return Err(format!("uniform: moment gap {fitted:.2e}, cdf error {cdf_err:.3}"));
    }
    let half = MomentVector::new(vec![0.5, 0.25, 0.125, 0.0625]).map_err(|e| e.to_string())?;
    let d = recover_measure(&half, POINT_MASS_GRID, POINT_MASS_TOL).map_err(|e| e.to_string())?;
    let mass = d.measure.mass_near(&0.5, &POINT_MASS_RADIUS);
    if mass < POINT_MASS_MIN_MASS {
        return Err(format!("point mass: only {mass:.4} within {POINT_MASS_RADIUS} of 1/2"));
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < RECOVERY_BUDGET,
        format!(
            "uniform moment gap {fitted:.2e}, cdf error {cdf_err:.4}; mass {mass:.4} near 1/2; {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn random_rational_measure(rng: &mut ChaCha8Rng, atoms: usize, denom: i64) -> MixingMeasure<Rational> {
    let raw: Vec<i64> = (0..atoms).map(|_| rng.random_range(1..=20)).collect();
    let total: i64 = raw.iter().sum();
    MixingMeasure::new(raw.iter().map(|&w| (ratio(rng.random_range(0..=denom), denom), ratio(w, total))))
        .expect("valid random measure")
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let measures = [
        ("delta(1/2)", MixingMeasure::point_mass(ratio(1, 2)).unwrap()),
        ("{0,1}", MixingMeasure::new([(ratio(0, 1), ratio(2, 5)), (ratio(1, 1), ratio(3, 5))]).unwrap()),
        ("5-atom", random_rational_measure(&mut rng, 5, 97)),
    ];
    let zero = Rational::zero();
    for (name, mu) in &measures {
        let law = count_law_of_mixture(mu, ROUND_TRIP_K).map_err(|e| e.to_string())?;
        let report = verify_representation(&law, mu, ROUND_TRIP_K, &zero).map_err(|e| e.to_string())?;
        if !report.passed || !report.max_gap().is_zero() {
            return Err(format!("{name}: max gap {}", report.max_gap()));
        }
    }
    let polya =
        generate(&FamilySpec::polya(ratio(1, 1), ratio(1, 1)).unwrap(), ROUND_TRIP_K).map_err(|e| e.to_string())?;
    let control = verify_representation(&polya, &measures[0].1, ROUND_TRIP_K, &zero).map_err(|e| e.to_string())?;
    let gap = &control.per_count_gap[1];
    ensure(
        !control.passed && *gap == ratio(1, 6),
        format!("3 measures with zero gaps; control gap at k=2 is {gap} (m={})", control.per_count_argmax[1]),
    )
}

fn monotonicity_screen() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let zero = Rational::zero();
    for i in 0..SCREEN_MEASURES {
        let atoms = rng.random_range(1..=6);
        let mu = random_rational_measure(&mut rng, atoms, 50);
        let check =
            check_complete_monotonicity(&measure_moments(&mu, SCREEN_MOMENTS), &zero).map_err(|e| e.to_string())?;
        if !check.holds {
            return Err(format!("measure {i} rejected: {:?}", check));
        }
    }
    let bad = MomentVector::new(vec![ratio(9, 10), ratio(1, 5)]).unwrap();
    let check = check_complete_monotonicity(&bad, &zero).map_err(|e| e.to_string())?;
    ensure(
        !check.holds && check.order == 2 && check.value == ratio(-3, 5),
        format!(
            "{SCREEN_MEASURES} random measures accepted; [9/10, 1/5] rejected at order {} with {}",
            check.order, check.value
        ),
    )
}

fn monte_carlo() -> Outcome {
    let explicit = exchangeable::CountDistribution::new(5, vec![0.1, 0.2, 0.05, 0.05, 0.3, 0.3]).unwrap();
    let families = [
        FamilySpec::iid(0.3).unwrap(),
        FamilySpec::polya(1.0, 1.0).unwrap(),
        FamilySpec::polya(0.5, 2.0).unwrap(),
        FamilySpec::Explicit(explicit),
        FamilySpec::Mixture(MixingMeasure::new([(0.2, 0.5), (0.9, 0.5)]).unwrap()),
    ];
    let mut worst = 0.0_f64;
    for family in &families {
        for n in 1..=MC_MAX_N {
            let exact = generate(family, n).map_err(|e| e.to_string())?;
            let sampled = sample_counts(family, n, MC_TRIALS, MC_SEED).map_err(|e| e.to_string())?;
            let tv = 0.5 * exact.weights().iter().zip(sampled.weights()).map(|(a, b)| (a - b).abs()).sum::<f64>();
            if tv > MC_TV_TOL {
                return Err(format!("{} n={n}: total variation {tv:.4}", family.kind()));
            }
            worst = worst.max(tv);
        }
    }
    Ok(format!("worst total variation {worst:.4} at {MC_TRIALS} trials, seed {MC_SEED}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exact point probabilities", exact_point_probabilities),
        ("repeated-index events", repeated_index_events),
        ("moment expansion", moment_expansion),
        ("collision bound", collision_bound),
        ("convergence of the empirical mean", definetti_convergence),
        ("moment recovery", recovery),
        ("representation round trip", round_trip),
        ("monotonicity screen", monotonicity_screen),
        ("monte carlo", monte_carlo),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
