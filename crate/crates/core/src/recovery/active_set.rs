//! Exact active-set solver for least squares over the probability simplex.
//!
//! A Lawson-Hanson style method: keep a passive set of atoms whose weights
//! are free, solve the equality-constrained subproblem on it exactly, and move
//! toward that solution until some weight hits zero. Runs in rational
//! arithmetic, so it terminates with an exactly optimal basic solution.

use num_traits::{Signed, Zero};

use crate::scalar::Rational;

#[derive(Debug, Clone)]
pub(crate) struct ActiveSetOutcome {
    pub weights: Vec<Rational>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub objective: Rational,
    pub iterations: usize,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residual(columns: &[Vec<Rational>], w: &[Rational], target: &[Rational]) -> Vec<Rational> {
    let mut r: Vec<Rational> = target.iter().map(|t| -t.clone()).collect();
    for (col, wj) in columns.iter().zip(w) {
        if wj.is_zero() {
            continue;
        }
        for (ri, a) in r.iter_mut().zip(col) {
            *ri += a * wj;
        }
    }
    r
}

/// Solves `min ||A_P z - b||^2` subject to `sum z = 1` through its KKT system.
/// `None` if the system is singular.
fn solve_subproblem(columns: &[Vec<Rational>], passive: &[usize], target: &[Rational]) -> Option<Vec<Rational>> {
    let p = passive.len();
    let size = p + 1;
    let mut m = vec![vec![Rational::zero(); size + 1]; size];
    for (i, &ci) in passive.iter().enumerate() {
        for (l, &cl) in passive.iter().enumerate().skip(i) {
            let g = dot(&columns[ci], &columns[cl]);
            m[i][l] = g.clone();
            m[l][i] = g;
        }
        m[i][p] = Rational::from_integer(1.into());
        m[p][i] = Rational::from_integer(1.into());
        m[i][size] = dot(&columns[ci], target);
    }
    m[p][size] = Rational::from_integer(1.into());
    let solution = gaussian_solve(m)?;
    Some(solution[..p].to_vec())
}

/// Gauss-Jordan elimination on an augmented matrix.
fn gaussian_solve(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let size = m.len();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for entry in m[col][col..].iter_mut() {
            *entry *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= &factor * pv;
            }
        }
    }
    Some(m.into_iter().map(|row| row[size].clone()).collect())
}

pub(crate) fn minimize(columns: &[Vec<Rational>], target: &[Rational], max_iter: usize) -> ActiveSetOutcome {
    let n = columns.len();
    let mut w = vec![Rational::zero(); n];
    // Start at the best single atom.
    let start = (0..n)
        .min_by(|&a, &b| {
            let da = residual(&columns[a..=a], &[Rational::from_integer(1.into())], target);
            let db = residual(&columns[b..=b], &[Rational::from_integer(1.into())], target);
            dot(&da, &da).cmp(&dot(&db, &db))
        })
        .expect("at least one atom");
    w[start] = Rational::from_integer(1.into());
    let mut passive = vec![start];
    let mut iterations = 0;

    'outer: while iterations < max_iter {
        iterations += 1;
        let r = residual(columns, &w, target);
        let grad: Vec<Rational> = columns.iter().map(|c| dot(c, &r)).collect();
        let level = grad[passive[0]].clone();
        let entering = (0..n)
            .filter(|j| !passive.contains(j))
            .map(|j| (j, &grad[j] - &level))
            .filter(|(_, d)| d.is_negative())
            .min_by(|a, b| a.1.cmp(&b.1));
        let Some((entering, _)) = entering else {
            break;
        };
        passive.push(entering);
        passive.sort_unstable();

        loop {
            let Some(z) = solve_subproblem(columns, &passive, target) else {
                break 'outer;
            };
            if z.iter().all(Signed::is_positive) {
                for (&j, zj) in passive.iter().zip(z) {
                    w[j] = zj;
                }
                break;
            }
            // Step toward z until the first weight reaches zero.
            let (alpha, blocking) = passive
                .iter()
                .zip(&z)
                .filter(|(_, zj)| !zj.is_positive())
                .map(|(&j, zj)| (&w[j] / (&w[j] - zj), j))
                .min_by(|a, b| a.0.cmp(&b.0))
                .expect("some weight is nonpositive");
            for (&j, zj) in passive.iter().zip(&z) {
                w[j] = &w[j] + &alpha * (zj - &w[j]);
            }
            w[blocking] = Rational::zero();
            passive.retain(|&j| w[j].is_positive());
            if passive.is_empty() {
                break 'outer;
            }
        }
    }

    let r = residual(columns, &w, target);
    ActiveSetOutcome { objective: dot(&r, &r), weights: w, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn solves_small_linear_system() {
        // 2x + y = 5, x - y = 1
        let m = vec![vec![ratio(2, 1), ratio(1, 1), ratio(5, 1)], vec![ratio(1, 1), ratio(-1, 1), ratio(1, 1)]];
        assert_eq!(gaussian_solve(m).unwrap(), vec![ratio(2, 1), ratio(1, 1)]);
        let singular = vec![vec![ratio(1, 1), ratio(1, 1), ratio(0, 1)], vec![ratio(2, 1), ratio(2, 1), ratio(0, 1)]];
        assert!(gaussian_solve(singular).is_none());
    }

    #[test]
    fn recovers_two_point_measure_exactly() {
        // Nodes 0, 1/4, 1/2, 3/4, 1; target is the first two moments of
        // (delta_{1/4} + delta_{3/4}) / 2.
        let nodes: Vec<Rational> = (0..=4).map(|j| ratio(j, 4)).collect();
        let columns: Vec<Vec<Rational>> = nodes.iter().map(|p| vec![p.clone(), p * p]).collect();
        let target = vec![ratio(1, 2), ratio(5, 16)];
        let out = minimize(&columns, &target, 100);
        assert!(out.objective.is_zero());
        let total: Rational = out.weights.iter().sum();
        assert_eq!(total, ratio(1, 1));
    }

    #[test]
    fn projects_infeasible_target() {
        // Mean 2 is outside the hull of nodes in [0, 1]; best is delta_1.
        let columns = vec![vec![ratio(0, 1)], vec![ratio(1, 2)], vec![ratio(1, 1)]];
        let out = minimize(&columns, &[ratio(2, 1)], 100);
        assert_eq!(out.weights, vec![ratio(0, 1), ratio(0, 1), ratio(1, 1)]);
        assert_eq!(out.objective, ratio(1, 1));
    }
}
