//! Projected gradient descent for least squares over the probability simplex.

/// Dense row-major `rows x cols` matrix.
#[derive(Debug, Clone)]
pub(crate) struct Design {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Design {
    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.cols..(k + 1) * self.cols]
    }

    fn apply(&self, w: &[f64], out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.row(k).iter().zip(w).map(|(a, x)| a * x).sum();
        }
    }

    fn apply_transpose(&self, r: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (k, &rk) in r.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(k)) {
                *o += a * rk;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct PgdOutcome {
    pub weights: Vec<f64>,
    pub iterations: usize,
}

/// Largest eigenvalue of `A^T A` by power iteration.
pub(crate) fn gram_spectral_bound(a: &Design, iterations: usize) -> f64 {
    let mut v = vec![1.0 / (a.cols as f64).sqrt(); a.cols];
    let mut av = vec![0.0; a.rows];
    let mut atav = vec![0.0; a.cols];
    let mut lambda = 0.0;
    for _ in 0..iterations {
        a.apply(&v, &mut av);
        a.apply_transpose(&av, &mut atav);
        let norm = atav.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = v.iter().zip(&atav).map(|(x, y)| x * y).sum();
        v.iter_mut().zip(&atav).for_each(|(x, y)| *x = y / norm);
    }
    lambda
}

/// Euclidean projection onto `{w >= 0, sum w = 1}` (sort and threshold).
pub(crate) fn project_to_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite iterate"));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (j as f64 + 1.0);
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
}

fn objective(a: &Design, w: &[f64], target: &[f64], residual: &mut [f64]) -> f64 {
    a.apply(w, residual);
    residual
        .iter_mut()
        .zip(target)
        .map(|(r, t)| {
            *r -= t;
            *r * *r
        })
        .sum()
}

/// Minimizes `||A w - target||^2` over the simplex with the fixed step `1/L`,
/// `L = 2 lambda_max(A^T A)`, starting from the uniform vector.
///
/// Steps are taken from a Nesterov extrapolation of the last two iterates;
/// the momentum is reset whenever the objective goes up. Stops after
/// `max_iter` steps or once an iteration improves the objective by less than
/// `min_improvement`.
pub(crate) fn minimize(a: &Design, target: &[f64], max_iter: usize, min_improvement: f64) -> PgdOutcome {
    // Small margin so that an estimate from below still yields a descent step.
    let lipschitz = 2.0 * gram_spectral_bound(a, 200) * 1.01;
    let mut w = vec![1.0 / a.cols as f64; a.cols];
    let mut residual = vec![0.0; a.rows];
    let mut grad = vec![0.0; a.cols];
    let mut f = objective(a, &w, target, &mut residual);
    if lipschitz == 0.0 {
        return PgdOutcome { weights: w, iterations: 0 };
    }
    let step = 1.0 / lipschitz;
    let mut y = w.clone();
    let mut next = vec![0.0; a.cols];
    let mut t = 1.0_f64;
    let mut iterations = 0;
    while iterations < max_iter && f > 0.0 {
        iterations += 1;
        objective(a, &y, target, &mut residual);
        a.apply_transpose(&residual, &mut grad);
        next.iter_mut().zip(&y).zip(&grad).for_each(|((x, yj), g)| *x = yj - step * 2.0 * g);
        project_to_simplex(&mut next);
        let f_next = objective(a, &next, target, &mut residual);
        if f_next > f {
            // Restart from the last accepted iterate without momentum.
            t = 1.0;
            y.copy_from_slice(&w);
            continue;
        }
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let beta = (t - 1.0) / t_next;
        for ((yj, &nj), &wj) in y.iter_mut().zip(&next).zip(&w) {
            *yj = nj + beta * (nj - wj);
        }
        t = t_next;
        let improvement = f - f_next;
        std::mem::swap(&mut w, &mut next);
        f = f_next;
        if improvement < min_improvement {
            break;
        }
    }
    PgdOutcome { weights: w, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_lands_on_simplex() {
        let mut v = vec![0.9, 0.8, -0.3, 0.1];
        project_to_simplex(&mut v);
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(v.iter().all(|&x| x >= 0.0));
        assert!((v[0] - 0.55).abs() < 1e-12 && (v[1] - 0.45).abs() < 1e-12);
        let mut inside = vec![0.2, 0.3, 0.5];
        project_to_simplex(&mut inside);
        assert_eq!(inside, vec![0.2, 0.3, 0.5]);
    }

    #[test]
    fn power_iteration_on_diagonal() {
        let a = Design { rows: 2, cols: 2, data: vec![3.0, 0.0, 0.0, 1.0] };
        assert!((gram_spectral_bound(&a, 100) - 9.0).abs() < 1e-9);
    }
}
