//! Log-barrier Newton method for the discrete problem
//! `min t  s.t.  |b_i − (A c)_i| ≤ t`, written over real unknowns
//! `x = (Re c, Im c, t)` with the second-order-cone barrier
//! `−log(t² − |e_i|²)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Outer barrier growth factor.
const GROWTH: f64 = 8.0;
/// Inner stopping threshold on the squared Newton decrement.
const DECREMENT: f64 = 1e-8;
/// Newton steps allowed per barrier stage.
const STAGE_STEPS: usize = 40;

struct Problem<'a> {
    a: &'a DMatrix<Complex64>,
    b: &'a DVector<Complex64>,
    n: usize,
}

impl Problem<'_> {
    fn coefficients(&self, x: &DVector<f64>) -> DVector<Complex64> {
        DVector::from_fn(self.n, |j, _| Complex64::new(x[j], x[self.n + j]))
    }

    fn residual(&self, x: &DVector<f64>) -> DVector<Complex64> {
        self.b - self.a * self.coefficients(x)
    }

    /// `t² − |e_i|²`, or `None` outside the cone.
    fn slacks(&self, x: &DVector<f64>) -> Option<(DVector<Complex64>, Vec<f64>)> {
        let t = x[2 * self.n];
        if t <= 0.0 {
            return None;
        }
        let e = self.residual(x);
        let s: Vec<f64> = e.iter().map(|e| t * t - e.norm_sqr()).collect();
        s.iter().all(|&s| s > 0.0).then_some((e, s))
    }

    fn objective(&self, x: &DVector<f64>, tau: f64) -> Option<f64> {
        let (_, s) = self.slacks(x)?;
        Some(tau * x[2 * self.n] - s.iter().map(|s| s.ln()).sum::<f64>())
    }
}

/// Runs barrier stages from `start` until `stop` accepts the iterate or the
/// step budget is spent. The first stage targets a duality gap of
/// `gap_hint` when that is positive. `stop` sees the coefficients and positive weights
/// proportional to the cone multipliers (summing to one). Returns the number
/// of Newton steps taken. Stages end once the central-path duality gap is
/// far below `tolerance` relative to `t`.
pub(crate) fn polish(
    a: &DMatrix<Complex64>,
    b: &DVector<Complex64>,
    start: &[Complex64],
    gap_hint: f64,
    max_steps: usize,
    tolerance: f64,
    mut stop: impl FnMut(&DVector<Complex64>, &[f64]) -> bool,
) -> usize {
    let n = a.ncols();
    let rows = a.nrows();
    let problem = Problem { a, b, n };
    let dim = 2 * n + 1;

    let mut x = DVector::zeros(dim);
    for (j, c) in start.iter().enumerate() {
        x[j] = c.re;
        x[n + j] = c.im;
    }
    let max = problem.residual(&x).iter().map(|e| e.norm()).fold(0.0, f64::max);
    x[2 * n] = 1.01 * max + f64::EPSILON;

    let Some((_, s)) = problem.slacks(&x) else {
        return 0;
    };
    let t = x[2 * n];
    let mut tau = s.iter().map(|s| 2.0 * t / s).sum::<f64>();
    if gap_hint > 0.0 {
        tau = tau.max(2.0 * rows as f64 / gap_hint);
    }
    let mut steps = 0;

    while steps < max_steps {
        // Newton iterations at fixed tau.
        let stage_end = (steps + STAGE_STEPS).min(max_steps);
        loop {
            if steps >= stage_end {
                break;
            }
            steps += 1;
            let Some((e, s)) = problem.slacks(&x) else {
                return steps;
            };
            let t = x[2 * n];
            let (gradient, hessian) = derivatives(a, &e, &s, t, tau);
            let direction = match hessian.clone().cholesky() {
                Some(ch) => ch.solve(&(-&gradient)),
                None => match hessian.lu().solve(&(-&gradient)) {
                    Some(d) => d,
                    None => return steps,
                },
            };
            let decrement = -gradient.dot(&direction);
            if !(decrement.is_finite()) {
                return steps;
            }
            if decrement / 2.0 <= DECREMENT {
                break;
            }
            let Some(f0) = problem.objective(&x, tau) else {
                return steps;
            };
            let mut alpha = 1.0;
            let mut accepted = false;
            while alpha > 1e-12 {
                let trial = &x + &direction * alpha;
                if let Some(f) = problem.objective(&trial, tau) {
                    if f <= f0 - 0.25 * alpha * decrement {
                        x = trial;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let Some((_, s)) = problem.slacks(&x) else {
            return steps;
        };
        let total: f64 = s.iter().map(|s| 1.0 / s).sum();
        let weights: Vec<f64> = s.iter().map(|s| 1.0 / (s * total)).collect();
        if stop(&problem.coefficients(&x), &weights) {
            break;
        }
        // Past this duality gap further stages cannot help `stop`.
        if 2.0 * rows as f64 / tau < 1e-3 * tolerance * x[2 * n] {
            break;
        }
        tau *= GROWTH;
    }
    steps
}

/// Gradient and Hessian of `τ t − Σ log(t² − |e_i|²)`.
fn derivatives(
    a: &DMatrix<Complex64>,
    e: &DVector<Complex64>,
    s: &[f64],
    t: f64,
    tau: f64,
) -> (DVector<f64>, DMatrix<f64>) {
    let (rows, n) = a.shape();
    let dim = 2 * n + 1;
    // Rows of `g/s` for the rank-one terms, and of `√(2/s)·∂u/∂x` for the
    // curvature of |e|².
    let mut rank_one = DMatrix::<f64>::zeros(rows, dim);
    let mut curvature = DMatrix::<f64>::zeros(2 * rows, 2 * n);
    let mut gradient = DVector::<f64>::zeros(dim);
    gradient[2 * n] = tau;
    for i in 0..rows {
        let si = s[i];
        let ec = e[i].conj();
        let root = (2.0 / si).sqrt();
        for j in 0..n {
            let aij = a[(i, j)];
            let ea = ec * aij;
            rank_one[(i, j)] = 2.0 * ea.re / si;
            rank_one[(i, n + j)] = -2.0 * ea.im / si;
            curvature[(2 * i, j)] = -aij.re * root;
            curvature[(2 * i, n + j)] = aij.im * root;
            curvature[(2 * i + 1, j)] = -aij.im * root;
            curvature[(2 * i + 1, n + j)] = -aij.re * root;
        }
        rank_one[(i, 2 * n)] = 2.0 * t / si;
        for k in 0..dim {
            gradient[k] -= rank_one[(i, k)];
        }
    }
    let mut hessian = rank_one.transpose() * &rank_one;
    let quad = curvature.transpose() * &curvature;
    let mut block = hessian.view_mut((0, 0), (2 * n, 2 * n));
    block += &quad;
    hessian[(2 * n, 2 * n)] -= s.iter().map(|s| 2.0 / s).sum::<f64>();
    (gradient, hessian)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_constant_for_three_points() {
        // min_c max |b_i − c| over the vertices of a triangle: the circumcenter.
        let a = DMatrix::from_element(3, 1, Complex64::new(1.0, 0.0));
        let b = DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.5, 0.75f64.sqrt()),
            Complex64::new(-0.5, -(0.75f64.sqrt())),
        ]);
        let start = [Complex64::new(0.3, 0.2)];
        let mut last = (Complex64::new(f64::NAN, 0.0), 0.0);
        let steps = polish(&a, &b, &start, 0.0, 200, 1e-10, |c, w| {
            last = (c[0], w.iter().sum());
            let max = (&b - &a * c).iter().map(|e| e.norm()).fold(0.0, f64::max);
            max - 1.0 < 1e-10
        });
        assert!(steps > 0 && steps < 200);
        assert!(last.0.norm() < 1e-8);
        assert!((last.1 - 1.0).abs() < 1e-12);
    }
}
