use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::barrier;
use super::basis::{design_matrix, design_matrix_at};
use super::{equioscillation_ratio, BasisElement, MinimaxOptions, MinimaxResult, SolverError};
use crate::geometry::BoundarySampling;

/// Singular values below this fraction of the largest count as zero.
const RANK_TOLERANCE: f64 = 1e-13;
/// Relative ridge for singular weighted Gram matrices.
const RIDGE: f64 = 1e-13;
/// Lawson steps before handing an unconverged iterate to the barrier polish.
pub const POLISH_AFTER: usize = 50;

/// Lawson's algorithm for `min_c max_i |z̄_i − Σ_j c_j B_j(z_i)|`.
///
/// Each step solves the weighted least-squares problem (normal equations,
/// ridged when the weights have collapsed, SVD as a last resort), then multiplies every weight by its residual modulus,
/// renormalizes and floors. The weighted residual norm `√(Σ w|e|²/Σ w)` is a
/// lower bound on the discrete minimax value; iteration stops when it is
/// within `tolerance` (relative) of `max|e|`. Residuals and `lambda_hat`
/// are then reported on `verification`.
///
/// With `options.polish`, an iterate still short of the tolerance after
/// [`POLISH_AFTER`] steps is finished by a log-barrier Newton method on the
/// same discrete problem. Its cone multipliers supply the weights for the
/// same least-squares lower bound, and its Newton steps count as iterations.
///
/// A rank-deficient unweighted design matrix is an error. Hitting the
/// iteration cap is not: the best iterate comes back with
/// `converged = false`.
pub fn lawson_minimax(
    samples: &BoundarySampling,
    verification: &BoundarySampling,
    basis: &[BasisElement],
    options: &MinimaxOptions,
) -> Result<MinimaxResult, SolverError> {
    if basis.is_empty() || samples.len() <= basis.len() {
        return Err(SolverError::TooFewSamples {
            samples: samples.len(),
            basis: basis.len(),
        });
    }
    if !(options.tolerance > 0.0) || !(options.weight_floor >= 0.0) || options.max_iterations == 0 {
        return Err(SolverError::InvalidOption(format!("{options:?}")));
    }
    let a = design_matrix(basis, samples);
    let singular = a.clone().singular_values();
    let smax = singular.max();
    let smin = singular.min();
    let condition_number = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if smin <= RANK_TOLERANCE * smax {
        return Err(SolverError::IllConditionedBasis {
            condition: condition_number,
        });
    }

    let n = samples.len();
    let target: DVector<Complex64> = DVector::from_iterator(n, samples.points.iter().map(|z| z.conj()));
    let mut weights = vec![1.0 / n as f64; n];

    let mut best_coefficients = vec![Complex64::new(0.0, 0.0); basis.len()];
    let mut best_max = f64::INFINITY;
    let mut lower_bound = 0.0f64;
    let mut iterations = 0;
    let mut converged = false;

    let lawson_budget = if options.polish {
        options.max_iterations.min(POLISH_AFTER)
    } else {
        options.max_iterations
    };
    while iterations < lawson_budget {
        iterations += 1;
        let coefficients = weighted_solve(&a, &target, &weights)?;
        let residual = &target - &a * &coefficients;
        let moduli: Vec<f64> = residual.iter().map(|r| r.norm()).collect();
        let max = moduli.iter().cloned().fold(0.0, f64::max);
        let weight_sum: f64 = weights.iter().sum();
        let weighted: f64 = weights
            .iter()
            .zip(&moduli)
            .map(|(w, m)| w * m * m)
            .sum::<f64>()
            / weight_sum;
        lower_bound = lower_bound.max(weighted.sqrt());
        if max < best_max {
            best_max = max;
            best_coefficients = coefficients.iter().copied().collect();
        }
        if best_max == 0.0 || (best_max - lower_bound) / best_max <= options.tolerance {
            converged = true;
            break;
        }
        for (w, m) in weights.iter_mut().zip(&moduli) {
            *w *= m;
        }
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            break;
        }
        for w in &mut weights {
            *w = (*w / total).max(options.weight_floor);
        }
    }

    if !converged && options.polish && iterations < options.max_iterations {
        let budget = options.max_iterations - iterations;
        let start = best_coefficients.clone();
        let gap = best_max - lower_bound;
        let steps = barrier::polish(&a, &target, &start, gap, budget, options.tolerance, |coefficients, weights| {
            let max = (&target - &a * coefficients).iter().map(|e| e.norm()).fold(0.0, f64::max);
            if max < best_max {
                best_max = max;
                best_coefficients = coefficients.iter().copied().collect();
            }
            if let Ok(solution) = weighted_solve(&a, &target, weights) {
                let residual = &target - &a * &solution;
                let weighted: f64 = weights.iter().zip(residual.iter()).map(|(w, e)| w * e.norm_sqr()).sum::<f64>()
                    / weights.iter().sum::<f64>();
                lower_bound = lower_bound.max(weighted.sqrt());
            }
            (best_max - lower_bound) / best_max <= options.tolerance
        });
        iterations += steps;
        converged = best_max == 0.0 || (best_max - lower_bound) / best_max <= options.tolerance;
    }

    let verification_points = verification.points.clone();
    let phi = design_matrix_at(basis, &verification_points) * DVector::from_vec(best_coefficients.clone());
    let residuals: Vec<Complex64> = verification_points
        .iter()
        .zip(phi.iter())
        .map(|(z, p)| z.conj() - p)
        .collect();
    let lambda_hat = residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);

    Ok(MinimaxResult {
        basis: basis.to_vec(),
        coefficients: best_coefficients,
        lambda_hat,
        discrete_max: best_max,
        lower_bound: lower_bound.min(best_max),
        equioscillation_ratio: equioscillation_ratio(&residuals),
        residuals,
        verification_points,
        iterations,
        converged,
        condition_number,
        ladder: Vec::new(),
    })
}

fn weighted_solve(
    a: &DMatrix<Complex64>,
    target: &DVector<Complex64>,
    weights: &[f64],
) -> Result<DVector<Complex64>, SolverError> {
    if let Some(x) = normal_equations(a, target, weights) {
        return Ok(x);
    }
    let mut scaled = a.clone();
    let mut rhs = target.clone();
    for (i, w) in weights.iter().enumerate() {
        scaled.row_mut(i).scale_mut(w.sqrt());
        rhs[i] *= w.sqrt();
    }
    let svd = scaled.svd(true, true);
    let cutoff = RANK_TOLERANCE * svd.singular_values.max();
    svd.solve(&rhs, cutoff)
        .map_err(|e| SolverError::InvalidOption(format!("least-squares solve failed: {e}")))
}

/// Cholesky on `AᴴWA x = AᴴW t`. When the weights have collapsed onto fewer
/// samples than unknowns the Gram matrix is singular; a ridge of
/// `RIDGE·max diag` then picks out (approximately) the minimum-norm solution.
/// `None` if even that fails.
fn normal_equations(
    a: &DMatrix<Complex64>,
    target: &DVector<Complex64>,
    weights: &[f64],
) -> Option<DVector<Complex64>> {
    let (rows, n) = a.shape();
    let mut gram = DMatrix::<Complex64>::zeros(n, n);
    let mut rhs = DVector::<Complex64>::zeros(n);
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..rows {
        let w = weights[i];
        for (j, r) in row.iter_mut().enumerate() {
            *r = a[(i, j)];
        }
        for j in 0..n {
            let left = row[j].conj() * w;
            rhs[j] += left * target[i];
            for k in j..n {
                gram[(j, k)] += left * row[k];
            }
        }
    }
    for j in 0..n {
        for k in 0..j {
            gram[(j, k)] = gram[(k, j)].conj();
        }
    }
    if let Some(ch) = gram.clone().cholesky() {
        let diag = ch.l_dirty().diagonal().map(|d| d.re);
        if diag.min() > 1e-6 * diag.max() {
            return Some(ch.solve(&rhs));
        }
    }
    let scale = (0..n).map(|j| gram[(j, j)].re).fold(0.0, f64::max);
    for j in 0..n {
        gram[(j, j)] += RIDGE * scale;
    }
    gram.cholesky().map(|ch| ch.solve(&rhs))
}
