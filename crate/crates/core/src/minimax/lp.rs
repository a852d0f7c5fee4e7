use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::design_matrix;
use super::simplex;
use super::{BasisElement, SolverError};
use crate::geometry::BoundarySampling;

const MAX_PIVOTS: usize = 200_000;
/// Samples and directions per sample in the first working set.
const INITIAL_SAMPLES: usize = 128;
const INITIAL_DIRECTIONS: usize = 8;
const MAX_ROUNDS: usize = 64;
const PERTURBATION: f64 = 1e-10;
const GOLDEN: f64 = 0.618_033_988_749_895;
/// Relative slack before a constraint outside the working set counts as violated.
const CUT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpCrosscheck {
    /// Optimal circumradius `t` of the residual polygon.
    pub lambda_lp: f64,
    pub coefficients: Vec<Complex64>,
    /// `max_i |z̄_i − φ(z_i)|` for the LP coefficients; never above `lambda_lp`.
    pub discrete_max: f64,
    pub directions: usize,
    pub pivots: usize,
}

/// Polygonal linearization of the discrete minimax problem.
///
/// Minimizes `t` subject to every residual lying in the regular `M`-gon of
/// circumradius `t`:
///
/// ```text
/// Re(e^{−iθ_m}(z̄_i − Σ_j c_j B_j(z_i))) ≤ t·cos(π/M),   θ_m = 2πm/M.
/// ```
///
/// The polygon contains the disk of radius `t·cos(π/M)` and is contained in
/// the disk of radius `t`, so `λ ≤ t ≤ λ/cos(π/M)` for the discrete minimax
/// value `λ`. The LP is solved through its dual (one column per
/// sample/direction pair, `2n + 1` rows); the primal `t` and coefficients
/// are read off the simplex multipliers. Constraints are generated lazily: a
/// strided subset of samples and directions is solved first, then every
/// violated `(sample, direction)` pair is added and the previous basis
/// reused, until nothing is violated. The result is the optimum of the full
/// LP.
pub fn lp_crosscheck(
    samples: &BoundarySampling,
    basis: &[BasisElement],
    directions: usize,
) -> Result<LpCrosscheck, SolverError> {
    if directions < 8 {
        return Err(SolverError::InvalidOption(format!(
            "lp_crosscheck needs at least 8 directions, got {directions}"
        )));
    }
    if basis.is_empty() || samples.is_empty() {
        return Err(SolverError::TooFewSamples {
            samples: samples.len(),
            basis: basis.len(),
        });
    }
    let a = design_matrix(basis, samples);
    let nb = basis.len();
    let rows = 2 * nb + 1;
    let rotations: Vec<Complex64> = (0..directions)
        .map(|m| Complex64::from_polar(1.0, -TAU * m as f64 / directions as f64))
        .collect();
    let half_angle = (PI / directions as f64).cos();

    let n = samples.len();
    let stride = (n / INITIAL_SAMPLES.max(4 * nb)).max(1);
    let coarse = (directions / INITIAL_DIRECTIONS).max(1);
    let mut working: Vec<(usize, usize)> = (0..n)
        .step_by(stride)
        .flat_map(|i| (0..directions).step_by(coarse).map(move |m| (i, m)))
        .collect();
    let mut in_working = vec![false; n * directions];
    for &(i, m) in &working {
        in_working[i * directions + m] = true;
    }

    let mut pivots = 0;
    let mut basis: Option<Vec<simplex::Basic>> = None;
    for _ in 0..MAX_ROUNDS {
        let solution = solve_restricted(&a, samples, &working, &rotations, rows, basis.as_deref())?;
        pivots += solution.pivots;
        let inscribed = solution.duals[0];
        let coefficients: Vec<Complex64> = (0..nb)
            .map(|j| Complex64::new(solution.duals[1 + 2 * j], solution.duals[2 + 2 * j]))
            .collect();
        basis = Some(solution.basis);
        let residuals: Vec<Complex64> = (0..n)
            .map(|i| {
                let phi: Complex64 = (0..nb).map(|j| coefficients[j] * a[(i, j)]).sum();
                samples.points[i].conj() - phi
            })
            .collect();
        let limit = inscribed + CUT_TOLERANCE * inscribed.abs().max(f64::MIN_POSITIVE);
        let mut added = 0;
        for (i, e) in residuals.iter().enumerate() {
            for (m, rot) in rotations.iter().enumerate() {
                if !in_working[i * directions + m] && (rot * e).re > limit {
                    in_working[i * directions + m] = true;
                    working.push((i, m));
                    added += 1;
                }
            }
        }
        if added == 0 {
            let discrete_max = residuals.iter().map(|e| e.norm()).fold(0.0, f64::max);
            return Ok(LpCrosscheck {
                lambda_lp: inscribed / half_angle,
                coefficients,
                discrete_max,
                directions,
                pivots,
            });
        }
    }
    Err(SolverError::OracleFailure(format!(
        "constraint generation did not settle in {MAX_ROUNDS} rounds"
    )))
}

/// The LP over the `(sample, direction)` rows in `working` only, in the
/// order the working set was built, so an earlier basis stays valid.
fn solve_restricted(
    a: &DMatrix<Complex64>,
    samples: &BoundarySampling,
    working: &[(usize, usize)],
    rotations: &[Complex64],
    rows: usize,
    warm: Option<&[simplex::Basic]>,
) -> Result<simplex::LpSolution, SolverError> {
    let nb = a.ncols();
    // Column (i, m): [1; Re(u_ij); −Im(u_ij)] with u_ij = e^{−iθ_m}B_j(z_i).
    let mut g = DMatrix::<f64>::zeros(rows, working.len());
    let mut objective = Vec::with_capacity(working.len());
    for (col, &(i, m)) in working.iter().enumerate() {
        let rot = rotations[m];
        g[(0, col)] = 1.0;
        for j in 0..nb {
            let u = rot * a[(i, j)];
            g[(1 + 2 * j, col)] = u.re;
            g[(2 + 2 * j, col)] = -u.im;
        }
        objective.push((rot * samples.points[i].conj()).re);
    }
    // The true right-hand side is e₀, which leaves almost every basic variable
    // at zero. A tiny fixed perturbation breaks that degeneracy; the
    // multipliers stay exactly feasible for the constraints, and only the
    // optimality of `t` moves, by O(PERTURBATION).
    let rhs: Vec<f64> = (0..rows)
        .map(|i| if i == 0 { 1.0 } else { PERTURBATION * (1.0 + (i as f64 * GOLDEN).fract()) })
        .collect();
    let solution = simplex::maximize(&g, &rhs, &objective, warm, MAX_PIVOTS)
        .map_err(|e| SolverError::OracleFailure(e.to_string()))?;
    let inscribed = solution.duals[0];
    if !solution.objective.is_finite() || !inscribed.is_finite() || inscribed < 0.0 {
        return Err(SolverError::OracleFailure(format!("non-physical LP optimum {inscribed}")));
    }
    Ok(solution)
}
