//! Discrete complex Chebyshev approximation of `z̄` on the boundary.
//!
//! `|z̄ − φ(z)|²` is subharmonic inside the domain, so the supremum over the
//! closed domain is attained on the boundary and the problem reduces to
//! boundary samples. [`lawson_minimax`] solves it by iteratively reweighted
//! least squares; [`lp_crosscheck`] solves a polygonal linearization of the
//! same problem with a dense simplex method as an independent check.

mod barrier;
mod basis;
mod driver;
mod lawson;
mod lp;
mod simplex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::GeometryError;

pub use basis::{build_basis, design_matrix, BasisElement, MAX_DEGREE};
pub use driver::{analytic_content, residual_field, ContentOptions, RefinementStep};
pub use lawson::{lawson_minimax, POLISH_AFTER};
pub use lp::{lp_crosscheck, LpCrosscheck};

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("degree {requested} exceeds the cap of {cap}")]
    DegreeTooLarge { requested: usize, cap: usize },
    #[error("need more samples ({samples}) than basis elements ({basis})")]
    TooFewSamples { samples: usize, basis: usize },
    #[error("design matrix is rank deficient (condition number {condition:.3e}); lower the degree")]
    IllConditionedBasis { condition: f64 },
    #[error("LP oracle failed: {0}")]
    OracleFailure(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
}

/// Discrete minimax solver controls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinimaxOptions {
    pub max_iterations: usize,
    /// Stop once `(max|e| − lower_bound)/max|e|` drops to this.
    pub tolerance: f64,
    pub weight_floor: f64,
    /// Finish slow Lawson runs with a barrier Newton method.
    pub polish: bool,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        MinimaxOptions {
            max_iterations: 4000,
            tolerance: 1e-7,
            weight_floor: 1e-14,
            polish: true,
        }
    }
}

/// Solution of the discrete minimax problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimaxResult {
    pub basis: Vec<BasisElement>,
    pub coefficients: Vec<Complex64>,
    /// `max |residual|` over the verification grid.
    pub lambda_hat: f64,
    /// `max |residual|` over the samples the solver iterated on.
    pub discrete_max: f64,
    /// Best weighted least-squares value seen; a lower bound for the
    /// discrete minimax error.
    pub lower_bound: f64,
    /// `z̄ − φ(z)` on the verification grid.
    pub residuals: Vec<Complex64>,
    pub verification_points: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
    /// `min/max |residual|` over samples with `|residual| ≥ 0.95·max`.
    pub equioscillation_ratio: f64,
    /// Ratio of extreme singular values of the unweighted design matrix.
    pub condition_number: f64,
    /// Refinement history, filled in by [`analytic_content`].
    pub ladder: Vec<RefinementStep>,
}

impl MinimaxResult {
    /// `φ(z)` for the computed coefficients.
    pub fn approximant(&self, z: Complex64) -> Complex64 {
        basis::evaluate(&self.basis, &self.coefficients, z)
    }

    /// Coefficients of the raw powers `(z − c_j)^{k_j}`.
    pub fn unscaled_coefficients(&self) -> Vec<Complex64> {
        self.basis
            .iter()
            .zip(&self.coefficients)
            .map(|(b, c)| b.unscaled(*c))
            .collect()
    }
}

pub(crate) fn equioscillation_ratio(residuals: &[Complex64]) -> f64 {
    let max = residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return 1.0;
    }
    let min_active = residuals
        .iter()
        .map(|r| r.norm())
        .filter(|&m| m >= 0.95 * max)
        .fold(f64::INFINITY, f64::min);
    min_active / max
}
