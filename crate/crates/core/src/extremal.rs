//! Isoperimetric bounds `2A/P ≤ λ ≤ √(A/π)`, extremality and covariance.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{self, DomainSpec, GeometryError};
use crate::minimax::{analytic_content, ContentOptions, MinimaxResult, SolverError};

/// Default relative band for calling a domain extremal.
pub const DEFAULT_EXTREMAL_TOLERANCE: f64 = 5e-3;

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum ExtremalError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("refusing to classify an unconverged solve (λ̂ = {lambda_hat}, {iterations} iterations)")]
    Unconverged { lambda_hat: f64, iterations: usize },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// `2·Area/Perimeter`
    pub lower: f64,
    /// `√(Area/π)`
    pub upper: f64,
    pub lambda_hat: f64,
    /// `lambda_hat − lower`
    pub gap: f64,
    pub is_extremal: bool,
    /// Absolute band: `relative_tolerance · lower`.
    pub tolerance: f64,
    pub relative_tolerance: f64,
}

/// `(2A/P, √(A/π))`.
pub fn bounds(domain: &DomainSpec) -> Result<(f64, f64), GeometryError> {
    let area = geometry::area(domain)?;
    let perimeter = geometry::perimeter(domain)?;
    Ok((2.0 * area / perimeter, (area / PI).sqrt()))
}

/// Compares a converged `λ̂` with the lower bound. The domain is extremal
/// when `λ̂ − 2A/P ≤ relative_tolerance · 2A/P`.
pub fn classify(
    domain: &DomainSpec,
    result: &MinimaxResult,
    relative_tolerance: f64,
) -> Result<BoundsReport, ExtremalError> {
    if !(relative_tolerance > 0.0) {
        return Err(ExtremalError::InvalidTolerance(relative_tolerance));
    }
    if !result.converged {
        return Err(ExtremalError::Unconverged {
            lambda_hat: result.lambda_hat,
            iterations: result.iterations,
        });
    }
    let (lower, upper) = bounds(domain)?;
    let gap = result.lambda_hat - lower;
    let tolerance = relative_tolerance * lower;
    Ok(BoundsReport {
        lower,
        upper,
        lambda_hat: result.lambda_hat,
        gap,
        is_extremal: gap <= tolerance,
        tolerance,
        relative_tolerance,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub lambda: f64,
    pub lambda_transformed: f64,
    /// `λ̂(aΩ + b)/λ̂(Ω)`, expected to equal `|a|`.
    pub lambda_ratio: f64,
    pub expected_ratio: f64,
    /// `sup |φ̂_T(z) − (ā·φ̂((z − b)/a) + b̄)|` over the transformed
    /// verification grid.
    pub coeff_transform_error: f64,
    /// Both solves converged.
    pub converged: bool,
}

/// Solves on `Ω` and on `aΩ + b` and compares. Under `z = aw + b`,
/// `z̄ − ψ(z) = ā(w̄ − φ(w))` when `ψ(z) = ā·φ((z − b)/a) + b̄`, so the
/// content scales by `|a|` and the minimizers correspond through that law.
pub fn covariance_check(
    domain: &DomainSpec,
    a: Complex64,
    b: Complex64,
    options: &ContentOptions,
) -> Result<CovarianceReport, ExtremalError> {
    let image = geometry::transform(domain, a, b)?;
    let (original, transformed) = std::thread::scope(|s| {
        let first = s.spawn(|| analytic_content(domain, options));
        let second = analytic_content(&image, options);
        (first.join().expect("solver thread panicked"), second)
    });
    let (original, transformed) = (original?, transformed?);
    let coeff_transform_error = transformed
        .verification_points
        .iter()
        .map(|z| {
            let predicted = a.conj() * original.approximant((z - b) / a) + b.conj();
            (transformed.approximant(*z) - predicted).norm()
        })
        .fold(0.0, f64::max);
    Ok(CovarianceReport {
        lambda: original.lambda_hat,
        lambda_transformed: transformed.lambda_hat,
        lambda_ratio: transformed.lambda_hat / original.lambda_hat,
        expected_ratio: a.norm(),
        coeff_transform_error,
        converged: original.converged && transformed.converged,
    })
}
