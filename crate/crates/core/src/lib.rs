//! Analytic content of planar domains.
//!
//! The analytic content `λ(K)` of a compact set `K` is the uniform distance
//! from `z̄` to the rational functions with poles off `K`. This crate
//! computes it numerically for domains bounded by circles, ellipses,
//! polygons and Fourier curves, compares it with the isoperimetric bounds
//! `2A/P ≤ λ ≤ √(A/π)`, and checks the closed-form structure of the
//! extremal annuli (the ODE `v″ + (φ′/λ²)v = 0`, its power-function
//! solutions and their quantization).
//!
//! - [`geometry`]: domains, area, perimeter, boundary sampling, affine maps.
//! - [`minimax`]: Lawson iteration on a Laurent basis, plus an LP oracle.
//! - [`extremal`]: bounds, extremality classification, covariance checks.
//! - [`connection`]: chiral fields, ODE residuals and integration, quantized annuli.
//! - [`cli`]: the JSON/CSV batch front end behind the `analytic-content` binary.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod connection;
pub mod extremal;
pub mod geometry;
pub mod minimax;
pub mod quadrature;

pub use num_complex::Complex64;

pub use connection::{
    annulus_connection, boundary_limit_check, boundary_modulus_check, derivative_identity_check,
    enumerate_quantized, monodromy_defect, ode_integrate, ode_residual, ChiralField,
    ConnectionError, FieldKind, ProjectiveConnection, QuantizedAnnulus,
};
pub use extremal::{bounds, classify, covariance_check, BoundsReport, CovarianceReport, ExtremalError};
pub use geometry::{
    area, connectivity, perimeter, sample_boundary, transform, BoundarySampling, CurveSpec,
    DomainSpec, FourierTerm, GeometryError,
};
pub use minimax::{
    analytic_content, build_basis, design_matrix, lawson_minimax, lp_crosscheck, residual_field,
    BasisElement, ContentOptions, LpCrosscheck, MinimaxOptions, MinimaxResult, SolverError,
};

/// Shorthand for `Complex64::new(re, im)`.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
