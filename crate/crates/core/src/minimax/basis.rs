use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::geometry::{BoundarySampling, DomainSpec};

/// Largest polynomial or pole degree accepted by [`build_basis`].
pub const MAX_DEGREE: usize = 64;

/// The scaled Laurent monomial `((z − c)/ρ)^k`.
///
/// Non-negative `k` is the polynomial part; negative `k` is a pole at `c`,
/// which must sit in a hole. The scale makes the element unimodular at
/// distance `ρ` from `c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisElement {
    pub center: Complex64,
    pub exponent: i32,
    pub scale: f64,
}

impl BasisElement {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        ((z - self.center) / self.scale).powi(self.exponent)
    }

    /// Converts a coefficient of this element into the coefficient of the
    /// raw power `(z − c)^k`.
    pub fn unscaled(&self, coefficient: Complex64) -> Complex64 {
        coefficient * self.scale.powi(-self.exponent)
    }
}

/// Polynomial elements of degree `0..=poly_degree` about the outer centroid,
/// then for each hole the poles of order `1..=pole_degree` about its
/// centroid. Simply connected domains get no pole elements.
pub fn build_basis(
    domain: &DomainSpec,
    poly_degree: usize,
    pole_degree: usize,
) -> Result<Vec<BasisElement>, SolverError> {
    if poly_degree > MAX_DEGREE || pole_degree > MAX_DEGREE {
        return Err(SolverError::DegreeTooLarge {
            requested: poly_degree.max(pole_degree),
            cap: MAX_DEGREE,
        });
    }
    domain.validate()?;
    let center = domain.outer.centroid();
    let scale = domain.outer.max_distance_from(center);
    let mut basis: Vec<BasisElement> = (0..=poly_degree as i32)
        .map(|exponent| BasisElement {
            center,
            exponent,
            scale,
        })
        .collect();
    for hole in &domain.holes {
        let center = hole.centroid();
        let scale = hole.mean_distance_from(center);
        basis.extend((1..=pole_degree as i32).map(|k| BasisElement {
            center,
            exponent: -k,
            scale,
        }));
    }
    Ok(basis)
}

/// Matrix of basis values: row `i` is sample `z_i`, column `j` element `j`.
pub fn design_matrix(basis: &[BasisElement], samples: &BoundarySampling) -> DMatrix<Complex64> {
    design_matrix_at(basis, &samples.points)
}

pub(crate) fn design_matrix_at(basis: &[BasisElement], points: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(points.len(), basis.len(), |i, j| basis[j].eval(points[i]))
}

/// `φ(z) = Σ c_j B_j(z)`.
pub(crate) fn evaluate(basis: &[BasisElement], coefficients: &[Complex64], z: Complex64) -> Complex64 {
    basis
        .iter()
        .zip(coefficients)
        .map(|(b, c)| c * b.eval(z))
        .sum()
}
