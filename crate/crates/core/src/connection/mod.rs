//! The projective connection `v″ + (φ′/λ²)v = 0` of an extremal annulus.
//!
//! For the annulus `R₂ < |z| < R₁` the best approximation of `z̄` is
//! `φ(z) = R₁R₂/z`, `λ = R₁ − R₂`, and the ODE has the power-function
//! solutions
//!
//! ```text
//! v₁(z) = (z/R₁)^{R₁/λ},   v₂(z) = (R₂/z)^{R₂/λ},
//! ```
//!
//! unimodular on `|z| = R₁` and `|z| = R₂` respectively. They are
//! single-valued only when both exponents are integers, which forces
//! `R₁ = nλ`, `R₂ = (n − 1)λ`.
//!
//! Non-integer powers use the principal branch, with the cut on the
//! negative real axis; evaluations within [`BRANCH_CUT_HALF_WIDTH`] of it
//! are rejected.

mod ode;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::BoundarySampling;

pub use ode::{ode_integrate, PathSample, DEFAULT_TOLERANCE};

/// Half-width (radians) of the excluded sector around the negative real axis.
pub const BRANCH_CUT_HALF_WIDTH: f64 = 0.05;

/// Distance from an integer below which a ratio counts as integral.
pub const INTEGER_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum ConnectionError {
    #[error("need R1 > R2 >= 0, got R1 = {r1}, R2 = {r2}")]
    InvalidRadii { r1: f64, r2: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point {index} ({z}) rejected: {reason}")]
    RejectedPoint {
        index: usize,
        z: Complex64,
        reason: String,
    },
    #[error("samples must lie on component {expected}, found component {found}")]
    WrongComponent { expected: usize, found: usize },
    #[error("annulus is not quantized: {0}")]
    NotQuantized(String),
    #[error("degenerate identity: {0}")]
    Degenerate(String),
    #[error("integration failed near {location}: {reason}")]
    IntegrationFailure { location: Complex64, reason: String },
}

/// One term `coefficient · z^exponent` of a Laurent expansion about 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentTerm {
    pub exponent: i32,
    pub coefficient: Complex64,
}

/// The operator `d²/dz² + φ′(z)/λ²` with `φ′` given as a Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveConnection {
    pub lambda: f64,
    pub phi_prime: Vec<LaurentTerm>,
    pub potential_label: String,
}

impl ProjectiveConnection {
    pub fn phi_prime(&self, z: Complex64) -> Complex64 {
        self.phi_prime
            .iter()
            .map(|t| t.coefficient * z.powi(t.exponent))
            .sum()
    }

    pub fn singular_at_origin(&self) -> bool {
        self.phi_prime
            .iter()
            .any(|t| t.exponent < 0 && t.coefficient.norm() != 0.0)
    }
}

/// Connection for `φ = R₁R₂/z`: `φ′ = −R₁R₂/z²`, `λ = R₁ − R₂`. The disk
/// (`R₂ = 0`) has `φ′ = 0`.
pub fn annulus_connection(r1: f64, r2: f64) -> Result<ProjectiveConnection, ConnectionError> {
    check_radii(r1, r2)?;
    let phi_prime = if r2 > 0.0 {
        vec![LaurentTerm {
            exponent: -2,
            coefficient: Complex64::new(-r1 * r2, 0.0),
        }]
    } else {
        vec![]
    };
    Ok(ProjectiveConnection {
        lambda: r1 - r2,
        phi_prime,
        potential_label: format!("-{}/z^2", r1 * r2),
    })
}

fn check_radii(r1: f64, r2: f64) -> Result<(), ConnectionError> {
    if r1.is_finite() && r2.is_finite() && r2 >= 0.0 && r1 > r2 {
        Ok(())
    } else {
        Err(ConnectionError::InvalidRadii { r1, r2 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    V1,
    V2,
}

/// `v₁ = (z/R₁)^{R₁/λ}` or `v₂ = (R₂/z)^{R₂/λ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiralField {
    pub kind: FieldKind,
    pub r1: f64,
    pub r2: f64,
    pub exponent: f64,
    /// Conformal weight `Δ = R₂/λ`.
    pub weight: f64,
}

impl ChiralField {
    pub fn new(kind: FieldKind, r1: f64, r2: f64) -> Result<Self, ConnectionError> {
        check_radii(r1, r2)?;
        if kind == FieldKind::V2 && r2 == 0.0 {
            return Err(ConnectionError::Degenerate(
                "v2 does not exist for the disk (R2 = 0)".into(),
            ));
        }
        let lambda = r1 - r2;
        let exponent = match kind {
            FieldKind::V1 => r1 / lambda,
            FieldKind::V2 => r2 / lambda,
        };
        Ok(ChiralField {
            kind,
            r1,
            r2,
            exponent,
            weight: r2 / lambda,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.r1 - self.r2
    }

    /// Boundary component on which `|v| = 1`: 0 (outer) for `v₁`, 1 for `v₂`.
    pub fn home_component(&self) -> usize {
        match self.kind {
            FieldKind::V1 => 0,
            FieldKind::V2 => 1,
        }
    }

    pub fn home_radius(&self) -> f64 {
        match self.kind {
            FieldKind::V1 => self.r1,
            FieldKind::V2 => self.r2,
        }
    }

    /// Whether the exponent is integral, so that `v` is single-valued.
    pub fn is_single_valued(&self) -> bool {
        nearest_integer(self.exponent).is_some()
    }

    fn base(&self, z: Complex64) -> Complex64 {
        match self.kind {
            FieldKind::V1 => z / self.r1,
            FieldKind::V2 => self.r2 / z,
        }
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        let w = self.base(z);
        match nearest_integer(self.exponent) {
            Some(k) => w.powi(k as i32),
            None => (w.ln() * self.exponent).exp(),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let p = self.exponent;
        match self.kind {
            FieldKind::V1 => self.value(z) * p / z,
            FieldKind::V2 => -self.value(z) * p / z,
        }
    }

    pub fn second_derivative(&self, z: Complex64) -> Complex64 {
        let p = self.exponent;
        let factor = match self.kind {
            FieldKind::V1 => p * (p - 1.0),
            FieldKind::V2 => p * (p + 1.0),
        };
        self.value(z) * factor / (z * z)
    }

    /// Rejects `z = 0`, and the cut sector for multivalued fields.
    fn check_point(&self, index: usize, z: Complex64) -> Result<(), ConnectionError> {
        check_point(index, z, !self.is_single_valued())
    }
}

fn check_point(index: usize, z: Complex64, avoid_cut: bool) -> Result<(), ConnectionError> {
    if !(z.norm() > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(ConnectionError::RejectedPoint {
            index,
            z,
            reason: "singular point z = 0".into(),
        });
    }
    if avoid_cut && z.arg().abs() > PI - BRANCH_CUT_HALF_WIDTH {
        return Err(ConnectionError::RejectedPoint {
            index,
            z,
            reason: "inside the branch-cut sector".into(),
        });
    }
    Ok(())
}

fn nearest_integer(x: f64) -> Option<i64> {
    let k = x.round();
    ((x - k).abs() <= INTEGER_TOLERANCE).then_some(k as i64)
}

/// `max|v″ + (φ′/λ²)v| / max(1, max|v″|)` over `points`, with `v″` from the
/// closed form.
pub fn ode_residual(
    connection: &ProjectiveConnection,
    field: &ChiralField,
    points: &[Complex64],
) -> Result<f64, ConnectionError> {
    let lambda2 = connection.lambda * connection.lambda;
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for (index, &z) in points.iter().enumerate() {
        field.check_point(index, z)?;
        let second = field.second_derivative(z);
        let residual = second + connection.phi_prime(z) / lambda2 * field.value(z);
        worst = worst.max(residual.norm());
        scale = scale.max(second.norm());
    }
    Ok(worst / scale)
}

/// `max | |v(z_i)| − 1 |` over samples of the field's own boundary circle.
pub fn boundary_modulus_check(field: &ChiralField, samples: &BoundarySampling) -> Result<f64, ConnectionError> {
    let expected = field.home_component();
    if let Some(&found) = samples.component.iter().find(|&&k| k != expected) {
        return Err(ConnectionError::WrongComponent { expected, found });
    }
    Ok(modulus_deviation(field, &samples.points))
}

/// `max | |v(z)| − 1 |` at arbitrary points; no component check.
pub fn modulus_deviation(field: &ChiralField, points: &[Complex64]) -> f64 {
    points
        .iter()
        .map(|z| (field.value(*z).norm() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// `|e^{2πi·R/λ} − 1|`, computed as the chord `2|sin(π·frac(R/λ))|` and set
/// to exactly 0 when `R/λ` is within [`INTEGER_TOLERANCE`] of an integer.
/// Returns NaN unless `lambda > 0`.
pub fn monodromy_defect(r: f64, lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return f64::NAN;
    }
    let ratio = r / lambda;
    let frac = ratio - ratio.round();
    if frac.abs() <= INTEGER_TOLERANCE {
        0.0
    } else {
        2.0 * (PI * frac).sin().abs()
    }
}

/// Annulus with `R₁ = nλ`, `R₂ = (n − 1)λ`; `n = 1` is the disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizedAnnulus {
    pub n: u32,
    pub lambda: f64,
    pub r1: f64,
    pub r2: f64,
    /// `(2n − 1)πλ²`
    pub area: f64,
}

impl QuantizedAnnulus {
    pub fn new(n: u32, lambda: f64) -> Result<Self, ConnectionError> {
        if n == 0 || !(lambda > 0.0) || !lambda.is_finite() {
            return Err(ConnectionError::InvalidParameter(format!(
                "need n >= 1 and lambda > 0, got n = {n}, lambda = {lambda}"
            )));
        }
        let nf = n as f64;
        Ok(QuantizedAnnulus {
            n,
            lambda,
            r1: nf * lambda,
            r2: (nf - 1.0) * lambda,
            area: (2.0 * nf - 1.0) * PI * lambda * lambda,
        })
    }

    /// `(n − 1, n)`, the exact ratio `R₂/R₁`.
    pub fn radius_ratio(&self) -> (u32, u32) {
        (self.n - 1, self.n)
    }

    /// Conformal weight `Δ = R₂/λ = n − 1`.
    pub fn weight(&self) -> u32 {
        self.n - 1
    }
}

pub fn enumerate_quantized(lambda: f64, n_max: u32) -> Result<Vec<QuantizedAnnulus>, ConnectionError> {
    if n_max == 0 {
        return Err(ConnectionError::InvalidParameter("n_max must be at least 1".into()));
    }
    (1..=n_max).map(|n| QuantizedAnnulus::new(n, lambda)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLimitReport {
    /// `max_θ |v₁(R₁e^{iθ}) − e^{inθ}|`
    pub v1_deviation: f64,
    /// `max_θ |v₂(R₂e^{iθ}) − e^{−i(n−1)θ}|`; absent for the disk.
    pub v2_deviation: Option<f64>,
}

/// Compares the fields on their boundary circles with the rotation
/// eigenfunctions `e^{inθ}` and `e^{−i(n−1)θ}` on an `m`-point θ grid.
pub fn boundary_limit_check(q: &QuantizedAnnulus, m: usize) -> Result<BoundaryLimitReport, ConnectionError> {
    if m == 0 {
        return Err(ConnectionError::InvalidParameter("need at least one sample".into()));
    }
    let n = q.n as i64;
    let quantized = q.lambda > 0.0
        && nearest_integer(q.r1 / q.lambda) == Some(n)
        && nearest_integer(q.r2 / q.lambda) == Some(n - 1);
    if !quantized {
        return Err(ConnectionError::NotQuantized(format!(
            "R1/λ = {}, R2/λ = {}, n = {}",
            q.r1 / q.lambda,
            q.r2 / q.lambda,
            q.n
        )));
    }
    let thetas: Vec<f64> = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
    let v1 = ChiralField::new(FieldKind::V1, q.r1, q.r2)?;
    let v1_deviation = thetas
        .iter()
        .map(|&t| (v1.value(Complex64::from_polar(q.r1, t)) - Complex64::from_polar(1.0, n as f64 * t)).norm())
        .fold(0.0, f64::max);
    let v2_deviation = if q.n > 1 {
        let v2 = ChiralField::new(FieldKind::V2, q.r1, q.r2)?;
        Some(
            thetas
                .iter()
                .map(|&t| {
                    (v2.value(Complex64::from_polar(q.r2, t)) - Complex64::from_polar(1.0, -((n - 1) as f64) * t)).norm()
                })
                .fold(0.0, f64::max),
        )
    } else {
        None
    };
    Ok(BoundaryLimitReport {
        v1_deviation,
        v2_deviation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// Fitted `c` in `v₁·v₂′ = c`.
    pub constant: Complex64,
    pub deviation: f64,
    /// Fitted `c′` in `v₂·v₁′ = c′`.
    pub inverse_constant: Complex64,
    pub inverse_deviation: f64,
}

/// Checks `v₁ ∝ 1/v₂′` and `v₂ ∝ 1/v₁′` by fitting a single complex constant
/// (the mean) to each product and reporting the largest deviation from it.
pub fn derivative_identity_check(r1: f64, r2: f64, points: &[Complex64]) -> Result<IdentityReport, ConnectionError> {
    check_radii(r1, r2)?;
    if r2 == 0.0 {
        return Err(ConnectionError::Degenerate(
            "R2 = 0 leaves only v1 = z/R1; there is no v2 to relate".into(),
        ));
    }
    if points.is_empty() {
        return Err(ConnectionError::InvalidParameter("no sample points".into()));
    }
    let v1 = ChiralField::new(FieldKind::V1, r1, r2)?;
    let v2 = ChiralField::new(FieldKind::V2, r1, r2)?;
    let avoid_cut = !(v1.is_single_valued() && v2.is_single_valued());
    for (index, &z) in points.iter().enumerate() {
        check_point(index, z, avoid_cut)?;
    }
    let fit = |values: Vec<Complex64>| {
        let mean = values.iter().sum::<Complex64>() / values.len() as f64;
        let deviation = values.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
        (mean, deviation)
    };
    let (constant, deviation) = fit(points.iter().map(|&z| v1.value(z) * v2.derivative(z)).collect());
    let (inverse_constant, inverse_deviation) = fit(points.iter().map(|&z| v2.value(z) * v1.derivative(z)).collect());
    Ok(IdentityReport {
        constant,
        deviation,
        inverse_constant,
        inverse_deviation,
    })
}

/// `m` points on `|z| = radius` outside the branch-cut sector.
pub fn circle_points_off_cut(radius: f64, m: usize) -> Vec<Complex64> {
    let span = PI - BRANCH_CUT_HALF_WIDTH - 1e-3;
    (0..m)
        .map(|j| {
            let t = if m == 1 { 0.0 } else { -span + 2.0 * span * j as f64 / (m - 1) as f64 };
            Complex64::from_polar(radius, t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn annulus_connections() {
        let c = annulus_connection(2.0, 1.0).unwrap();
        assert_eq!(c.lambda, 1.0);
        assert_eq!(c.phi_prime, vec![LaurentTerm { exponent: -2, coefficient: c64(-2.0, 0.0) }]);
        let disk = annulus_connection(1.0, 0.0).unwrap();
        assert_eq!(disk.lambda, 1.0);
        assert_eq!(disk.phi_prime(c64(0.3, 0.2)), c64(0.0, 0.0));
        let c = annulus_connection(3.0, 2.0).unwrap();
        assert_eq!(c.phi_prime[0].coefficient, c64(-6.0, 0.0));
        assert!(matches!(annulus_connection(1.0, 1.0), Err(ConnectionError::InvalidRadii { .. })));
    }

    #[test]
    fn closed_form_second_derivatives() {
        // v1 = (z/2)² → v1″ = 1/2; v2 = 1/z → v2″ = 2/z³
        let v1 = ChiralField::new(FieldKind::V1, 2.0, 1.0).unwrap();
        let v2 = ChiralField::new(FieldKind::V2, 2.0, 1.0).unwrap();
        let z = c64(0.7, -1.1);
        assert!((v1.second_derivative(z) - c64(0.5, 0.0)).norm() < 1e-15);
        assert!((v2.second_derivative(z) - 2.0 / (z * z * z)).norm() < 1e-14);
        let disk = ChiralField::new(FieldKind::V1, 1.0, 0.0).unwrap();
        assert_eq!(disk.second_derivative(z), c64(0.0, 0.0));
        assert_eq!(disk.value(z), z);
    }

    #[test]
    fn residual_on_circle() {
        let conn = annulus_connection(2.0, 1.0).unwrap();
        let v1 = ChiralField::new(FieldKind::V1, 2.0, 1.0).unwrap();
        let pts: Vec<Complex64> = (0..1000).map(|j| Complex64::from_polar(1.5, TAU * j as f64 / 1000.0)).collect();
        assert!(ode_residual(&conn, &v1, &pts).unwrap() <= 1e-12);
    }

    #[test]
    fn residual_rejects_singular_and_cut_points() {
        let conn = annulus_connection(5.0, 2.0).unwrap();
        let v1 = ChiralField::new(FieldKind::V1, 5.0, 2.0).unwrap();
        assert!(matches!(
            ode_residual(&conn, &v1, &[c64(1.0, 0.0), c64(0.0, 0.0)]),
            Err(ConnectionError::RejectedPoint { index: 1, .. })
        ));
        assert!(matches!(
            ode_residual(&conn, &v1, &[c64(-3.0, 0.01)]),
            Err(ConnectionError::RejectedPoint { index: 0, .. })
        ));
        // Integer exponents have no cut.
        let conn = annulus_connection(2.0, 1.0).unwrap();
        let v1 = ChiralField::new(FieldKind::V1, 2.0, 1.0).unwrap();
        assert!(ode_residual(&conn, &v1, &[c64(-3.0, 0.0)]).is_ok());
    }

    #[test]
    fn monodromy_examples() {
        assert_eq!(monodromy_defect(2.0, 1.0), 0.0);
        assert!((monodromy_defect(2.5, 1.0) - 2.0).abs() < 1e-15);
        assert!((monodromy_defect(1.0, 3.0) - 3f64.sqrt()).abs() < 1e-15);
        assert!(monodromy_defect(1.0, 0.0).is_nan());
    }

    #[test]
    fn quantized_family() {
        let q = enumerate_quantized(1.0, 3).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!((q[2].r1, q[2].r2), (3.0, 2.0));
        assert!((q[2].area - 5.0 * PI).abs() < 1e-15);
        assert_eq!((q[0].r1, q[0].r2), (1.0, 0.0));
        assert!((q[0].area - PI).abs() < 1e-15);
        let half = enumerate_quantized(0.5, 2).unwrap();
        assert_eq!((half[1].r1, half[1].r2), (1.0, 0.5));
        assert!((half[1].area - 0.75 * PI).abs() < 1e-15);
        assert!(enumerate_quantized(1.0, 0).is_err());
        assert!(enumerate_quantized(-1.0, 2).is_err());
    }

    #[test]
    fn boundary_limits_refuse_non_quantized() {
        let mut q = QuantizedAnnulus::new(2, 1.0).unwrap();
        q.r2 = 1.3;
        assert!(matches!(boundary_limit_check(&q, 16), Err(ConnectionError::NotQuantized(_))));
    }

    #[test]
    fn boundary_limit_examples() {
        let r = boundary_limit_check(&QuantizedAnnulus::new(2, 1.0).unwrap(), 256).unwrap();
        assert!(r.v1_deviation <= 1e-12 && r.v2_deviation.unwrap() <= 1e-12);
        let disk = boundary_limit_check(&QuantizedAnnulus::new(1, 1.0).unwrap(), 256).unwrap();
        assert!(disk.v1_deviation <= 1e-12);
        assert_eq!(disk.v2_deviation, None);
        // n = 3 at θ = π/2: v2(2i) = (2/2i)² = −1 = e^{−iπ}
        let v2 = ChiralField::new(FieldKind::V2, 3.0, 2.0).unwrap();
        let z = Complex64::from_polar(2.0, PI / 2.0);
        assert!((v2.value(z) - Complex64::from_polar(1.0, -PI)).norm() < 1e-15);
    }

    #[test]
    fn identity_constants() {
        let pts = circle_points_off_cut(1.5, 200);
        let r = derivative_identity_check(2.0, 1.0, &pts).unwrap();
        assert!((r.constant - c64(-0.25, 0.0)).norm() < 1e-14);
        assert!(r.deviation <= 1e-12);
        let pts = circle_points_off_cut(2.5, 200);
        let r = derivative_identity_check(3.0, 2.0, &pts).unwrap();
        assert!((r.constant - c64(-8.0 / 27.0, 0.0)).norm() < 1e-14);
        assert!(matches!(derivative_identity_check(1.0, 0.0, &pts), Err(ConnectionError::Degenerate(_))));
    }

    #[test]
    fn modulus_checks() {
        use crate::geometry::{sample_boundary, DomainSpec};
        let samples = sample_boundary(&DomainSpec::annulus(c64(0.0, 0.0), 2.0, 1.0), 64).unwrap();
        let v1 = ChiralField::new(FieldKind::V1, 2.0, 1.0).unwrap();
        assert!(boundary_modulus_check(&v1, &samples.component_subset(0)).unwrap() <= 1e-13);
        assert_eq!(
            boundary_modulus_check(&v1, &samples).unwrap_err(),
            ConnectionError::WrongComponent { expected: 0, found: 1 }
        );
        let inner = samples.component_subset(1);
        assert!((modulus_deviation(&v1, &inner.points) - 0.75).abs() < 1e-14);
    }
}
