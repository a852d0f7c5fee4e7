//! Dormand–Prince 5(4) integration of `v″ = −(φ′(z)/λ²)·v` along a polyline.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ConnectionError, ProjectiveConnection};

/// Default local error tolerance per step.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
const MIN_STEP: f64 = 1e-14;
const MAX_STEPS_PER_SEGMENT: usize = 1_000_000;

/// Solution value and derivative at a path node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub z: Complex64,
    pub v: Complex64,
    pub dv: Complex64,
}

type State = [Complex64; 2];

// Dormand–Prince tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates the connection's ODE from `(z0, v0, dv0)` through each node
/// of `path` in turn, returning the solution at every node.
///
/// Each segment `z(s) = a + s(b − a)`, `s ∈ [0, 1]`, is integrated in `s`
/// with an adaptive Dormand–Prince pair; `tolerance` bounds the local error
/// per step (mixed absolute/relative). Segments may not touch `z = 0`
/// when the connection has a pole there.
pub fn ode_integrate(
    connection: &ProjectiveConnection,
    z0: Complex64,
    v0: Complex64,
    dv0: Complex64,
    path: &[Complex64],
    tolerance: f64,
) -> Result<Vec<PathSample>, ConnectionError> {
    if !(tolerance > 0.0) {
        return Err(ConnectionError::InvalidParameter(format!("tolerance {tolerance}")));
    }
    let mut state: State = [v0, dv0];
    let mut here = z0;
    let mut out = Vec::with_capacity(path.len());
    for &next in path {
        if let Some(location) = closest_to_origin(here, next).filter(|_| connection.singular_at_origin()) {
            return Err(ConnectionError::IntegrationFailure {
                location,
                reason: "path passes through the double pole at z = 0".into(),
            });
        }
        if next != here {
            state = integrate_segment(connection, here, next, state, tolerance)?;
        }
        out.push(PathSample {
            z: next,
            v: state[0],
            dv: state[1],
        });
        here = next;
    }
    Ok(out)
}

/// The point of segment `[a, b]` nearest the origin, if it is too close.
fn closest_to_origin(a: Complex64, b: Complex64) -> Option<Complex64> {
    let d = b - a;
    let s = if d.norm_sqr() == 0.0 {
        0.0
    } else {
        (-(a.conj() * d).re / d.norm_sqr()).clamp(0.0, 1.0)
    };
    let p = a + d * s;
    let scale = a.norm().max(b.norm()).max(1.0);
    (p.norm() <= 1e-8 * scale).then_some(p)
}

fn integrate_segment(
    connection: &ProjectiveConnection,
    a: Complex64,
    b: Complex64,
    mut y: State,
    tolerance: f64,
) -> Result<State, ConnectionError> {
    let d = b - a;
    let lambda2 = connection.lambda * connection.lambda;
    let rhs = |s: f64, y: &State| -> State {
        let z = a + d * s;
        [y[1] * d, -(connection.phi_prime(z) / lambda2) * y[0] * d]
    };
    let mut s = 0.0_f64;
    let mut h = 0.01_f64;
    let mut steps = 0;
    while s < 1.0 {
        steps += 1;
        if steps > MAX_STEPS_PER_SEGMENT {
            return Err(ConnectionError::IntegrationFailure {
                location: a + d * s,
                reason: "step budget exhausted".into(),
            });
        }
        h = h.min(1.0 - s);
        let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
        for stage in 0..7 {
            let mut ys = y;
            for (prev, coeff) in A[stage].iter().enumerate().take(stage) {
                for comp in 0..2 {
                    ys[comp] += k[prev][comp] * (h * coeff);
                }
            }
            k[stage] = rhs(s + C[stage] * h, &ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for comp in 0..2 {
            let mut high = Complex64::new(0.0, 0.0);
            let mut low = Complex64::new(0.0, 0.0);
            for stage in 0..7 {
                high += k[stage][comp] * B5[stage];
                low += k[stage][comp] * B4[stage];
            }
            y5[comp] += high * h;
            let scale = tolerance * (1.0 + y[comp].norm().max(y5[comp].norm()));
            err = err.max(((high - low) * h).norm() / scale);
        }
        if err <= 1.0 {
            s += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < MIN_STEP {
            return Err(ConnectionError::IntegrationFailure {
                location: a + d * s,
                reason: format!("step size underflow (h = {h:.3e})"),
            });
        }
    }
    Ok(y)
}
