//! Quadrature rules for smooth periodic integrands.

use std::f64::consts::TAU;

/// Largest node count the doubling loop will reach before giving up.
const MAX_NODES: usize = 1 << 22;

/// Integrates a smooth `2π`-periodic function over one period.
///
/// The trapezoidal rule converges geometrically for analytic periodic
/// integrands, so the node count is doubled (reusing previous nodes) until
/// two successive estimates agree to `rel_tol`. Returns the last estimate
/// and whether the tolerance was met.
pub fn periodic_trapezoid<F>(f: F, rel_tol: f64) -> (f64, bool)
where
    F: Fn(f64) -> f64,
{
    let mut n = 64usize;
    let mut sum: f64 = (0..n).map(|j| f(TAU * j as f64 / n as f64)).sum();
    let mut estimate = sum * TAU / n as f64;
    while n < MAX_NODES {
        let h = TAU / (2 * n) as f64;
        let midpoints: f64 = (0..n).map(|j| f(h * (2 * j + 1) as f64)).sum();
        sum += midpoints;
        n *= 2;
        let refined = sum * TAU / n as f64;
        let change = (refined - estimate).abs();
        estimate = refined;
        if change <= rel_tol * refined.abs().max(f64::MIN_POSITIVE) || change == 0.0 {
            return (estimate, true);
        }
    }
    (estimate, false)
}
