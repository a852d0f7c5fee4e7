//! End-to-end checks against closed forms and independently computed values.

use std::f64::consts::PI;

use analytic_content::{
    analytic_content, build_basis, c64, lawson_minimax, lp_crosscheck, perimeter, residual_field,
    sample_boundary, ContentOptions, DomainSpec, MinimaxOptions,
};
use approx::assert_relative_eq;

/// Ellipse perimeter by the Gauss–Kummer series
/// `π(a + b) Σ binom(1/2, n)² hⁿ`, `h = ((a − b)/(a + b))²`.
fn ellipse_perimeter_series(a: f64, b: f64) -> f64 {
    let h = ((a - b) / (a + b)).powi(2);
    let mut binom = 1.0;
    let mut sum = 1.0;
    let mut power = 1.0;
    for n in 1..200 {
        binom *= (0.5 - (n - 1) as f64) / n as f64;
        power *= h;
        sum += binom * binom * power;
    }
    PI * (a + b) * sum
}

#[test]
fn ellipse_perimeter_matches_series() {
    for (a, b) in [(2.0, 1.0), (5.0, 0.5), (1.0, 1.0), (3.0, 2.9)] {
        let p = perimeter(&DomainSpec::ellipse(a, b)).unwrap();
        assert_relative_eq!(p, ellipse_perimeter_series(a, b), max_relative = 1e-12);
    }
}

#[test]
fn ellipse_candidate_has_constant_modulus() {
    // φ = ((a − b)/(a + b))z on z = a cos θ + i b sin θ gives |z̄ − φ| = 2ab/(a + b).
    let (a, b) = (2.0, 1.0);
    let k = (a - b) / (a + b);
    for j in 0..720 {
        let t = 2.0 * PI * j as f64 / 720.0;
        let z = c64(a * t.cos(), b * t.sin());
        assert_relative_eq!((z.conj() - k * z).norm(), 4.0 / 3.0, max_relative = 1e-14);
    }
}

#[test]
fn ellipse_content() {
    let result = analytic_content(&DomainSpec::ellipse(2.0, 1.0), &ContentOptions::default()).unwrap();
    assert!(result.converged);
    assert!((result.lambda_hat - 4.0 / 3.0).abs() <= 2e-3, "{}", result.lambda_hat);
    // The minimizer is the linear candidate.
    let c = result.unscaled_coefficients();
    let linear = result.basis.iter().position(|b| b.exponent == 1).unwrap();
    assert!((c[linear] - c64(1.0 / 3.0, 0.0)).norm() < 1e-3, "{}", c[linear]);
}

#[test]
fn disk_half_radius_content() {
    let result = analytic_content(&DomainSpec::disk(c64(0.3, -0.2), 0.5), &ContentOptions::default()).unwrap();
    assert!((result.lambda_hat - 0.5).abs() <= 1e-4);
}

#[test]
fn annulus_three_two_content() {
    let result = analytic_content(&DomainSpec::annulus(c64(0.0, 0.0), 3.0, 2.0), &ContentOptions::default()).unwrap();
    assert!((result.lambda_hat - 1.0).abs() <= 1e-3);
    // Off-center annulus: the pole sits at the hole centroid.
    let shifted = analytic_content(&DomainSpec::annulus(c64(-1.0, 2.0), 3.0, 2.0), &ContentOptions::default()).unwrap();
    assert!((shifted.lambda_hat - 1.0).abs() <= 1e-3);
}

#[test]
fn square_degree_eight_lies_strictly_between_bounds() {
    let domain = DomainSpec::square(c64(0.0, 0.0), 2.0);
    let samples = sample_boundary(&domain, 512).unwrap();
    let verification = sample_boundary(&domain, 2048).unwrap();
    let basis = build_basis(&domain, 8, 0).unwrap();
    let result = lawson_minimax(&samples, &verification, &basis, &MinimaxOptions::default()).unwrap();
    assert!(result.lambda_hat > 1.0 && result.lambda_hat < 1.1285, "{}", result.lambda_hat);
    assert!(result.lower_bound <= result.discrete_max);
}

#[test]
fn annulus_residual_field_is_unimodular_on_both_circles() {
    let result = analytic_content(&DomainSpec::annulus(c64(0.0, 0.0), 2.0, 1.0), &ContentOptions::default()).unwrap();
    let points: Vec<_> = (0..64)
        .flat_map(|j| {
            let t = 2.0 * PI * j as f64 / 64.0 + 0.01;
            [c64(0.0, t).exp() * 2.0, c64(0.0, t).exp()]
        })
        .collect();
    for r in residual_field(&result, &points) {
        assert!((r.norm() - 1.0).abs() < 1e-6, "{}", r.norm());
    }
}

#[test]
fn lp_gap_shrinks_quadratically_in_directions() {
    let domain = DomainSpec::ellipse(2.0, 1.0);
    let samples = sample_boundary(&domain, 256).unwrap();
    let basis = build_basis(&domain, 6, 0).unwrap();
    let lambda = lawson_minimax(&samples, &samples, &basis, &MinimaxOptions::default()).unwrap().discrete_max;
    let gaps: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&m| lp_crosscheck(&samples, &basis, m).unwrap().lambda_lp - lambda)
        .collect();
    for pair in gaps.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!(ratio > 2.5 && ratio < 6.0, "gaps {gaps:?}");
    }
}

#[test]
fn interior_residual_stays_below_boundary_maximum() {
    let domain = DomainSpec::ellipse(2.0, 1.0);
    let result = analytic_content(&domain, &ContentOptions::default()).unwrap();
    let grid: Vec<_> = (-20..=20)
        .flat_map(|i| (-10..=10).map(move |j| c64(0.1 * i as f64, 0.1 * j as f64)))
        .filter(|z| domain.contains(*z))
        .collect();
    let worst = residual_field(&result, &grid).iter().map(|r| r.norm()).fold(0.0, f64::max);
    assert!(worst <= result.lambda_hat + 1e-9);
}

#[test]
fn enlarging_the_basis_never_raises_the_content() {
    let domain = DomainSpec::square(c64(0.0, 0.0), 2.0);
    let samples = sample_boundary(&domain, 512).unwrap();
    let mut previous = f64::INFINITY;
    for degree in [2, 4, 8, 12] {
        let basis = build_basis(&domain, degree, 0).unwrap();
        let r = lawson_minimax(&samples, &samples, &basis, &MinimaxOptions::default()).unwrap();
        assert!(r.discrete_max <= previous * (1.0 + 1e-6), "degree {degree}: {} > {previous}", r.discrete_max);
        previous = r.discrete_max;
    }
}
