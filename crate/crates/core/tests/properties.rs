//! Randomized invariants.

use std::f64::consts::PI;

use analytic_content::cli::RunConfig;
use analytic_content::{
    analytic_content, annulus_connection, area, boundary_limit_check, bounds, c64, monodromy_defect, ode_residual,
    perimeter, sample_boundary, transform, ChiralField, Complex64, ContentOptions, CurveSpec, DomainSpec, FieldKind,
    FourierTerm, QuantizedAnnulus,
};
use analytic_content::connection::circle_points_off_cut;
use proptest::prelude::*;

fn complex(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(re, im)| c64(re, im))
}

fn nonzero_scale() -> impl Strategy<Value = Complex64> {
    (0.2f64..4.0, 0.0..2.0 * PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Disks, annuli, rotated ellipses, regular-ish polygons and mild Fourier curves.
fn domain() -> impl Strategy<Value = DomainSpec> {
    prop_oneof![
        (complex(3.0), 0.1f64..5.0).prop_map(|(c, r)| DomainSpec::disk(c, r)),
        (complex(3.0), 0.5f64..5.0, 0.05f64..0.9).prop_map(|(c, r, q)| DomainSpec::annulus(c, r, q * r)),
        (complex(3.0), 0.5f64..4.0, 0.1f64..1.0, 0.0..PI).prop_map(|(c, a, q, t)| {
            DomainSpec::new(CurveSpec::ellipse(c, a, q * a, t), vec![], "ellipse")
        }),
        (3usize..9, 0.5f64..3.0, 0.0..PI).prop_map(|(n, r, t)| {
            DomainSpec::polygon((0..n).map(|k| Complex64::from_polar(r, t + 2.0 * PI * k as f64 / n as f64)).collect())
        }),
        (complex(2.0), 1.0f64..3.0, -0.15f64..0.15, -0.15f64..0.15).prop_map(|(c, r, p, q)| {
            DomainSpec::new(
                CurveSpec::fourier(
                    c,
                    vec![
                        FourierTerm { k: 1, c: c64(r, 0.0) },
                        FourierTerm { k: 3, c: c64(p * r, 0.0) },
                        FourierTerm { k: -2, c: c64(0.0, q * r) },
                    ],
                ),
                vec![],
                "fourier",
            )
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn affine_maps_scale_area_and_perimeter(d in domain(), a in nonzero_scale(), b in complex(5.0)) {
        let image = transform(&d, a, b).unwrap();
        let s = a.norm();
        prop_assert!((area(&image).unwrap() - s * s * area(&d).unwrap()).abs() <= 1e-9 * s * s * area(&d).unwrap());
        prop_assert!((perimeter(&image).unwrap() - s * perimeter(&d).unwrap()).abs() <= 1e-9 * s * perimeter(&d).unwrap());
    }

    #[test]
    fn isoperimetric_bounds_are_ordered(d in domain()) {
        let (lower, upper) = bounds(&d).unwrap();
        prop_assert!(lower > 0.0);
        prop_assert!(lower <= upper * (1.0 + 1e-12), "{lower} > {upper}");
    }

    #[test]
    fn sample_weights_sum_to_component_lengths(d in domain(), m in 16usize..300) {
        let s = sample_boundary(&d, m).unwrap();
        prop_assert_eq!(s.len(), m * s.component_count());
        let total: f64 = (0..s.component_count()).map(|k| s.component_length(k)).sum();
        let p = perimeter(&d).unwrap();
        // Polygons are exact; smooth curves use the equispaced rule.
        prop_assert!((total - p).abs() <= 1e-6 * p, "{total} vs {p}");
    }

    #[test]
    fn monodromy_vanishes_exactly_at_integers(k in 0u32..50, offset in 0.001f64..0.999, lambda in 0.1f64..10.0) {
        prop_assert_eq!(monodromy_defect(k as f64 * lambda, lambda), 0.0);
        let defect = monodromy_defect((k as f64 + offset) * lambda, lambda);
        prop_assert!(defect > 0.0);
        prop_assert!((defect - 2.0 * (PI * offset).sin()).abs() < 1e-9);
    }

    #[test]
    fn chiral_fields_solve_the_connection(r1 in 0.5f64..10.0, q in 0.05f64..0.95, second in any::<bool>()) {
        let r2 = q * r1;
        let connection = annulus_connection(r1, r2).unwrap();
        let field = ChiralField::new(if second { FieldKind::V2 } else { FieldKind::V1 }, r1, r2).unwrap();
        let points = circle_points_off_cut(0.5 * (r1 + r2), 200);
        prop_assert!(ode_residual(&connection, &field, &points).unwrap() <= 1e-12);
    }

    #[test]
    fn quantized_boundary_limits(n in 1u32..40, lambda in 0.05f64..20.0) {
        let q = QuantizedAnnulus::new(n, lambda).unwrap();
        let report = boundary_limit_check(&q, 97).unwrap();
        prop_assert!(report.v1_deviation <= 1e-11);
        prop_assert_eq!(report.v2_deviation.is_some(), n > 1);
        prop_assert!(report.v2_deviation.unwrap_or(0.0) <= 1e-11);
        prop_assert!((q.area - PI * (q.r1 * q.r1 - q.r2 * q.r2)).abs() <= 1e-12 * q.area);
    }

    #[test]
    fn config_round_trips(samples in 8usize..4096, degree in 0usize..64, tolerance in 1e-12f64..1e-2, seed in any::<u64>()) {
        let text = format!(
            r#"{{"domain": {{"outer": {{"type": "circle", "center": [0, 0], "radius": 2}}}},
                "solver": {{"samples": {samples}, "poly_degree": {degree}, "tolerance": {tolerance:e}}}, "seed": {seed}}}"#
        );
        let config = RunConfig::from_json(&text, "p").unwrap();
        let again = RunConfig::from_json(&serde_json::to_string(&config).unwrap(), "p").unwrap();
        prop_assert_eq!(config, again);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn disk_content_is_its_radius(c in complex(5.0), r in 0.1f64..10.0) {
        let result = analytic_content(&DomainSpec::disk(c, r), &ContentOptions::default()).unwrap();
        prop_assert!((result.lambda_hat - r).abs() <= 1e-6 * r);
    }

    #[test]
    fn annulus_content_is_radius_difference(c in complex(3.0), r1 in 0.5f64..5.0, q in 0.1f64..0.9) {
        let r2 = q * r1;
        let result = analytic_content(&DomainSpec::annulus(c, r1, r2), &ContentOptions::default()).unwrap();
        prop_assert!((result.lambda_hat - (r1 - r2)).abs() <= 1e-3 * (r1 - r2));
        let (lower, upper) = bounds(&DomainSpec::annulus(c, r1, r2)).unwrap();
        prop_assert!(result.lambda_hat >= lower - 1e-6 && result.lambda_hat <= upper + 1e-3);
    }
}
