//! `λ(aΩ + b) = |a|·λ(Ω)`, and the minimizers correspond through
//! `ψ(z) = ā·φ((z − b)/a) + b̄`.

use analytic_content::{c64, covariance_check, ContentOptions, DomainSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let options = ContentOptions::default();
    for domain in [DomainSpec::annulus(c64(0.0, 0.0), 2.0, 1.0), DomainSpec::ellipse(2.0, 1.0)] {
        for (a, b) in [(c64(2.0, 0.0), c64(0.0, 0.0)), (c64(0.0, 1.0), c64(3.0, -2.0)), (c64(1.0, 1.0), c64(3.0, -2.0))] {
            let report = covariance_check(&domain, a, b, &options)?;
            println!(
                "a = {a}, b = {b}: ratio {:.6} (|a| = {:.6}), minimizer law error {:.2e}",
                report.lambda_ratio, report.expected_ratio, report.coeff_transform_error
            );
        }
    }
    Ok(())
}
