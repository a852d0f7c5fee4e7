//! Content of disks and annuli, where the answer is known in closed form:
//! `λ = R` for the disk and `λ = R₁ − R₂` with `φ = R₁R₂/z` for the annulus.

use analytic_content::{analytic_content, c64, ContentOptions, DomainSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let options = ContentOptions::default();

    for r in [0.5, 1.0, 2.0] {
        let result = analytic_content(&DomainSpec::disk(c64(0.0, 0.0), r), &options)?;
        println!("disk R = {r}: λ̂ = {:.8} (exact {r})", result.lambda_hat);
    }

    for (r1, r2) in [(2.0, 1.0), (3.0, 2.0), (1.5, 0.5)] {
        let domain = DomainSpec::annulus(c64(0.0, 0.0), r1, r2);
        let result = analytic_content(&domain, &options)?;
        let coefficients = result.unscaled_coefficients();
        let pole = result
            .basis
            .iter()
            .zip(&coefficients)
            .find_map(|(b, c)| (b.exponent == -1).then_some(*c))
            .expect("annulus basis has a 1/z term");
        println!(
            "annulus ({r1}, {r2}): λ̂ = {:.8} (exact {}), 1/z coefficient = {:.6} (exact {}), {} levels",
            result.lambda_hat,
            r1 - r2,
            pole,
            r1 * r2,
            result.ladder.len()
        );
    }
    Ok(())
}
