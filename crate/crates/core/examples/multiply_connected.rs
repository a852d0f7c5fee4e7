//! A three-connected domain (radius-3 disk with unit holes at ±1.5): the
//! content stays well above `2A/P`, unlike a disk or an annulus.

use analytic_content::{analytic_content, bounds, c64, ContentOptions, CurveSpec, DomainSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domain = DomainSpec::new(
        CurveSpec::circle(c64(0.0, 0.0), 3.0),
        vec![CurveSpec::circle(c64(1.5, 0.0), 1.0), CurveSpec::circle(c64(-1.5, 0.0), 1.0)],
        "three-connected",
    );
    let (lower, upper) = bounds(&domain)?;
    let result = analytic_content(&domain, &ContentOptions::default())?;
    for step in &result.ladder {
        println!(
            "m = {:>5}, degrees ({:>2}, {:>2}): λ̂ = {:.7}, {} iterations",
            step.samples_per_component, step.poly_degree, step.pole_degree, step.lambda_hat, step.iterations
        );
    }
    println!("2A/P = {lower:.6}, λ̂ = {:.6}, √(A/π) = {upper:.6}", result.lambda_hat);
    println!("gap λ̂ − 2A/P = {:.4} (converged: {})", result.lambda_hat - lower, result.converged);
    Ok(())
}
