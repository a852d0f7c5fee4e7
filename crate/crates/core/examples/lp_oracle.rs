//! Cross-checks the Lawson solution on a square against the polygonal LP
//! on the same samples: `lower_bound ≤ λ̂ ≤ t ≤ λ̂/cos(π/M)`.

use std::f64::consts::PI;

use analytic_content::{analytic_content, c64, lp_crosscheck, sample_boundary, ContentOptions, DomainSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domain = DomainSpec::square(c64(0.0, 0.0), 2.0);
    let result = analytic_content(&domain, &ContentOptions::default())?;
    let samples_per_component = result.ladder.last().expect("ladder is never empty").samples_per_component;
    let samples = sample_boundary(&domain, samples_per_component)?;

    println!("lower bound      {:.8}", result.lower_bound);
    println!("λ̂ (verification) {:.8}", result.lambda_hat);
    for directions in [16, 32, 64] {
        let lp = lp_crosscheck(&samples, &result.basis, directions)?;
        println!(
            "LP M = {directions:>2}        {:.8}  (ceiling {:.8}, {} pivots)",
            lp.lambda_lp,
            result.discrete_max / (PI / directions as f64).cos(),
            lp.pivots
        );
    }
    Ok(())
}
