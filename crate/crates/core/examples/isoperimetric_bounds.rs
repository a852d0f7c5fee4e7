//! Where `λ̂` falls between `2A/P` and `√(A/π)` for non-extremal shapes, and
//! the extremality verdict for each.

use analytic_content::{analytic_content, c64, classify, ContentOptions, DomainSpec};
use analytic_content::extremal::DEFAULT_EXTREMAL_TOLERANCE;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domains = [
        DomainSpec::annulus(c64(0.0, 0.0), 2.0, 1.0).with_label("annulus(2,1)"),
        DomainSpec::ellipse(2.0, 1.0).with_label("ellipse(2,1)"),
        DomainSpec::square(c64(0.0, 0.0), 2.0).with_label("square side 2"),
        DomainSpec::polygon(vec![c64(0.0, 0.0), c64(2.0, 0.0), c64(1.0, 3f64.sqrt())]).with_label("triangle"),
    ];
    println!("{:<16} {:>10} {:>10} {:>10} {:>9}", "domain", "2A/P", "λ̂", "√(A/π)", "extremal");
    for domain in &domains {
        let result = analytic_content(domain, &ContentOptions::default())?;
        let report = classify(domain, &result, DEFAULT_EXTREMAL_TOLERANCE)?;
        println!(
            "{:<16} {:>10.6} {:>10.6} {:>10.6} {:>9}",
            domain.label, report.lower, report.lambda_hat, report.upper, report.is_extremal
        );
    }
    Ok(())
}
