//! Annuli whose fields are single-valued: `R₁ = nλ`, `R₂ = (n − 1)λ`,
//! area `(2n − 1)πλ²`, and the monodromy defect away from them.

use analytic_content::{boundary_limit_check, enumerate_quantized, monodromy_defect};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>6} {:>6} {:>9} {:>12} {:>10}", "n", "R1", "R2", "R2/R1", "area", "|v1 − e^inθ|");
    for q in enumerate_quantized(1.0, 10)? {
        let (num, den) = q.radius_ratio();
        let limits = boundary_limit_check(&q, 360)?;
        println!(
            "{:>3} {:>6} {:>6} {:>9} {:>12.6} {:>10.1e}",
            q.n,
            q.r1,
            q.r2,
            format!("{num}/{den}"),
            q.area,
            limits.v1_deviation
        );
    }
    for r in [3.0, 3.1, 3.5, 3.9] {
        println!("monodromy defect at R/λ = {r}: {:.4}", monodromy_defect(r, 1.0));
    }
    Ok(())
}
