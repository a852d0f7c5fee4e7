//! The fields `v₁ = (z/R₁)^{R₁/λ}` and `v₂ = (R₂/z)^{R₂/λ}` of an annulus:
//! ODE residual, numerical integration along a ray, boundary moduli and the
//! Wronskian-type identity `v₁·v₂′ = const`.

use analytic_content::connection::circle_points_off_cut;
use analytic_content::{
    annulus_connection, boundary_modulus_check, c64, derivative_identity_check, ode_integrate, ode_residual,
    sample_boundary, ChiralField, DomainSpec, FieldKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (r1, r2) in [(2.0, 1.0), (3.0, 2.0), (5.0, 2.0)] {
        let connection = annulus_connection(r1, r2)?;
        let samples = sample_boundary(&DomainSpec::annulus(c64(0.0, 0.0), r1, r2), 256)?;
        println!("annulus ({r1}, {r2}), λ = {}", connection.lambda);
        for kind in [FieldKind::V1, FieldKind::V2] {
            let field = ChiralField::new(kind, r1, r2)?;
            let grid = circle_points_off_cut(0.5 * (r1 + r2), 1000);
            let residual = ode_residual(&connection, &field, &grid)?;

            let start = c64(r2 * 1.01, 0.3);
            let end = c64(r1 * 0.99, 0.3 * r1 / r2);
            let path = ode_integrate(&connection, start, field.value(start), field.derivative(start), &[end], 1e-12)?;
            let exact = field.value(end);
            let integration_error = (path[0].v - exact).norm() / exact.norm();

            let home = samples.component_subset(field.home_component());
            let modulus = boundary_modulus_check(&field, &home)?;
            println!(
                "  {kind:?}: exponent {:.4}, ODE residual {residual:.1e}, integration error {integration_error:.1e}, ||v| − 1| on home circle {modulus:.1e}",
                field.exponent
            );
        }
        let identity = derivative_identity_check(r1, r2, &circle_points_off_cut(0.5 * (r1 + r2), 200))?;
        println!("  v₁·v₂′ = {:.6} (spread {:.1e})", identity.constant, identity.deviation);
    }
    Ok(())
}
