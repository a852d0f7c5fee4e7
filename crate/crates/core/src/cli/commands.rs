use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{CliError, Command, RunConfig};
use crate::connection::{
    self, annulus_connection, boundary_limit_check, boundary_modulus_check, derivative_identity_check,
    enumerate_quantized, monodromy_defect, ode_integrate, ode_residual, ChiralField, ConnectionError,
    FieldKind, QuantizedAnnulus,
};
use crate::extremal::{bounds, classify, covariance_check, ExtremalError, DEFAULT_EXTREMAL_TOLERANCE};
use crate::geometry::{self, sample_boundary, DomainSpec, GeometryError};
use crate::minimax::{analytic_content, lp_crosscheck, residual_field, MinimaxResult, SolverError};

const INTERIOR_POINTS: usize = 256;
const DEFAULT_SEED: u64 = 0;

pub(super) struct CommandOutput {
    pub results: Value,
    pub csv: Option<String>,
    pub converged: bool,
}

pub(super) fn dispatch(command: Command, config: &RunConfig) -> Result<CommandOutput, CliError> {
    match command {
        Command::Content => content(config),
        Command::Bounds => bounds_command(config),
        Command::Classify => classify_command(config),
        Command::Covariance => covariance(config),
        Command::VerifyConnection => verify_connection(config),
        Command::Quantize => quantize(config),
        Command::Sweep => sweep(config),
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::OracleFailure(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ExtremalError> for CliError {
    fn from(e: ExtremalError) -> Self {
        match e {
            ExtremalError::Solver(s) => s.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<ConnectionError> for CliError {
    fn from(e: ConnectionError) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn require<'a, T>(value: &'a Option<T>, section: &str, command: &str) -> Result<&'a T, CliError> {
    value
        .as_ref()
        .ok_or_else(|| CliError::Validation(format!("`{command}` needs a `{section}` section in the config")))
}

fn domain_summary(domain: &DomainSpec) -> Result<Value, CliError> {
    let area = geometry::area(domain)?;
    let perimeter = geometry::perimeter(domain)?;
    let (lower, upper) = bounds(domain)?;
    Ok(json!({
        "label": domain.label,
        "connectivity": geometry::connectivity(domain),
        "area": area,
        "perimeter": perimeter,
        "bounds": { "lower": lower, "upper": upper },
    }))
}

fn result_json(result: &MinimaxResult) -> Value {
    let coefficients: Vec<Value> = result
        .basis
        .iter()
        .zip(&result.coefficients)
        .map(|(b, c)| {
            json!({
                "center": b.center,
                "exponent": b.exponent,
                "scale": b.scale,
                "coefficient": c,
                "unscaled": b.unscaled(*c),
            })
        })
        .collect();
    let moduli: Vec<f64> = result.residuals.iter().map(|r| r.norm()).collect();
    let min = moduli.iter().cloned().fold(f64::INFINITY, f64::min);
    json!({
        "lambda_hat": result.lambda_hat,
        "discrete_max": result.discrete_max,
        "lower_bound": result.lower_bound,
        "converged": result.converged,
        "iterations": result.iterations,
        "equioscillation_ratio": result.equioscillation_ratio,
        "condition_number": result.condition_number,
        "residual_stats": { "max": result.lambda_hat, "min": min, "count": moduli.len() },
        "coefficients": coefficients,
        "ladder": result.ladder,
    })
}

/// Uniform points inside the domain, by rejection from the bounding box.
fn interior_points(domain: &DomainSpec, count: usize, seed: u64) -> Vec<Complex64> {
    let outline = domain.outer.polyline(1024);
    let (mut lo, mut hi) = (outline[0], outline[0]);
    for z in &outline {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 10_000 * count {
        attempts += 1;
        let z = Complex64::new(rng.random_range(lo.re..hi.re), rng.random_range(lo.im..hi.im));
        if domain.contains(z) {
            out.push(z);
        }
    }
    out
}

fn solve_content(config: &RunConfig, domain: &DomainSpec) -> Result<(MinimaxResult, Value, Option<String>), CliError> {
    let result = analytic_content(domain, &config.solver.content_options())?;
    let m = result.ladder.last().map_or(config.solver.samples, |s| s.samples_per_component);
    let samples = sample_boundary(domain, m)?;

    let lp = if config.solver.lp_directions > 0 {
        let lp = lp_crosscheck(&samples, &result.basis, config.solver.lp_directions)?;
        let cos = (std::f64::consts::PI / lp.directions as f64).cos();
        json!({
            "directions": lp.directions,
            "lambda_lp": lp.lambda_lp,
            "lp_discrete_max": lp.discrete_max,
            "pivots": lp.pivots,
            "sandwich_holds": result.discrete_max * (1.0 - 1e-6) <= lp.lambda_lp
                && lp.lambda_lp <= result.discrete_max / cos + 1e-6,
        })
    } else {
        Value::Null
    };

    let seed = config.seed.unwrap_or(DEFAULT_SEED);
    let inside = interior_points(domain, INTERIOR_POINTS, seed);
    let interior_max = residual_field(&result, &inside)
        .iter()
        .map(|r| r.norm())
        .fold(0.0, f64::max);

    let residuals = residual_field(&result, &samples.points);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["theta", "component", "abs_residual"])
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    for ((theta, component), r) in samples.params.iter().zip(&samples.component).zip(&residuals) {
        writer
            .write_record([theta.to_string(), component.to_string(), r.norm().to_string()])
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let csv = String::from_utf8(writer.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?)
        .expect("csv output is utf-8");

    let certificates = json!({
        "lower_bound_below_lambda": result.lower_bound <= result.lambda_hat,
        "lp_crosscheck": lp,
        "interior": {
            "seed": seed,
            "points": inside.len(),
            "max_abs_residual": interior_max,
            "below_lambda_hat": interior_max <= result.lambda_hat * (1.0 + 1e-6),
        },
    });
    Ok((result, certificates, Some(csv)))
}

fn content(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let domain = require(&config.domain, "domain", "content")?;
    let summary = domain_summary(domain)?;
    let (result, certificates, csv) = solve_content(config, domain)?;
    Ok(CommandOutput {
        results: json!({
            "domain": summary,
            "content": result_json(&result),
            "certificates": certificates,
        }),
        csv,
        converged: result.converged,
    })
}

fn bounds_command(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let domain = require(&config.domain, "domain", "bounds")?;
    Ok(CommandOutput {
        results: json!({ "domain": domain_summary(domain)? }),
        csv: None,
        converged: true,
    })
}

fn classify_command(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let domain = require(&config.domain, "domain", "classify")?;
    let summary = domain_summary(domain)?;
    let tolerance = config.classify.map_or(DEFAULT_EXTREMAL_TOLERANCE, |c| c.tolerance);
    let (result, certificates, csv) = solve_content(config, domain)?;
    let classification = match classify(domain, &result, tolerance) {
        Ok(report) => json!(report),
        Err(ExtremalError::Unconverged { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let diagnostic = if result.converged {
        Value::Null
    } else {
        json!("solver did not converge; raise solver.max_iterations or the degrees")
    };
    Ok(CommandOutput {
        results: json!({
            "domain": summary,
            "content": result_json(&result),
            "certificates": certificates,
            "classification": classification,
            "diagnostic": diagnostic,
        }),
        csv,
        converged: result.converged,
    })
}

fn covariance(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let domain = require(&config.domain, "domain", "covariance")?;
    let params = require(&config.covariance, "covariance", "covariance")?;
    let report = covariance_check(domain, params.a, params.b, &config.solver.content_options())?;
    Ok(CommandOutput {
        converged: report.converged,
        results: json!({ "covariance": report }),
        csv: None,
    })
}

fn verify_connection(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let params = require(&config.connection, "connection", "verify-connection")?;
    let (r1, r2) = (params.r1, params.r2);
    let conn = annulus_connection(r1, r2)?;
    let lambda = conn.lambda;
    let mid = if r2 > 0.0 { 0.5 * (r1 + r2) } else { 0.5 * r1 };
    let points = connection::circle_points_off_cut(mid, params.points);

    let domain = if r2 > 0.0 {
        DomainSpec::annulus(Complex64::new(0.0, 0.0), r1, r2)
    } else {
        DomainSpec::disk(Complex64::new(0.0, 0.0), r1)
    };
    let samples = sample_boundary(&domain, 256)?;

    let mut fields = Vec::new();
    let kinds: &[FieldKind] = if r2 > 0.0 { &[FieldKind::V1, FieldKind::V2] } else { &[FieldKind::V1] };
    for &kind in kinds {
        let field = ChiralField::new(kind, r1, r2)?;
        let residual = ode_residual(&conn, &field, &points)?;
        let modulus = boundary_modulus_check(&field, &samples.component_subset(field.home_component()))?;
        // Integrate radially from the field's own circle to the other one.
        let (start, end) = match kind {
            FieldKind::V1 => (r1, if r2 > 0.0 { r2 } else { 0.5 * r1 }),
            FieldKind::V2 => (r2, r1),
        };
        let z0 = Complex64::new(start, 0.0);
        let z1 = Complex64::new(end, 0.0);
        let path: Vec<Complex64> = (1..=8).map(|k| z0 + (z1 - z0) * (k as f64 / 8.0)).collect();
        let solution = ode_integrate(&conn, z0, field.value(z0), field.derivative(z0), &path, connection::DEFAULT_TOLERANCE)?;
        let integration_error = solution
            .iter()
            .map(|s| (s.v - field.value(s.z)).norm() / field.value(s.z).norm().max(1e-300))
            .fold(0.0, f64::max);
        fields.push(json!({
            "kind": kind,
            "exponent": field.exponent,
            "weight": field.weight,
            "ode_residual": residual,
            "boundary_modulus_deviation": modulus,
            "radial_integration_relative_error": integration_error,
            "monodromy_defect": monodromy_defect(field.home_radius(), lambda),
        }));
    }
    let identity = if r2 > 0.0 {
        json!(derivative_identity_check(r1, r2, &points)?)
    } else {
        Value::Null
    };
    let quantized = if monodromy_defect(r1, lambda) == 0.0 && monodromy_defect(r2, lambda) == 0.0 {
        let n = (r1 / lambda).round() as u32;
        let q = QuantizedAnnulus::new(n, lambda)?;
        json!({ "annulus": q, "boundary_limits": boundary_limit_check(&q, 256)? })
    } else {
        Value::Null
    };
    Ok(CommandOutput {
        results: json!({
            "connection": conn,
            "evaluation_radius": mid,
            "points": points.len(),
            "fields": fields,
            "derivative_identity": identity,
            "quantized": quantized,
        }),
        csv: None,
        converged: true,
    })
}

fn quantize(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let params = require(&config.quantize, "quantize", "quantize")?;
    let family = enumerate_quantized(params.lambda, params.n_max)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let rows: Vec<Value> = family
        .iter()
        .map(|q| {
            let (num, den) = q.radius_ratio();
            json!({
                "n": q.n,
                "lambda": q.lambda,
                "r1": q.r1,
                "r2": q.r2,
                "area": q.area,
                "area_over_pi_lambda2": 2 * q.n - 1,
                "radius_ratio": [num, den],
                "weight": q.weight(),
            })
        })
        .collect();
    let io = |e: csv::Error| CliError::Runtime(e.to_string());
    writer.write_record(["n", "lambda", "r1", "r2", "area"]).map_err(io)?;
    for q in &family {
        writer
            .write_record([q.n.to_string(), q.lambda.to_string(), q.r1.to_string(), q.r2.to_string(), q.area.to_string()])
            .map_err(io)?;
    }
    let csv = String::from_utf8(writer.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?)
        .expect("csv output is utf-8");
    Ok(CommandOutput {
        results: json!({ "rows": rows }),
        csv: Some(csv),
        converged: true,
    })
}

fn sweep(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let params = *require(&config.sweep, "sweep", "sweep")?;
    let options = config.solver.content_options();
    let radii: Vec<f64> = (0..params.steps)
        .map(|k| {
            if params.steps == 1 {
                params.r2_min
            } else {
                params.r2_min + (params.r2_max - params.r2_min) * k as f64 / (params.steps - 1) as f64
            }
        })
        .collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(radii.len());
    let chunk = radii.len().div_ceil(workers);
    let evaluated: Vec<Result<Value, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = radii
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&r2| -> Result<Value, CliError> {
                            let origin = Complex64::new(0.0, 0.0);
                            let domain = if r2 > 0.0 {
                                DomainSpec::annulus(origin, params.r1, r2)
                            } else {
                                DomainSpec::disk(origin, params.r1)
                            };
                            let result = analytic_content(&domain, &options)?;
                            let (lower, upper) = bounds(&domain)?;
                            Ok(json!({
                                "r2": r2,
                                "lambda_hat": result.lambda_hat,
                                "expected": params.r1 - r2,
                                "lower": lower,
                                "upper": upper,
                                "gap": result.lambda_hat - lower,
                                "converged": result.converged,
                            }))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let rows: Vec<Value> = evaluated.into_iter().collect::<Result<_, _>>()?;
    let io = |e: csv::Error| CliError::Runtime(e.to_string());
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["r2", "lambda_hat", "expected", "lower", "upper", "gap", "converged"])
        .map_err(io)?;
    for row in &rows {
        let field = |k: &str| row[k].to_string();
        writer
            .write_record([field("r2"), field("lambda_hat"), field("expected"), field("lower"), field("upper"), field("gap"), field("converged")])
            .map_err(io)?;
    }
    let csv = String::from_utf8(writer.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?)
        .expect("csv output is utf-8");
    let converged = rows.iter().all(|r| r["converged"] == json!(true));
    Ok(CommandOutput {
        results: json!({ "r1": params.r1, "rows": rows }),
        csv: Some(csv),
        converged,
    })
}
