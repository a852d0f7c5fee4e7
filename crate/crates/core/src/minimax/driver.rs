use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{build_basis, lawson_minimax, MinimaxOptions, MinimaxResult, SolverError, MAX_DEGREE};
use crate::geometry::{sample_boundary, DomainSpec};

/// Controls for [`analytic_content`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContentOptions {
    /// Samples per boundary component at the first level.
    pub samples: usize,
    pub poly_degree: usize,
    pub pole_degree: usize,
    pub solver: MinimaxOptions,
    /// Relative change in `λ̂` between levels that counts as stable.
    pub stability_tolerance: f64,
    /// Extra levels after the first.
    pub max_refinements: usize,
    pub max_samples: usize,
    /// Verification grid density relative to the sample density.
    pub verification_factor: usize,
}

impl Default for ContentOptions {
    fn default() -> Self {
        ContentOptions {
            samples: 256,
            poly_degree: 12,
            pole_degree: 12,
            solver: MinimaxOptions::default(),
            stability_tolerance: 1e-4,
            max_refinements: 3,
            max_samples: 8192,
            verification_factor: 4,
        }
    }
}

/// One rung of the refinement ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementStep {
    pub samples_per_component: usize,
    pub poly_degree: usize,
    pub pole_degree: usize,
    pub lambda_hat: f64,
    pub lower_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Analytic content of `domain`.
///
/// Level `k` uses `samples·2^k` points per component and degrees
/// `(k + 1)·poly_degree`, `(k + 1)·pole_degree` (capped). Refinement stops
/// once `λ̂` moves by at most `stability_tolerance` relative between levels.
/// If the ladder runs out first, or a higher level is rank deficient, the
/// last good level comes back with `converged = false`.
pub fn analytic_content(domain: &DomainSpec, options: &ContentOptions) -> Result<MinimaxResult, SolverError> {
    domain.validate()?;
    if options.verification_factor == 0 || !(options.stability_tolerance > 0.0) {
        return Err(SolverError::InvalidOption(format!("{options:?}")));
    }
    let mut ladder: Vec<RefinementStep> = Vec::new();
    let mut previous: Option<MinimaxResult> = None;
    for level in 0..=options.max_refinements {
        let samples_per_component = options.samples << level;
        if level > 0 && samples_per_component > options.max_samples {
            break;
        }
        let poly_degree = (options.poly_degree * (level + 1)).min(MAX_DEGREE);
        let pole_degree = (options.pole_degree * (level + 1)).min(MAX_DEGREE);
        let basis = build_basis(domain, poly_degree, pole_degree)?;
        let samples = sample_boundary(domain, samples_per_component)?;
        let verification = sample_boundary(domain, samples_per_component * options.verification_factor)?;
        let result = match lawson_minimax(&samples, &verification, &basis, &options.solver) {
            Ok(r) => r,
            Err(SolverError::IllConditionedBasis { .. }) if previous.is_some() => break,
            Err(e) => return Err(e),
        };
        ladder.push(RefinementStep {
            samples_per_component,
            poly_degree,
            pole_degree,
            lambda_hat: result.lambda_hat,
            lower_bound: result.lower_bound,
            iterations: result.iterations,
            converged: result.converged,
        });
        if let Some(prev) = &previous {
            let change = (result.lambda_hat - prev.lambda_hat).abs() / result.lambda_hat.max(f64::MIN_POSITIVE);
            if change <= options.stability_tolerance {
                let converged = result.converged;
                return Ok(MinimaxResult {
                    ladder,
                    converged,
                    ..result
                });
            }
        }
        previous = Some(result);
    }
    let last = previous.expect("first level always runs");
    Ok(MinimaxResult {
        ladder,
        converged: false,
        ..last
    })
}

/// `z̄ − φ̂(z)` at arbitrary points.
pub fn residual_field(result: &MinimaxResult, points: &[Complex64]) -> Vec<Complex64> {
    points.iter().map(|z| z.conj() - result.approximant(*z)).collect()
}
