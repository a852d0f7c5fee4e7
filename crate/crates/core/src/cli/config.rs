use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::extremal::DEFAULT_EXTREMAL_TOLERANCE;
use crate::geometry::{DomainSpec, FourierTerm};
use crate::minimax::{ContentOptions, MinimaxOptions, MAX_DEGREE};

pub const MAX_SAMPLES: usize = 1 << 14;
pub const MAX_ITERATIONS: usize = 1_000_000;
pub const MAX_DIRECTIONS: usize = 1024;
pub const MAX_QUANTIZED: u32 = 10_000;
pub const MAX_SWEEP_STEPS: usize = 10_000;

/// A batch run: the domain plus solver and command parameters.
///
/// Every section is optional; commands that need one complain when it is
/// missing. Unknown keys anywhere are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance: Option<CovarianceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify: Option<ClassifyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantize: Option<QuantizeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub poly_degree: usize,
    pub pole_degree: usize,
    /// Samples per boundary component at the first refinement level.
    pub samples: usize,
    /// Lawson stopping tolerance (relative gap to the lower bound).
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Directions for the LP oracle; 0 skips it.
    pub lp_directions: usize,
    pub stability_tolerance: f64,
    pub max_refinements: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let content = ContentOptions::default();
        SolverConfig {
            poly_degree: content.poly_degree,
            pole_degree: content.pole_degree,
            samples: content.samples,
            tolerance: content.solver.tolerance,
            max_iterations: content.solver.max_iterations,
            lp_directions: 64,
            stability_tolerance: content.stability_tolerance,
            max_refinements: content.max_refinements,
        }
    }
}

impl SolverConfig {
    pub fn content_options(&self) -> ContentOptions {
        ContentOptions {
            samples: self.samples,
            poly_degree: self.poly_degree,
            pole_degree: self.pole_degree,
            solver: MinimaxOptions {
                max_iterations: self.max_iterations,
                tolerance: self.tolerance,
                ..MinimaxOptions::default()
            },
            stability_tolerance: self.stability_tolerance,
            max_refinements: self.max_refinements,
            ..ContentOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceConfig {
    pub a: Complex64,
    #[serde(default)]
    pub b: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    /// Relative extremality band.
    #[serde(default = "default_extremal_tolerance")]
    pub tolerance: f64,
}

fn default_extremal_tolerance() -> f64 {
    DEFAULT_EXTREMAL_TOLERANCE
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizeConfig {
    pub lambda: f64,
    pub n_max: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionConfig {
    pub r1: f64,
    pub r2: f64,
    #[serde(default = "default_connection_points")]
    pub points: usize,
}

fn default_connection_points() -> usize {
    1000
}

/// Annuli `r2_min ≤ R₂ ≤ r2_max` at fixed `R₁`, `steps` points inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub r1: f64,
    #[serde(default)]
    pub r2_min: f64,
    pub r2_max: f64,
    pub steps: usize,
}

/// A config that failed to parse or validate.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub source: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.source)?;
        if let (Some(line), Some(column)) = (self.line, self.column) {
            write!(f, ":{line}:{column}")?;
        }
        write!(f, ": field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            source: "config".into(),
            line: None,
            column: None,
            field: field.into(),
            message: message.into(),
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            source: path.display().to_string(),
            line: None,
            column: None,
            field: "<file>".into(),
            message: e.to_string(),
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Parses and validates; `source` names the document in diagnostics.
    pub fn from_json(text: &str, source: &str) -> Result<Self, ConfigError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ConfigError {
                source: source.into(),
                line: Some(inner.line()),
                column: Some(inner.column()),
                field: refine_curve_path(text, &path).unwrap_or(path),
                message: strip_position(&inner.to_string()),
            }
        })?;
        config.validate().map_err(|mut e| {
            e.source = source.into();
            e
        })?;
        Ok(config)
    }

    /// Range checks on every numeric parameter.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.solver;
        if s.poly_degree > MAX_DEGREE {
            return Err(ConfigError::field("solver.poly_degree", format!("must be <= {MAX_DEGREE}")));
        }
        if s.pole_degree > MAX_DEGREE {
            return Err(ConfigError::field("solver.pole_degree", format!("must be <= {MAX_DEGREE}")));
        }
        if !(4..=MAX_SAMPLES).contains(&s.samples) {
            return Err(ConfigError::field("solver.samples", format!("must be in 4..={MAX_SAMPLES}")));
        }
        if !(s.tolerance > 0.0 && s.tolerance < 1.0) {
            return Err(ConfigError::field("solver.tolerance", "must be in (0, 1)"));
        }
        if !(1..=MAX_ITERATIONS).contains(&s.max_iterations) {
            return Err(ConfigError::field(
                "solver.max_iterations",
                format!("must be in 1..={MAX_ITERATIONS}"),
            ));
        }
        if s.lp_directions != 0 && !(8..=MAX_DIRECTIONS).contains(&s.lp_directions) {
            return Err(ConfigError::field(
                "solver.lp_directions",
                format!("must be 0 or in 8..={MAX_DIRECTIONS}"),
            ));
        }
        if !(s.stability_tolerance > 0.0 && s.stability_tolerance < 1.0) {
            return Err(ConfigError::field("solver.stability_tolerance", "must be in (0, 1)"));
        }
        if s.max_refinements > 8 {
            return Err(ConfigError::field("solver.max_refinements", "must be <= 8"));
        }
        if let Some(c) = &self.covariance {
            if c.a.norm() == 0.0 || !c.a.re.is_finite() || !c.a.im.is_finite() {
                return Err(ConfigError::field("covariance.a", "must be a non-zero finite complex number"));
            }
        }
        if let Some(c) = &self.classify {
            if !(c.tolerance > 0.0 && c.tolerance < 1.0) {
                return Err(ConfigError::field("classify.tolerance", "must be in (0, 1)"));
            }
        }
        if let Some(q) = &self.quantize {
            if !(q.lambda > 0.0 && q.lambda.is_finite()) {
                return Err(ConfigError::field("quantize.lambda", "must be positive"));
            }
            if !(1..=MAX_QUANTIZED).contains(&q.n_max) {
                return Err(ConfigError::field("quantize.n_max", format!("must be in 1..={MAX_QUANTIZED}")));
            }
        }
        if let Some(c) = &self.connection {
            if !(c.r1.is_finite() && c.r2 >= 0.0 && c.r1 > c.r2) {
                return Err(ConfigError::field("connection", "need r1 > r2 >= 0"));
            }
            if !(1..=1_000_000).contains(&c.points) {
                return Err(ConfigError::field("connection.points", "must be in 1..=1000000"));
            }
        }
        if let Some(w) = &self.sweep {
            if !(w.r1 > 0.0 && w.r1.is_finite()) {
                return Err(ConfigError::field("sweep.r1", "must be positive"));
            }
            if !(w.r2_min >= 0.0 && w.r2_min <= w.r2_max && w.r2_max < w.r1) {
                return Err(ConfigError::field("sweep", "need 0 <= r2_min <= r2_max < r1"));
            }
            if !(1..=MAX_SWEEP_STEPS).contains(&w.steps) {
                return Err(ConfigError::field("sweep.steps", format!("must be in 1..={MAX_SWEEP_STEPS}")));
            }
        }
        Ok(())
    }
}

/// serde_json appends " at line X column Y"; the diagnostic prints those
/// separately.
/// Externally tagged twin of `CurveSpec`. serde buffers internally tagged
/// enums, which hides the failing field from the path tracker; re-reading the
/// offending object through this shape recovers it.
#[allow(dead_code)]
#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum CurveFields {
    Circle {
        center: Complex64,
        radius: f64,
    },
    Ellipse {
        center: Complex64,
        semi_major: f64,
        semi_minor: f64,
        #[serde(default)]
        rotation: f64,
    },
    Polygon {
        vertices: Vec<Complex64>,
    },
    Fourier {
        center: Complex64,
        coefficients: Vec<FourierTerm>,
    },
}

fn refine_curve_path(text: &str, path: &str) -> Option<String> {
    let root: serde_json::Value = serde_json::from_str(text).ok()?;
    let mut node = &root;
    for segment in path.split('.') {
        let (key, indices) = match segment.find('[') {
            Some(i) => (&segment[..i], &segment[i..]),
            None => (segment, ""),
        };
        node = node.get(key)?;
        for index in indices.split(['[', ']']).filter(|s| !s.is_empty()) {
            node = node.get(index.parse::<usize>().ok()?)?;
        }
    }
    let mut fields = node.as_object()?.clone();
    let tag = fields.remove("type")?.as_str()?.to_string();
    let wrapped = serde_json::json!({ tag: fields });
    let err = serde_path_to_error::deserialize::<_, CurveFields>(wrapped).err()?;
    let inner = err.path().to_string();
    let rest = inner.split_once('.').map(|(_, r)| r)?;
    Some(format!("{path}.{rest}"))
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}
