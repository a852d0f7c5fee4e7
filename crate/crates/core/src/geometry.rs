//! Bounded planar domains with (mostly) analytic boundaries.
//!
//! A [`DomainSpec`] is one outer curve plus zero or more holes. Every curve
//! is a closed parametric curve `θ ↦ z(θ)`, `θ ∈ [0, 2π)`, except polygons,
//! which are handled piecewise. Orientation of the input is irrelevant:
//! measures use absolute signed areas, and [`sample_boundary`] emits the outer
//! curve counterclockwise and holes clockwise.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quadrature::periodic_trapezoid;

/// Default relative tolerance for quadrature-based area and perimeter.
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;

/// Samples per curve used for simplicity, nesting and containment checks.
pub const VALIDATION_SAMPLES: usize = 256;

/// Smallest accepted `points_per_component` for [`sample_boundary`].
pub const MIN_SAMPLES_PER_COMPONENT: usize = 4;

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("hole {index} is not strictly inside the outer curve")]
    HoleOutside { index: usize },
    #[error("holes {first} and {second} overlap")]
    HolesOverlap { first: usize, second: usize },
    #[error("curve {0} self-intersects at sampled resolution")]
    SelfIntersecting(String),
    #[error("domain has non-positive area {0}")]
    NonPositiveArea(f64),
    #[error("invalid transform: scale factor must be non-zero")]
    InvalidTransform,
    #[error("need at least {min} samples per component, got {got}")]
    TooFewSamples { min: usize, got: usize },
}

/// One Fourier mode `c·e^{ikθ}` of a [`CurveSpec::Fourier`] boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTerm {
    pub k: i32,
    pub c: Complex64,
}

/// A closed boundary curve. Complex numbers serialize as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
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

impl CurveSpec {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        CurveSpec::Circle { center, radius }
    }

    pub fn ellipse(center: Complex64, semi_major: f64, semi_minor: f64, rotation: f64) -> Self {
        CurveSpec::Ellipse {
            center,
            semi_major,
            semi_minor,
            rotation,
        }
    }

    pub fn polygon(vertices: Vec<Complex64>) -> Self {
        CurveSpec::Polygon { vertices }
    }

    pub fn fourier(center: Complex64, coefficients: Vec<FourierTerm>) -> Self {
        CurveSpec::Fourier {
            center,
            coefficients,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CurveSpec::Circle { .. } => "circle",
            CurveSpec::Ellipse { .. } => "ellipse",
            CurveSpec::Polygon { .. } => "polygon",
            CurveSpec::Fourier { .. } => "fourier",
        }
    }

    fn check_parameters(&self) -> Result<(), GeometryError> {
        let bad = |msg: String| Err(GeometryError::InvalidCurve(msg));
        match self {
            CurveSpec::Circle { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) || !is_finite(*center) {
                    return bad(format!("circle radius must be positive, got {radius}"));
                }
            }
            CurveSpec::Ellipse {
                center,
                semi_major,
                semi_minor,
                rotation,
            } => {
                let ok = semi_major.is_finite()
                    && semi_minor.is_finite()
                    && *semi_major > 0.0
                    && *semi_minor > 0.0
                    && rotation.is_finite()
                    && is_finite(*center);
                if !ok {
                    return bad(format!(
                        "ellipse semi-axes must be positive, got {semi_major}, {semi_minor}"
                    ));
                }
            }
            CurveSpec::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return bad(format!(
                        "polygon needs at least 3 vertices, got {}",
                        vertices.len()
                    ));
                }
                if vertices.iter().any(|v| !is_finite(*v)) {
                    return bad("polygon vertex is not finite".into());
                }
                let scale = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
                for (i, a) in vertices.iter().enumerate() {
                    for b in &vertices[i + 1..] {
                        if (a - b).norm() <= 1e-14 * scale {
                            return bad("polygon vertices must be distinct".into());
                        }
                    }
                }
                let (a, b) = (vertices[0], vertices[1]);
                if vertices[2..].iter().all(|&v| orient(a, b, v).abs() <= 1e-14 * scale * scale) {
                    return bad("polygon vertices are collinear".into());
                }
            }
            CurveSpec::Fourier {
                center,
                coefficients,
            } => {
                if coefficients.is_empty()
                    || coefficients.iter().any(|t| !is_finite(t.c))
                    || !is_finite(*center)
                {
                    return bad("fourier curve needs finite, non-empty coefficients".into());
                }
            }
        }
        Ok(())
    }

    /// Point at parameter `θ`. Polygons are parametrized uniformly per side.
    pub fn point(&self, theta: f64) -> Complex64 {
        match self {
            CurveSpec::Circle { center, radius } => center + Complex64::from_polar(*radius, theta),
            CurveSpec::Ellipse {
                center,
                semi_major,
                semi_minor,
                rotation,
            } => {
                let local = Complex64::new(semi_major * theta.cos(), semi_minor * theta.sin());
                center + Complex64::from_polar(1.0, *rotation) * local
            }
            CurveSpec::Polygon { vertices } => {
                let n = vertices.len();
                let s = theta.rem_euclid(TAU) / TAU * n as f64;
                let side = (s.floor() as usize).min(n - 1);
                let u = s - side as f64;
                let a = vertices[side];
                let b = vertices[(side + 1) % n];
                a + (b - a) * u
            }
            CurveSpec::Fourier {
                center,
                coefficients,
            } => {
                center
                    + coefficients
                        .iter()
                        .map(|t| t.c * Complex64::from_polar(1.0, t.k as f64 * theta))
                        .sum::<Complex64>()
            }
        }
    }

    /// `dz/dθ`; for polygons the derivative of the per-side parametrization.
    pub fn derivative(&self, theta: f64) -> Complex64 {
        match self {
            CurveSpec::Circle { radius, .. } => {
                Complex64::i() * Complex64::from_polar(*radius, theta)
            }
            CurveSpec::Ellipse {
                semi_major,
                semi_minor,
                rotation,
                ..
            } => {
                let local = Complex64::new(-semi_major * theta.sin(), semi_minor * theta.cos());
                Complex64::from_polar(1.0, *rotation) * local
            }
            CurveSpec::Polygon { vertices } => {
                let n = vertices.len();
                let s = theta.rem_euclid(TAU) / TAU * n as f64;
                let side = (s.floor() as usize).min(n - 1);
                (vertices[(side + 1) % n] - vertices[side]) * (n as f64 / TAU)
            }
            CurveSpec::Fourier { coefficients, .. } => coefficients
                .iter()
                .map(|t| {
                    Complex64::new(0.0, t.k as f64) * t.c * Complex64::from_polar(1.0, t.k as f64 * theta)
                })
                .sum(),
        }
    }

    /// Area enclosed by the curve, positive for counterclockwise traversal.
    pub fn signed_area(&self) -> f64 {
        match self {
            CurveSpec::Circle { radius, .. } => PI * radius * radius,
            CurveSpec::Ellipse {
                semi_major,
                semi_minor,
                ..
            } => PI * semi_major * semi_minor,
            CurveSpec::Polygon { vertices } => shoelace(vertices),
            CurveSpec::Fourier { .. } => {
                // ½∮ Im(z̄ dz)
                let integrand = |t: f64| 0.5 * (self.point(t).conj() * self.derivative(t)).im;
                periodic_trapezoid(integrand, QUADRATURE_TOLERANCE).0
            }
        }
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn length(&self) -> f64 {
        match self {
            CurveSpec::Circle { radius, .. } => TAU * radius,
            CurveSpec::Polygon { vertices } => polyline_length(vertices),
            CurveSpec::Ellipse { .. } | CurveSpec::Fourier { .. } => {
                periodic_trapezoid(|t| self.derivative(t).norm(), QUADRATURE_TOLERANCE).0
            }
        }
    }

    /// Centroid of the region the curve encloses.
    pub fn centroid(&self) -> Complex64 {
        match self {
            CurveSpec::Circle { center, .. }
            | CurveSpec::Ellipse { center, .. } => *center,
            CurveSpec::Polygon { vertices } => polygon_centroid(vertices),
            CurveSpec::Fourier { .. } => {
                // ∬ z dA = (1/2i) ∮ |z|² dz
                let re = periodic_trapezoid(
                    |t| {
                        let z = self.point(t);
                        (z.norm_sqr() * self.derivative(t) / Complex64::new(0.0, 2.0)).re
                    },
                    QUADRATURE_TOLERANCE,
                )
                .0;
                let im = periodic_trapezoid(
                    |t| {
                        let z = self.point(t);
                        (z.norm_sqr() * self.derivative(t) / Complex64::new(0.0, 2.0)).im
                    },
                    QUADRATURE_TOLERANCE,
                )
                .0;
                Complex64::new(re, im) / self.signed_area()
            }
        }
    }

    /// Largest distance from `c` to the curve.
    pub fn max_distance_from(&self, c: Complex64) -> f64 {
        match self {
            CurveSpec::Circle { center, radius } => (center - c).norm() + radius,
            CurveSpec::Polygon { vertices } => {
                vertices.iter().map(|v| (v - c).norm()).fold(0.0, f64::max)
            }
            _ => self
                .polyline(4 * VALIDATION_SAMPLES)
                .iter()
                .map(|z| (z - c).norm())
                .fold(0.0, f64::max),
        }
    }

    /// Mean distance from `c` to the curve, averaged over the parameter.
    pub fn mean_distance_from(&self, c: Complex64) -> f64 {
        match self {
            CurveSpec::Circle { center, radius } if (center - c).norm() == 0.0 => *radius,
            _ => {
                let pts = self.polyline(4 * VALIDATION_SAMPLES);
                pts.iter().map(|z| (z - c).norm()).sum::<f64>() / pts.len() as f64
            }
        }
    }

    /// Vertices of a closed polyline approximating the curve (polygons
    /// include their corners).
    pub fn polyline(&self, m: usize) -> Vec<Complex64> {
        match self {
            CurveSpec::Polygon { vertices } => polygon_nodes(vertices, m.max(vertices.len()))
                .into_iter()
                .map(|(z, _)| z)
                .collect(),
            _ => (0..m)
                .map(|j| self.point(TAU * j as f64 / m as f64))
                .collect(),
        }
    }

    /// Image of the curve under `z ↦ a·z + b`.
    pub fn transformed(&self, a: Complex64, b: Complex64) -> CurveSpec {
        let map = |z: Complex64| a * z + b;
        match self {
            CurveSpec::Circle { center, radius } => CurveSpec::Circle {
                center: map(*center),
                radius: a.norm() * radius,
            },
            CurveSpec::Ellipse {
                center,
                semi_major,
                semi_minor,
                rotation,
            } => CurveSpec::Ellipse {
                center: map(*center),
                semi_major: a.norm() * semi_major,
                semi_minor: a.norm() * semi_minor,
                rotation: rotation + a.arg(),
            },
            CurveSpec::Polygon { vertices } => CurveSpec::Polygon {
                vertices: vertices.iter().map(|v| map(*v)).collect(),
            },
            CurveSpec::Fourier {
                center,
                coefficients,
            } => CurveSpec::Fourier {
                center: map(*center),
                coefficients: coefficients
                    .iter()
                    .map(|t| FourierTerm { k: t.k, c: a * t.c })
                    .collect(),
            },
        }
    }
}

/// A bounded domain: the region inside `outer` and outside every hole.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub outer: CurveSpec,
    #[serde(default)]
    pub holes: Vec<CurveSpec>,
    #[serde(default)]
    pub label: String,
}

impl DomainSpec {
    pub fn new(outer: CurveSpec, holes: Vec<CurveSpec>, label: impl Into<String>) -> Self {
        DomainSpec {
            outer,
            holes,
            label: label.into(),
        }
    }

    pub fn disk(center: Complex64, radius: f64) -> Self {
        Self::new(CurveSpec::circle(center, radius), vec![], format!("disk(r={radius})"))
    }

    /// Concentric annulus `r_inner < |z − center| < r_outer`.
    pub fn annulus(center: Complex64, r_outer: f64, r_inner: f64) -> Self {
        Self::new(
            CurveSpec::circle(center, r_outer),
            vec![CurveSpec::circle(center, r_inner)],
            format!("annulus({r_outer},{r_inner})"),
        )
    }

    pub fn ellipse(semi_major: f64, semi_minor: f64) -> Self {
        Self::new(
            CurveSpec::ellipse(Complex64::new(0.0, 0.0), semi_major, semi_minor, 0.0),
            vec![],
            format!("ellipse({semi_major},{semi_minor})"),
        )
    }

    pub fn polygon(vertices: Vec<Complex64>) -> Self {
        Self::new(CurveSpec::polygon(vertices), vec![], "polygon")
    }

    /// Axis-aligned square of the given side length centered at `center`.
    pub fn square(center: Complex64, side: f64) -> Self {
        let h = side / 2.0;
        let vertices = [(-h, -h), (h, -h), (h, h), (-h, h)]
            .iter()
            .map(|&(x, y)| center + Complex64::new(x, y))
            .collect();
        Self::new(CurveSpec::polygon(vertices), vec![], format!("square({side})"))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// All boundary curves, outer first.
    pub fn components(&self) -> impl Iterator<Item = &CurveSpec> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    /// Checks curve parameters, simplicity, nesting and disjointness at
    /// [`VALIDATION_SAMPLES`] resolution.
    pub fn validate(&self) -> Result<(), GeometryError> {
        for curve in self.components() {
            curve.check_parameters()?;
        }
        let polylines: Vec<Vec<Complex64>> = self
            .components()
            .map(|c| c.polyline(VALIDATION_SAMPLES))
            .collect();
        for (curve, line) in self.components().zip(&polylines) {
            let hit = match curve {
                CurveSpec::Polygon { vertices } => polygon_self_intersects(vertices),
                _ => polyline_self_intersects(line),
            };
            if hit {
                return Err(GeometryError::SelfIntersecting(curve.kind().into()));
            }
        }
        let outer = &polylines[0];
        for (index, hole) in polylines[1..].iter().enumerate() {
            let inside = hole.iter().all(|z| winding_number(outer, *z) != 0);
            if !inside || polylines_cross(outer, hole) {
                return Err(GeometryError::HoleOutside { index });
            }
        }
        for i in 1..polylines.len() {
            for j in i + 1..polylines.len() {
                let (p, q) = (&polylines[i], &polylines[j]);
                if polylines_cross(p, q)
                    || winding_number(p, q[0]) != 0
                    || winding_number(q, p[0]) != 0
                {
                    return Err(GeometryError::HolesOverlap {
                        first: i - 1,
                        second: j - 1,
                    });
                }
            }
        }
        let area = self.outer.area() - self.holes.iter().map(CurveSpec::area).sum::<f64>();
        if area <= 0.0 {
            return Err(GeometryError::NonPositiveArea(area));
        }
        Ok(())
    }

    /// Whether `z` lies in the open domain, judged on sampled polylines.
    pub fn contains(&self, z: Complex64) -> bool {
        let m = 4 * VALIDATION_SAMPLES;
        winding_number(&self.outer.polyline(m), z) != 0
            && self
                .holes
                .iter()
                .all(|h| winding_number(&h.polyline(m), z) == 0)
    }
}

pub fn connectivity(domain: &DomainSpec) -> usize {
    1 + domain.holes.len()
}

/// Area of the outer region minus the areas of the holes.
pub fn area(domain: &DomainSpec) -> Result<f64, GeometryError> {
    domain.validate()?;
    Ok(domain.outer.area() - domain.holes.iter().map(CurveSpec::area).sum::<f64>())
}

/// Total length of all boundary components.
pub fn perimeter(domain: &DomainSpec) -> Result<f64, GeometryError> {
    domain.validate()?;
    Ok(domain.components().map(CurveSpec::length).sum())
}

/// Image of the domain under `z ↦ a·z + b`.
pub fn transform(domain: &DomainSpec, a: Complex64, b: Complex64) -> Result<DomainSpec, GeometryError> {
    if a.norm() == 0.0 || !is_finite(a) || !is_finite(b) {
        return Err(GeometryError::InvalidTransform);
    }
    Ok(DomainSpec {
        outer: domain.outer.transformed(a, b),
        holes: domain.holes.iter().map(|h| h.transformed(a, b)).collect(),
        label: domain.label.clone(),
    })
}

/// Quadrature nodes on the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySampling {
    pub points: Vec<Complex64>,
    /// Arc-length weights; summed over a component they give its length.
    pub weights: Vec<f64>,
    /// 0 for the outer curve, `1 + i` for hole `i`.
    pub component: Vec<usize>,
    /// Unit tangents along the normalized orientation.
    pub tangents: Vec<Complex64>,
    /// Curve parameter `θ ∈ [0, 2π)` of each point.
    pub params: Vec<f64>,
}

impl BoundarySampling {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.component.iter().max().map_or(0, |m| m + 1)
    }

    /// Sum of weights on component `k`.
    pub fn component_length(&self, k: usize) -> f64 {
        self.component
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| **c == k)
            .map(|(_, w)| w)
            .sum()
    }

    /// The samples belonging to component `k` only.
    pub fn component_subset(&self, k: usize) -> BoundarySampling {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.component[i] == k).collect();
        BoundarySampling {
            points: keep.iter().map(|&i| self.points[i]).collect(),
            weights: keep.iter().map(|&i| self.weights[i]).collect(),
            component: keep.iter().map(|&i| self.component[i]).collect(),
            tangents: keep.iter().map(|&i| self.tangents[i]).collect(),
            params: keep.iter().map(|&i| self.params[i]).collect(),
        }
    }
}

/// Samples every boundary component with `points_per_component` nodes.
///
/// Smooth curves get nodes equispaced in `θ` with weights `|z'(θ)|·2π/m`;
/// polygons get nodes graded toward their corners with polyline trapezoid
/// weights, which sum to the exact perimeter.
pub fn sample_boundary(
    domain: &DomainSpec,
    points_per_component: usize,
) -> Result<BoundarySampling, GeometryError> {
    if points_per_component < MIN_SAMPLES_PER_COMPONENT {
        return Err(GeometryError::TooFewSamples {
            min: MIN_SAMPLES_PER_COMPONENT,
            got: points_per_component,
        });
    }
    domain.validate()?;
    let mut out = BoundarySampling {
        points: vec![],
        weights: vec![],
        component: vec![],
        tangents: vec![],
        params: vec![],
    };
    for (k, curve) in domain.components().enumerate() {
        let mut nodes = sample_curve(curve, points_per_component);
        let counterclockwise = curve.signed_area() > 0.0;
        let want_ccw = k == 0;
        if counterclockwise != want_ccw {
            nodes.reverse();
            for node in &mut nodes {
                node.tangent = -node.tangent;
            }
        }
        for node in nodes {
            out.points.push(node.z);
            out.weights.push(node.weight);
            out.component.push(k);
            out.tangents.push(node.tangent);
            out.params.push(node.theta);
        }
    }
    Ok(out)
}

struct Node {
    z: Complex64,
    weight: f64,
    tangent: Complex64,
    theta: f64,
}

fn sample_curve(curve: &CurveSpec, m: usize) -> Vec<Node> {
    match curve {
        CurveSpec::Polygon { vertices } => {
            let nodes = polygon_nodes(vertices, m);
            let n = nodes.len();
            let sides = vertices.len();
            (0..n)
                .map(|i| {
                    let prev = nodes[(i + n - 1) % n].0;
                    let next = nodes[(i + 1) % n].0;
                    let (z, theta) = nodes[i];
                    let weight = 0.5 * ((z - prev).norm() + (next - z).norm());
                    let s = theta / TAU * sides as f64;
                    let side = (s.floor() as usize).min(sides - 1);
                    let on_vertex = (s - side as f64).abs() < 1e-12;
                    let dir = |v: Complex64| v / v.norm();
                    let out_dir = dir(vertices[(side + 1) % sides] - vertices[side]);
                    let tangent = if on_vertex {
                        let in_dir = dir(vertices[side] - vertices[(side + sides - 1) % sides]);
                        dir(in_dir + out_dir)
                    } else {
                        out_dir
                    };
                    Node {
                        z,
                        weight,
                        tangent,
                        theta,
                    }
                })
                .collect()
        }
        _ => (0..m)
            .map(|j| {
                let theta = TAU * j as f64 / m as f64;
                let d = curve.derivative(theta);
                Node {
                    z: curve.point(theta),
                    weight: d.norm() * TAU / m as f64,
                    tangent: d / d.norm(),
                    theta,
                }
            })
            .collect(),
    }
}

/// Polygon nodes with the corner at the start of each side and a cosine
/// grading toward both ends. Side allocation is proportional to length
/// (largest remainder, at least one node per side). Returns `(z, θ)` pairs
/// where `θ = 2π·(side + u)/sides`.
fn polygon_nodes(vertices: &[Complex64], m: usize) -> Vec<(Complex64, f64)> {
    let sides = vertices.len();
    let m = m.max(sides);
    let lengths: Vec<f64> = (0..sides)
        .map(|s| (vertices[(s + 1) % sides] - vertices[s]).norm())
        .collect();
    let total: f64 = lengths.iter().sum();
    let spare = m - sides;
    let quotas: Vec<f64> = lengths.iter().map(|l| l / total * spare as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| 1 + q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..sides).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let assigned: usize = counts.iter().sum();
    for &s in order.iter().take(m - assigned) {
        counts[s] += 1;
    }
    let mut nodes = Vec::with_capacity(m);
    for s in 0..sides {
        let a = vertices[s];
        let b = vertices[(s + 1) % sides];
        let k = counts[s];
        for j in 0..k {
            let u = 0.5 * (1.0 - (PI * j as f64 / k as f64).cos());
            nodes.push((a + (b - a) * u, TAU * (s as f64 + u) / sides as f64));
        }
    }
    nodes
}

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn shoelace(vertices: &[Complex64]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
}

fn polyline_length(vertices: &[Complex64]) -> f64 {
    let n = vertices.len();
    (0..n).map(|i| (vertices[(i + 1) % n] - vertices[i]).norm()).sum()
}

fn polygon_centroid(vertices: &[Complex64]) -> Complex64 {
    let n = vertices.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        acc += (a + b) * (a.re * b.im - b.re * a.im);
    }
    acc / (6.0 * shoelace(vertices))
}

/// Winding number of a closed polyline around `z`.
pub(crate) fn winding_number(poly: &[Complex64], z: Complex64) -> i32 {
    let n = poly.len();
    let mut winding = 0;
    for i in 0..n {
        let a = poly[i] - z;
        let b = poly[(i + 1) % n] - z;
        let cross = a.re * b.im - a.im * b.re;
        if a.im <= 0.0 {
            if b.im > 0.0 && cross > 0.0 {
                winding += 1;
            }
        } else if b.im <= 0.0 && cross < 0.0 {
            winding -= 1;
        }
    }
    winding
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let u = b - a;
    let v = c - a;
    u.re * v.im - u.im * v.re
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn polyline_self_intersects(poly: &[Complex64]) -> bool {
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(a, b, poly[j], poly[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}

fn on_segment(p: Complex64, a: Complex64, b: Complex64) -> bool {
    orient(a, b, p) == 0.0
        && p.re >= a.re.min(b.re)
        && p.re <= a.re.max(b.re)
        && p.im >= a.im.min(b.im)
        && p.im <= a.im.max(b.im)
}

/// Exact vertex-level check: non-adjacent edges may not cross or touch.
fn polygon_self_intersects(v: &[Complex64]) -> bool {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (v[j], v[(j + 1) % n]);
            if segments_cross(a, b, c, d)
                || on_segment(c, a, b)
                || on_segment(d, a, b)
                || on_segment(a, c, d)
                || on_segment(b, c, d)
            {
                return true;
            }
        }
    }
    false
}

fn polylines_cross(p: &[Complex64], q: &[Complex64]) -> bool {
    let (n, m) = (p.len(), q.len());
    (0..n).any(|i| {
        let (a, b) = (p[i], p[(i + 1) % n]);
        (0..m).any(|j| segments_cross(a, b, q[j], q[(j + 1) % m]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_square() -> DomainSpec {
        DomainSpec::polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)])
    }

    #[test]
    fn closed_form_areas() {
        let ann = DomainSpec::annulus(c(0.0, 0.0), 2.0, 1.0);
        assert!((area(&ann).unwrap() - 3.0 * PI).abs() < 1e-14);
        assert!((area(&unit_square()).unwrap() - 1.0).abs() < 1e-15);
        assert!((area(&DomainSpec::ellipse(2.0, 1.0)).unwrap() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn closed_form_perimeters() {
        let ann = DomainSpec::annulus(c(0.0, 0.0), 2.0, 1.0);
        assert!((perimeter(&ann).unwrap() - 6.0 * PI).abs() < 1e-13);
        assert!((perimeter(&unit_square()).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn clockwise_polygon_has_same_measures() {
        let cw = DomainSpec::polygon(vec![c(0.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(1.0, 0.0)]);
        assert!((area(&cw).unwrap() - 1.0).abs() < 1e-15);
        let s = sample_boundary(&cw, 16).unwrap();
        let signed: f64 = s
            .points
            .iter()
            .zip(&s.weights)
            .zip(&s.tangents)
            .map(|((z, w), t)| 0.5 * (z.conj() * t).im * w)
            .sum();
        assert!(signed > 0.0, "outer boundary must come out counterclockwise");
    }

    #[test]
    fn connectivity_counts_holes() {
        let disk = DomainSpec::disk(c(0.0, 0.0), 1.0);
        assert_eq!(connectivity(&disk), 1);
        assert_eq!(connectivity(&DomainSpec::annulus(c(0.0, 0.0), 2.0, 1.0)), 2);
        let two = DomainSpec::new(
            CurveSpec::circle(c(0.0, 0.0), 3.0),
            vec![CurveSpec::circle(c(1.5, 0.0), 1.0), CurveSpec::circle(c(-1.5, 0.0), 1.0)],
            "two holes",
        );
        assert_eq!(connectivity(&two), 3);
    }

    #[test]
    fn disk_four_samples() {
        let s = sample_boundary(&DomainSpec::disk(c(0.0, 0.0), 1.0), 4).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (z, e) in s.points.iter().zip(expected) {
            assert!((z - e).norm() < 1e-15);
        }
        for w in &s.weights {
            assert!((w - PI / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn annulus_sampling_counts_and_hole_orientation() {
        let s = sample_boundary(&DomainSpec::annulus(c(0.0, 0.0), 2.0, 1.0), 256).unwrap();
        assert_eq!(s.len(), 512);
        assert_eq!(s.component_count(), 2);
        // Hole traversed clockwise: tangent is -i·z on the unit circle.
        let i = s.component.iter().position(|&k| k == 1).unwrap();
        assert!((s.tangents[i] - (-Complex64::i() * s.points[i])).norm() < 1e-12);
    }

    #[test]
    fn polygon_weights_sum_to_perimeter() {
        let s = sample_boundary(&unit_square(), 16).unwrap();
        assert_eq!(s.len(), 16);
        assert!((s.component_length(0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn polygon_nodes_include_corners() {
        let s = sample_boundary(&unit_square(), 32).unwrap();
        for v in [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)] {
            assert!(s.points.iter().any(|z| (z - v).norm() < 1e-15));
        }
    }

    #[test]
    fn too_few_samples_rejected() {
        let err = sample_boundary(&unit_square(), 3).unwrap_err();
        assert_eq!(err, GeometryError::TooFewSamples { min: 4, got: 3 });
    }

    #[test]
    fn transform_examples() {
        let ann = DomainSpec::annulus(c(0.0, 0.0), 2.0, 1.0);
        let t = transform(&ann, c(0.0, 2.0), c(0.0, 0.0)).unwrap();
        assert_eq!(t.outer, CurveSpec::circle(c(0.0, 0.0), 4.0));
        assert_eq!(t.holes[0], CurveSpec::circle(c(0.0, 0.0), 2.0));

        let disk = DomainSpec::disk(c(0.0, 0.0), 1.0);
        let t = transform(&disk, c(1.0, 0.0), c(3.0, -2.0)).unwrap();
        assert_eq!(t.outer, CurveSpec::circle(c(3.0, -2.0), 1.0));

        let e = transform(&DomainSpec::ellipse(2.0, 1.0), c(1.0, 1.0), c(0.0, 0.0)).unwrap();
        assert!((area(&e).unwrap() - 4.0 * PI).abs() < 1e-12);
        match e.outer {
            CurveSpec::Ellipse { rotation, .. } => assert!((rotation - PI / 4.0).abs() < 1e-15),
            _ => unreachable!(),
        }
    }

    #[test]
    fn zero_scale_transform_rejected() {
        let disk = DomainSpec::disk(c(0.0, 0.0), 1.0);
        assert_eq!(
            transform(&disk, c(0.0, 0.0), c(1.0, 0.0)).unwrap_err(),
            GeometryError::InvalidTransform
        );
    }

    #[test]
    fn validation_errors() {
        let outside = DomainSpec::new(
            CurveSpec::circle(c(0.0, 0.0), 1.0),
            vec![CurveSpec::circle(c(3.0, 0.0), 0.5)],
            "",
        );
        assert_eq!(area(&outside).unwrap_err(), GeometryError::HoleOutside { index: 0 });

        let crossing = DomainSpec::new(
            CurveSpec::circle(c(0.0, 0.0), 1.0),
            vec![CurveSpec::circle(c(0.8, 0.0), 0.5)],
            "",
        );
        assert_eq!(area(&crossing).unwrap_err(), GeometryError::HoleOutside { index: 0 });

        let overlapping = DomainSpec::new(
            CurveSpec::circle(c(0.0, 0.0), 5.0),
            vec![CurveSpec::circle(c(0.5, 0.0), 1.0), CurveSpec::circle(c(-0.5, 0.0), 1.0)],
            "",
        );
        assert_eq!(
            area(&overlapping).unwrap_err(),
            GeometryError::HolesOverlap { first: 0, second: 1 }
        );

        let nested = DomainSpec::new(
            CurveSpec::circle(c(0.0, 0.0), 5.0),
            vec![CurveSpec::circle(c(0.0, 0.0), 2.0), CurveSpec::circle(c(0.0, 0.0), 1.0)],
            "",
        );
        assert!(matches!(area(&nested), Err(GeometryError::HolesOverlap { .. })));

        let bowtie = DomainSpec::polygon(vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)]);
        assert!(matches!(area(&bowtie), Err(GeometryError::SelfIntersecting(_))));

        let collinear = DomainSpec::polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(matches!(area(&collinear), Err(GeometryError::InvalidCurve(_))));

        assert!(matches!(
            area(&DomainSpec::disk(c(0.0, 0.0), -1.0)),
            Err(GeometryError::InvalidCurve(_))
        ));
    }

    #[test]
    fn fourier_area_matches_mode_sum() {
        // π Σ k|c_k|² for z = e^{iθ} + 0.2 e^{-2iθ}
        let curve = CurveSpec::fourier(
            c(0.5, 0.0),
            vec![
                FourierTerm { k: 1, c: c(1.0, 0.0) },
                FourierTerm { k: -2, c: c(0.0, 0.2) },
            ],
        );
        let expected = PI * (1.0 - 2.0 * 0.04);
        assert!((curve.area() - expected).abs() < 1e-12);
        assert!((curve.centroid() - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn contains_respects_holes() {
        let ann = DomainSpec::annulus(c(0.0, 0.0), 2.0, 1.0);
        assert!(ann.contains(c(1.5, 0.0)));
        assert!(!ann.contains(c(0.5, 0.0)));
        assert!(!ann.contains(c(2.5, 0.0)));
    }
}
