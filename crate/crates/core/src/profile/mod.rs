//! Generating curves `g(z)` on `[0, H]`.
//!
//! A solid of revolution is obtained by rotating the region
//! `0 <= x <= g(z), 0 <= z <= H` about the vertical axis. Positivity of `g`
//! is required on the open interval only, so cones, power solids and
//! spheres, which pinch to a point at one or both ends, are admissible.

mod expr;
mod parser;

use std::collections::BTreeMap;

pub use expr::ExprAst;
pub use parser::parse_expression;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExpressionProfile {
    source: String,
    ast: ExprAst,
    derivative: ExprAst,
}

impl ExpressionProfile {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &ExprAst {
        &self.ast
    }

    pub fn derivative(&self) -> &ExprAst {
        &self.derivative
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Cylinder { radius: f64 },
    /// Vertex at `z = 0`, radius `top_radius` at `z = H`.
    Cone { top_radius: f64 },
    /// `g(z) = z^exponent`.
    Power { exponent: f64 },
    /// Centred at `z = R`; `H = 2R`.
    Sphere { radius: f64 },
    /// Lower half of the sphere centred at `z = R`; `H = R`.
    HalfSphere { radius: f64 },
    Expression(ExpressionProfile),
    /// `(z, g)` nodes, linearly interpolated.
    Tabulated { points: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    height: f64,
    kind: ProfileKind,
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {value}")))
    }
}

impl Profile {
    pub fn cylinder(radius: f64, height: f64) -> Result<Self> {
        check_positive("radius", radius)?;
        check_positive("height", height)?;
        Ok(Self { height, kind: ProfileKind::Cylinder { radius } })
    }

    pub fn cone(top_radius: f64, height: f64) -> Result<Self> {
        check_positive("top radius", top_radius)?;
        check_positive("height", height)?;
        Ok(Self { height, kind: ProfileKind::Cone { top_radius } })
    }

    pub fn power(exponent: f64, height: f64) -> Result<Self> {
        check_positive("exponent", exponent)?;
        check_positive("height", height)?;
        Ok(Self { height, kind: ProfileKind::Power { exponent } })
    }

    pub fn sphere(radius: f64) -> Result<Self> {
        check_positive("radius", radius)?;
        Ok(Self { height: 2.0 * radius, kind: ProfileKind::Sphere { radius } })
    }

    pub fn half_sphere(radius: f64) -> Result<Self> {
        check_positive("radius", radius)?;
        Ok(Self { height: radius, kind: ProfileKind::HalfSphere { radius } })
    }

    /// Piecewise-linear profile through `points`. The first node must sit at
    /// `z = 0`; the last one defines `H`.
    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("tabulated profile needs at least two points"));
        }
        if points.iter().any(|(z, g)| !z.is_finite() || !g.is_finite()) {
            return Err(Error::domain("tabulated points must be finite"));
        }
        if points[0].0 != 0.0 {
            return Err(Error::domain(format!(
                "tabulated profile must start at z = 0, starts at {}",
                points[0].0
            )));
        }
        if let Some(w) = points.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(Error::domain(format!(
                "tabulated z values must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
        let last = points.len() - 1;
        for (i, &(z, g)) in points.iter().enumerate() {
            let interior = i != 0 && i != last;
            if g < 0.0 || (interior && g == 0.0) {
                return Err(Error::domain(format!(
                    "g must be non-negative, and positive inside (0, H); g({z}) = {g}"
                )));
            }
        }
        let height = points[last].0;
        Ok(Self { height, kind: ProfileKind::Tabulated { points } })
    }

    /// Expression profile with named constants bound from `constants`.
    pub fn expression(text: &str, height: f64, constants: &BTreeMap<String, f64>) -> Result<Self> {
        check_positive("height", height)?;
        let ast = parse_expression(text, constants)?;
        let probe = ast.eval(0.5 * height);
        if !probe.is_finite() || probe < 0.0 {
            return Err(Error::domain(format!(
                "g({}) = {probe}: profile must be finite and non-negative",
                0.5 * height
            )));
        }
        let derivative = ast.derivative();
        Ok(Self {
            height,
            kind: ProfileKind::Expression(ExpressionProfile {
                source: text.to_string(),
                ast,
                derivative,
            }),
        })
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// Interior points where `g` is not smooth. Quadrature splits there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            ProfileKind::Tabulated { points } => {
                points[1..points.len() - 1].iter().map(|p| p.0).collect()
            }
            _ => Vec::new(),
        }
    }

    fn check_z(&self, z: f64) -> Result<f64> {
        // Absorb rounding from quadrature node placement.
        let slop = 1e-12 * self.height;
        if z.is_nan() || z < -slop || z > self.height + slop {
            return Err(Error::domain(format!("z = {z} outside [0, {}]", self.height)));
        }
        Ok(z.clamp(0.0, self.height))
    }

    pub fn eval_g(&self, z: f64) -> Result<f64> {
        let z = self.check_z(z)?;
        let g = match &self.kind {
            ProfileKind::Cylinder { radius } => *radius,
            ProfileKind::Cone { top_radius } => top_radius * z / self.height,
            ProfileKind::Power { exponent } => z.powf(*exponent),
            ProfileKind::Sphere { radius } | ProfileKind::HalfSphere { radius } => {
                // sqrt(R^2 - (R - z)^2) without cancellation near the poles
                (z * (2.0 * radius - z)).max(0.0).sqrt()
            }
            ProfileKind::Expression(e) => e.ast.eval(z),
            ProfileKind::Tabulated { points } => interpolate(points, z),
        };
        if !g.is_finite() {
            return Err(Error::domain(format!("g({z}) is not finite")));
        }
        Ok(g)
    }

    pub fn eval_g_prime(&self, z: f64) -> Result<f64> {
        let z = self.check_z(z)?;
        let unbounded = || Error::domain(format!("g'(z) is unbounded at z = {z}"));
        let slope = match &self.kind {
            ProfileKind::Cylinder { .. } => 0.0,
            ProfileKind::Cone { top_radius } => top_radius / self.height,
            ProfileKind::Power { exponent: p } => {
                if z == 0.0 {
                    match p.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Less) => return Err(unbounded()),
                        Some(std::cmp::Ordering::Equal) => 1.0,
                        _ => 0.0,
                    }
                } else {
                    p * z.powf(p - 1.0)
                }
            }
            ProfileKind::Sphere { radius } | ProfileKind::HalfSphere { radius } => {
                let g = (z * (2.0 * radius - z)).max(0.0).sqrt();
                if g == 0.0 {
                    return Err(unbounded());
                }
                (radius - z) / g
            }
            ProfileKind::Expression(e) => e.derivative.eval(z),
            ProfileKind::Tabulated { points } => {
                let step = f64::EPSILON.cbrt() * self.height;
                let lo = (z - step).max(0.0);
                let hi = (z + step).min(self.height);
                (interpolate(points, hi) - interpolate(points, lo)) / (hi - lo)
            }
        };
        if !slope.is_finite() {
            return Err(unbounded());
        }
        Ok(slope)
    }

    /// Surface-moment integrand `g(z) * sqrt(1 + g'(z)^2)`.
    ///
    /// Spheres return exactly `R`; power profiles use
    /// `sqrt(z^(2p) + p^2 z^(4p-2))`, which stays finite at `z = 0` whenever
    /// the true value does.
    pub fn arc_integrand(&self, z: f64) -> Result<f64> {
        let z = self.check_z(z)?;
        let value = match &self.kind {
            ProfileKind::Sphere { radius } | ProfileKind::HalfSphere { radius } => *radius,
            ProfileKind::Cylinder { radius } => *radius,
            ProfileKind::Cone { top_radius } => {
                let slope = top_radius / self.height;
                slope * z * (1.0 + slope * slope).sqrt()
            }
            ProfileKind::Power { exponent: p } => {
                (z.powf(2.0 * p) + p * p * z.powf(4.0 * p - 2.0)).sqrt()
            }
            ProfileKind::Expression(_) | ProfileKind::Tabulated { .. } => {
                let g = self.eval_g(z)?;
                let slope = self.eval_g_prime(z)?;
                g * (1.0 + slope * slope).sqrt()
            }
        };
        if !value.is_finite() {
            return Err(Error::domain(format!(
                "surface integrand is unbounded at z = {z}"
            )));
        }
        Ok(value)
    }
}

fn interpolate(points: &[(f64, f64)], z: f64) -> f64 {
    let idx = points.partition_point(|p| p.0 <= z);
    if idx == 0 {
        return points[0].1;
    }
    if idx >= points.len() {
        return points[points.len() - 1].1;
    }
    let (z0, g0) = points[idx - 1];
    let (z1, g1) = points[idx];
    g0 + (g1 - g0) * (z - z0) / (z1 - z0)
}

/// Parses `text` as an expression profile on `[0, height]` with no bound
/// constants.
pub fn parse_profile(text: &str, height: f64) -> Result<Profile> {
    Profile::expression(text, height, &BTreeMap::new())
}
