//! Closed-form and single-equation solvers for the named shapes.
//!
//! Each solver is independent of the general engine in the parent module
//! so the two can be compared.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::moments::{surface_moments, volume_and_area, MaterialSpec};
use crate::profile::{Profile, ProfileKind};
use crate::roots::{brent, Stopping};

use super::Method;

/// Lowest fill level for a cylinder with shell mass `M`, fill mass `m` and
/// height `H`: `(MH/m)(sqrt(1 + m/M) - 1)`.
///
/// Evaluated as `H / (sqrt(1 + m/M) + 1)`, the same quantity without the
/// cancellation for small `m/M`. The limits are `H/2` as `m → 0` and `0`
/// as `M → 0`.
pub fn closed_form_cylinder(shell_mass: f64, fill_mass: f64, height: f64) -> f64 {
    height / ((1.0 + fill_mass / shell_mass).sqrt() + 1.0)
}

/// The printed form `(MH/m)(sqrt(1 + m/M) - 1)`, kept for comparison.
pub fn closed_form_cylinder_printed(shell_mass: f64, fill_mass: f64, height: f64) -> f64 {
    shell_mass * height / fill_mass * ((1.0 + fill_mass / shell_mass).sqrt() - 1.0)
}

fn refine<F>(f: F, hi: f64, scale: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let f_lo = f(0.0);
    let f_hi = f(hi);
    let x_tol = (1e-3 * tol).min(1e-14) * scale;
    let root = brent(|x| Ok(f(x)), 0.0, hi, f_lo, f_hi, Stopping::width(x_tol))?;
    Ok(root.x)
}

/// Root in `[0, H]` of `4m h³ + 12 M H² h - 9 M H³ = 0`.
///
/// Solved in `u = h/H`, so the result scales exactly with `H`.
pub fn solve_cone_cubic(shell_mass: f64, fill_mass: f64, height: f64) -> Result<f64> {
    if !(shell_mass > 0.0 && fill_mass >= 0.0 && height > 0.0) {
        return Err(Error::domain(format!(
            "cone cubic needs M > 0, m >= 0, H > 0 (M = {shell_mass}, m = {fill_mass}, H = {height})"
        )));
    }
    let cubic = |u: f64| 4.0 * fill_mass * u * u * u + 12.0 * shell_mass * u - 9.0 * shell_mass;
    Ok(height * refine(cubic, 1.0, 1.0, 1e-15)?)
}

/// Root in `[0, H]` of `α S0 h - α S1 + π β h^(2p+2) / ((2p+1)(2p+2)) = 0`
/// for the power profile `g(z) = z^p`.
pub fn solve_power_equation(exponent: f64, height: f64, material: &MaterialSpec, tol: f64) -> Result<f64> {
    material.validate()?;
    let profile = Profile::power(exponent, height)?;
    let surface = surface_moments(&profile, tol)?;
    let MaterialSpec { alpha, beta } = *material;
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let a = 2.0 * exponent + 1.0;
    let denom = a * (a + 1.0);
    let eq = |h: f64| alpha * surface.s0 * h - alpha * surface.s1 + PI * beta * h.powf(a + 1.0) / denom;
    refine(eq, height, height, tol)
}

/// Root in `[0, 2R]` of
/// `4αR³ + β(2Rh³/3 - h⁴/4) - 4αR²h - β(Rh² - h³/3)h = 0`.
pub fn solve_sphere_quartic(radius: f64, material: &MaterialSpec, tol: f64) -> Result<f64> {
    check_quartic_inputs(radius, material)?;
    let MaterialSpec { alpha, beta } = *material;
    let r = radius;
    let quartic = |h: f64| {
        4.0 * alpha * r.powi(3) + beta * (2.0 * r * h.powi(3) / 3.0 - h.powi(4) / 4.0)
            - 4.0 * alpha * r * r * h
            - beta * (r * h * h - h.powi(3) / 3.0) * h
    };
    if alpha == 0.0 {
        return Ok(0.0);
    }
    refine(quartic, 2.0 * r, r, tol)
}

/// Root in `[0, R]` of
/// `αR³ + β(2Rh³/3 - h⁴/4) - 2αR²h - β(Rh² - h³/3)h = 0`.
pub fn solve_half_sphere_quartic(radius: f64, material: &MaterialSpec, tol: f64) -> Result<f64> {
    check_quartic_inputs(radius, material)?;
    let MaterialSpec { alpha, beta } = *material;
    let r = radius;
    let quartic = |h: f64| {
        alpha * r.powi(3) + beta * (2.0 * r * h.powi(3) / 3.0 - h.powi(4) / 4.0)
            - 2.0 * alpha * r * r * h
            - beta * (r * h * h - h.powi(3) / 3.0) * h
    };
    if alpha == 0.0 {
        return Ok(0.0);
    }
    refine(quartic, r, r, tol)
}

fn check_quartic_inputs(radius: f64, material: &MaterialSpec) -> Result<()> {
    material.validate()?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {radius}")));
    }
    if !(material.beta > 0.0) {
        return Err(Error::InvalidMaterial("quartic solvers need beta > 0".into()));
    }
    Ok(())
}

/// Shell density that puts the lowest point of a sphere at fill level `h`:
/// `α = (β / 48R²) h³ (4R - h) / (R - h)`, for `0 <= h < R`.
pub fn alpha_from_h_sphere(h: f64, radius: f64, beta: f64) -> Result<f64> {
    if !(h >= 0.0 && h < radius) {
        return Err(Error::domain(format!("sphere inversion needs 0 <= h < R (h = {h}, R = {radius})")));
    }
    Ok(beta / (48.0 * radius * radius) * h.powi(3) * (4.0 * radius - h) / (radius - h))
}

/// Half-sphere counterpart: `α = (β / 12R²)(h⁴ - 4Rh³) / (2h - R)`, for
/// `0 <= h < R/2`.
pub fn alpha_from_h_half_sphere(h: f64, radius: f64, beta: f64) -> Result<f64> {
    if !(h >= 0.0 && h < 0.5 * radius) {
        return Err(Error::domain(format!(
            "half-sphere inversion needs 0 <= h < R/2 (h = {h}, R = {radius})"
        )));
    }
    Ok(beta / (12.0 * radius * radius) * (h.powi(4) - 4.0 * radius * h.powi(3)) / (2.0 * h - radius))
}

/// The dedicated solver for `profile`, if it has one.
pub fn special_case(profile: &Profile, material: &MaterialSpec, tol: f64) -> Result<Option<(Method, f64)>> {
    material.validate()?;
    let h = profile.height();
    Ok(match profile.kind() {
        ProfileKind::Cylinder { .. } => {
            let surface = surface_moments(profile, tol)?;
            let (volume, _) = volume_and_area(profile, tol)?;
            let shell = material.alpha * surface.s0;
            let fill = material.beta * volume;
            Some((Method::CylinderClosedForm, closed_form_cylinder(shell, fill, h)))
        }
        ProfileKind::Power { exponent } => {
            Some((Method::PowerEquation, solve_power_equation(*exponent, h, material, tol)?))
        }
        ProfileKind::Sphere { radius } if material.beta > 0.0 => {
            Some((Method::SphereQuartic, solve_sphere_quartic(*radius, material, tol)?))
        }
        ProfileKind::HalfSphere { radius } if material.beta > 0.0 => {
            Some((Method::HalfSphereQuartic, solve_half_sphere_quartic(*radius, material, tol)?))
        }
        _ => None,
    })
}
