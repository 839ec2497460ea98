//! Center of gravity `T(h) = m1(h) / m0(h)` of a partially filled container
//! and the fill level at which it is lowest.
//!
//! Every model satisfies `T'(h) = -(m0'(h) / m0(h)) (T(h) - h)`, so `T`
//! decreases while the center of gravity is above the fill surface and
//! increases once it is below. The lowest point is therefore the unique
//! root of `F(h) = h m0(h) - m1(h)`, where `T(h) = h`.

mod model;
mod special;

use serde::{Deserialize, Serialize};

pub use model::{
    cog_mass_form, cone_cog, cylinder_cog, MassFormModel, MassFormShape, MassMoments, MomentModel,
    SolidModel,
};
pub use special::{
    alpha_from_h_half_sphere, alpha_from_h_sphere, closed_form_cylinder, closed_form_cylinder_printed,
    solve_cone_cubic, solve_half_sphere_quartic, solve_power_equation, solve_sphere_quartic,
    special_case,
};

use crate::error::{Error, Result};
use crate::roots::{brent, golden_section, Stopping, DEFAULT_MAX_ITERATIONS};
use model::check_level;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GeneralBracketed,
    CylinderClosedForm,
    ConeCubic,
    PowerEquation,
    SphereQuartic,
    HalfSphereQuartic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::GeneralBracketed => "general_bracketed",
            Method::CylinderClosedForm => "cylinder_closed_form",
            Method::ConeCubic => "cone_cubic",
            Method::PowerEquation => "power_equation",
            Method::SphereQuartic => "sphere_quartic",
            Method::HalfSphereQuartic => "half_sphere_quartic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub h_star: f64,
    #[serde(rename = "T_star")]
    pub t_star: f64,
    /// `|T(h*) - h*|`.
    pub fixed_point_residual: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub method: Method,
}

/// Center of gravity height at fill level `h`.
///
/// With a massless shell the empty container has no mass at all; `T(0)` is
/// then taken as its limit `0`.
pub fn cog<M: MomentModel + ?Sized>(model: &M, h: f64) -> Result<f64> {
    let MassMoments { m0, m1 } = model.masses(h)?;
    if m0 <= 0.0 {
        if h == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::InvalidMaterial(format!("zero total mass at h = {h}")));
    }
    Ok(m1 / m0)
}

/// `T'(h) = m0'(h) (h m0(h) - m1(h)) / m0(h)²`, valid up to and including
/// the endpoints whenever `m0(h) > 0`.
pub(crate) fn slope<M: MomentModel + ?Sized>(model: &M, h: f64) -> Result<f64> {
    let MassMoments { m0, m1 } = model.masses(h)?;
    if m0 <= 0.0 {
        return Err(Error::InvalidMaterial(format!("zero total mass at h = {h}")));
    }
    let rate = model.mass_rate(h)?;
    Ok(rate * (h * m0 - m1) / (m0 * m0))
}

fn check_interior(height: f64, h: f64) -> Result<()> {
    if !(h > 0.0 && h < height) {
        return Err(Error::domain(format!("h must lie in (0, H): h = {h}, H = {height}")));
    }
    Ok(())
}

/// `dT/dh` on the open interval `(0, H)`.
pub fn cog_derivative<M: MomentModel + ?Sized>(model: &M, h: f64) -> Result<f64> {
    check_interior(model.height(), h)?;
    slope(model, h)
}

/// Finds the fill level where the center of gravity lies on the fill
/// surface, `T(h*) = h*`, with `|T(h*) - h*| <= tol`.
///
/// Degenerate cases: a massless shell (`m0(0) = 0`) gives `h* = 0`; a
/// weightless fill gives the constant `T = S1/S0`, which is its own fixed
/// point.
pub fn solve_fixed_point<M: MomentModel + ?Sized>(model: &M, tol: f64) -> Result<EquilibriumResult> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let height = model.height();
    let at_boundary = |h: f64, residual: f64| EquilibriumResult {
        h_star: h,
        t_star: h - residual,
        fixed_point_residual: residual.abs(),
        bracket: (h, h),
        iterations: 0,
        method: Method::GeneralBracketed,
    };

    let empty = model.masses(0.0)?;
    if empty.m0 <= 0.0 {
        return Ok(at_boundary(0.0, 0.0));
    }
    // G(h) = h - T(h) has the sign of F(h) = h m0 - m1 and the fixed point
    // residual as its magnitude.
    let gap = |h: f64| -> Result<f64> {
        let MassMoments { m0, m1 } = model.masses(h)?;
        Ok(h - m1 / m0)
    };
    let g_lo = -empty.m1 / empty.m0;
    let g_hi = gap(height)?;
    if g_lo > 0.0 || g_hi < 0.0 {
        return Err(Error::NoBracket { lo: 0.0, hi: height, f_lo: g_lo, f_hi: g_hi });
    }
    if g_lo.abs() <= tol {
        return Ok(at_boundary(0.0, g_lo));
    }
    if g_hi.abs() <= tol {
        return Ok(at_boundary(height, g_hi));
    }

    let stop = Stopping { x_tol: 0.0, f_tol: tol, max_iterations: DEFAULT_MAX_ITERATIONS };
    let root = brent(gap, 0.0, height, g_lo, g_hi, stop)?;
    Ok(EquilibriumResult {
        h_star: root.x,
        t_star: root.x - root.fx,
        fixed_point_residual: root.fx.abs(),
        bracket: root.bracket,
        iterations: root.iterations,
        method: Method::GeneralBracketed,
    })
}

/// Brute-force minimiser of `T`: uniform grid of `grid_size` points, then
/// golden-section refinement on the cells around the best grid point.
/// Independent of [`solve_fixed_point`]; used to certify it.
pub fn solve_minimum_scan<M: MomentModel + ?Sized>(model: &M, grid_size: usize) -> Result<f64> {
    if grid_size < 100 {
        return Err(Error::domain(format!("grid size must be at least 100, got {grid_size}")));
    }
    let height = model.height();
    let step = height / (grid_size - 1) as f64;
    let mut best = (0, f64::INFINITY);
    for i in 0..grid_size {
        let t = cog(model, i as f64 * step)?;
        if t < best.1 {
            best = (i, t);
        }
    }
    let lo = best.0.saturating_sub(1) as f64 * step;
    let hi = ((best.0 + 1).min(grid_size - 1) as f64 * step).min(height);
    let refined = golden_section(|h| cog(model, h), lo, hi, 1e-13 * height, 200)?;
    let t_refined = cog(model, refined)?;
    Ok(if t_refined <= best.1 { refined } else { best.0 as f64 * step })
}

/// `T'(h) + (m0'(h) / m0(h)) (T(h) - h)`, zero for a correct model.
pub fn ode_residual<M: MomentModel + ?Sized>(model: &M, h: f64) -> Result<f64> {
    let derivative = cog_derivative(model, h)?;
    let MassMoments { m0, m1 } = model.masses(h)?;
    let rate = model.mass_rate(h)?;
    Ok(derivative + rate / m0 * (m1 / m0 - h))
}

/// Central difference of the first moment `m1 = T m0` minus its exact rate
/// `h m0'(h)`. Decays as `step²` for smooth profiles.
pub fn moment_rate_residual<M: MomentModel + ?Sized>(model: &M, h: f64, step: f64) -> Result<f64> {
    let height = model.height();
    if !(step > 0.0 && h - step > 0.0 && h + step < height) {
        return Err(Error::domain(format!(
            "need 0 < h - step and h + step < H (h = {h}, step = {step}, H = {height})"
        )));
    }
    let first_moment = |x: f64| -> Result<f64> {
        let t = cog(model, x)?;
        Ok(t * model.masses(x)?.m0)
    };
    let difference = (first_moment(h + step)? - first_moment(h - step)?) / (2.0 * step);
    Ok(difference - h * model.mass_rate(h)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub h: f64,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    /// Absent where the slope cannot be evaluated (no mass at all).
    #[serde(rename = "dT")]
    pub dt: Option<f64>,
    pub m0: Option<f64>,
    pub m1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CogCurve {
    pub samples: Vec<CurveSample>,
}

/// Tabulates `T`, `T'`, `m0`, `m1` on `n_samples` evenly spaced fill levels
/// from `0` to `H`. Rows that fail to evaluate keep their `h` and leave the
/// other fields empty.
pub fn sample_curve<M: MomentModel + ?Sized>(model: &M, n_samples: usize) -> Result<CogCurve> {
    if n_samples < 2 {
        return Err(Error::domain(format!("need at least 2 samples, got {n_samples}")));
    }
    let height = model.height();
    let last = n_samples - 1;
    let samples = (0..n_samples)
        .map(|i| {
            let h = if i == last { height } else { i as f64 * height / last as f64 };
            let masses = model.masses(h).ok();
            CurveSample {
                h,
                t: cog(model, h).ok(),
                dt: slope(model, h).ok().filter(|d| d.is_finite()),
                m0: masses.map(|m| m.m0),
                m1: masses.map(|m| m.m1),
            }
        })
        .collect();
    Ok(CogCurve { samples })
}

/// `F(h) = h m0(h) - m1(h)`, whose unique root is the fixed point.
pub fn balance<M: MomentModel + ?Sized>(model: &M, h: f64) -> Result<f64> {
    check_level(model.height(), h)?;
    let MassMoments { m0, m1 } = model.masses(h)?;
    Ok(h * m0 - m1)
}
