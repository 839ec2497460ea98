//! Commands behind the `cog` binary. Each command returns a report value;
//! rendering to text, CSV or JSON is kept separate so the reports can be
//! tested without spawning a process.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{
    balance, closed_form_cylinder, cog, ode_residual, moment_rate_residual, sample_curve,
    solve_cone_cubic, solve_fixed_point, solve_minimum_scan, special_case, CogCurve,
    EquilibriumResult, MassFormShape, MassMoments, Method, MomentModel,
};
use crate::error::{Error, Result};
use crate::moments::MaterialSpec;
use crate::oracle::oracle_convergence;
use crate::scenario::{MaterialForm, Scenario, ScenarioModel};

/// Quadrature tolerance used by `verify`, tighter than the solve default so
/// finite-difference checks are not swamped by integration noise.
const VERIFY_QUADRATURE_TOL: f64 = 1e-13;
const VERIFY_GRID: usize = 1000;
const ODE_POINTS: usize = 50;
const RATE_STEPS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];
const ORACLE_LADDER: [usize; 3] = [1_000, 10_000, 100_000];

/// Formats a float with 17 significant digits; `-0` prints as `0`.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub h: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// Slope of `T`; absent where it cannot be evaluated.
    #[serde(rename = "dT")]
    pub dt: Option<f64>,
    pub m0: f64,
    pub m1: f64,
}

pub fn eval(scenario: &Scenario, h: f64) -> Result<EvalReport> {
    let model = scenario.model()?;
    let model = model.as_model();
    let MassMoments { m0, m1 } = model.masses(h)?;
    let t = cog(model, h)?;
    let dt = crate::equilibrium::slope(model, h).ok().filter(|d| d.is_finite());
    Ok(EvalReport { h, t, dt, m0, m1 })
}

impl EvalReport {
    pub fn to_text(&self) -> String {
        let dt = self.dt.map_or_else(|| "-".to_string(), |d| d.to_string());
        format!("h   {}\nT   {}\ndT  {}\nm0  {}\nm1  {}\n", self.h, self.t, dt, self.m0, self.m1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialRoot {
    pub method: Method,
    pub h_star: f64,
    /// `special.h_star - general.h_star`.
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    #[serde(flatten)]
    pub general: EquilibriumResult,
    pub special: Option<SpecialRoot>,
    pub note: Option<String>,
}

/// Root from the dedicated solver of the scenario's shape, if any.
pub fn special_root(scenario: &Scenario) -> Result<Option<(Method, f64)>> {
    match &scenario.material {
        MaterialForm::Densities(spec) => {
            special_case(&scenario.profile, spec, scenario.quadrature_tolerance())
        }
        MaterialForm::Masses { shape, mass } => {
            let height = scenario.height();
            if mass.shell_cog != shape.default_shell_cog(height) {
                return Ok(None);
            }
            Ok(Some(match shape {
                MassFormShape::Cylinder => (
                    Method::CylinderClosedForm,
                    closed_form_cylinder(mass.shell_mass, mass.fill_mass, height),
                ),
                MassFormShape::Cone => {
                    (Method::ConeCubic, solve_cone_cubic(mass.shell_mass, mass.fill_mass, height)?)
                }
            }))
        }
    }
}

fn degenerate_note(scenario: &Scenario) -> Option<String> {
    let (shell, fill) = match &scenario.material {
        MaterialForm::Densities(MaterialSpec { alpha, beta }) => (*alpha, *beta),
        MaterialForm::Masses { mass, .. } => (mass.shell_mass, mass.fill_mass),
    };
    if shell == 0.0 {
        Some("massless shell: the center of gravity is lowest with the container empty, h* = 0".into())
    } else if fill == 0.0 {
        Some("weightless fill: T is constant at the shell centroid, which is its own fixed point".into())
    } else {
        None
    }
}

fn solve_with(scenario: &Scenario, model: &dyn MomentModel, tol: f64) -> Result<SolveReport> {
    let general = solve_fixed_point(model, tol)?;
    let special = special_root(scenario)?.map(|(method, h_star)| SpecialRoot {
        method,
        h_star,
        difference: h_star - general.h_star,
    });
    Ok(SolveReport { general, special, note: degenerate_note(scenario) })
}

pub fn solve(scenario: &Scenario) -> Result<SolveReport> {
    let model = scenario.model()?;
    solve_with(scenario, model.as_model(), scenario.tolerance)
}

impl SolveReport {
    pub fn to_text(&self) -> String {
        let g = &self.general;
        let mut out = String::new();
        let _ = writeln!(out, "method      {}", g.method.name());
        let _ = writeln!(out, "h*          {}", g.h_star);
        let _ = writeln!(out, "T(h*)       {}", g.t_star);
        let _ = writeln!(out, "residual    {:e}", g.fixed_point_residual);
        let _ = writeln!(out, "iterations  {}", g.iterations);
        let _ = writeln!(out, "bracket     [{}, {}]", g.bracket.0, g.bracket.1);
        if let Some(s) = &self.special {
            let _ = writeln!(out, "special     {} h* = {}", s.method.name(), s.h_star);
            let _ = writeln!(out, "difference  {:e}", s.difference);
        }
        if let Some(note) = &self.note {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Validation(e.to_string()))
    }
}

pub fn curve(scenario: &Scenario, samples: Option<usize>) -> Result<CogCurve> {
    let model = scenario.model()?;
    sample_curve(model.as_model(), samples.unwrap_or(scenario.samples))
}

/// CSV with header `h,T,dT,m0,m1`; missing values are empty fields.
pub fn curve_csv(curve: &CogCurve) -> String {
    let field = |x: Option<f64>| x.map(format_float).unwrap_or_default();
    let mut out = String::from("h,T,dT,m0,m1\n");
    for s in &curve.samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_float(s.h),
            field(s.t),
            field(s.dt),
            field(s.m0),
            field(s.m1)
        );
    }
    out
}

/// Scalars a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Alpha,
    Beta,
    ShellMass,
    FillMass,
    SphereRadius,
    Radius,
    Height,
    Exponent,
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "alpha" => SweepParam::Alpha,
            "beta" => SweepParam::Beta,
            "M" => SweepParam::ShellMass,
            "m" => SweepParam::FillMass,
            "R" => SweepParam::SphereRadius,
            "r" => SweepParam::Radius,
            "H" => SweepParam::Height,
            "p" => SweepParam::Exponent,
            other => return Err(Error::UnknownParam(other.to_string())),
        })
    }
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
            SweepParam::ShellMass => "M",
            SweepParam::FillMass => "m",
            SweepParam::SphereRadius => "R",
            SweepParam::Radius => "r",
            SweepParam::Height => "H",
            SweepParam::Exponent => "p",
        }
    }

    /// Copy of `scenario` with this parameter set to `value`. The parameter
    /// must already be present in the scenario file.
    pub fn apply(self, scenario: &Scenario, value: f64) -> Result<Scenario> {
        let mut raw = scenario.raw.clone();
        let slot = match self {
            SweepParam::Alpha => &mut raw.alpha,
            SweepParam::Beta => &mut raw.beta,
            SweepParam::ShellMass => &mut raw.shell_mass,
            SweepParam::FillMass => &mut raw.fill_mass,
            SweepParam::SphereRadius => &mut raw.sphere_radius,
            SweepParam::Radius => &mut raw.radius,
            SweepParam::Height => &mut raw.height,
            SweepParam::Exponent => &mut raw.exponent,
        };
        if slot.is_none() {
            return Err(Error::Validation(format!(
                "scenario has no `{}` to sweep",
                self.name()
            )));
        }
        *slot = Some(value);
        raw.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub h_star: f64,
    #[serde(rename = "T_star")]
    pub t_star: f64,
}

/// `steps` evenly spaced values from `from` to `to`; one step gives `from`.
pub fn sweep_values(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(Error::Validation(format!("sweep range must be finite: [{from}, {to}]")));
    }
    if steps == 0 {
        return Err(Error::Validation("sweep needs at least one step".into()));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let last = steps - 1;
    Ok((0..steps)
        .map(|i| if i == last { to } else { from + (to - from) * i as f64 / last as f64 })
        .collect())
}

/// Re-solves the scenario at every value. Points run in parallel; rows
/// come back in parameter order.
pub fn sweep(scenario: &Scenario, param: SweepParam, from: f64, to: f64, steps: usize) -> Result<Vec<SweepRow>> {
    let values = sweep_values(from, to, steps)?;
    values
        .into_par_iter()
        .map(|value| {
            let point = param.apply(scenario, value)?;
            let model = point.model()?;
            let r = solve_fixed_point(model.as_model(), point.tolerance)?;
            Ok(SweepRow { value, h_star: r.h_star, t_star: r.t_star })
        })
        .collect()
}

pub fn sweep_csv(param: SweepParam, rows: &[SweepRow]) -> String {
    let mut out = format!("{},h_star,T_star\n", param.name());
    for r in rows {
        let _ = writeln!(out, "{},{},{}", format_float(r.value), format_float(r.h_star), format_float(r.t_star));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub h_star: f64,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("h* = {}\n", self.h_star);
        for c in &self.checks {
            let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(out, "NOTE {n}");
        }
        out
    }
}

/// Interior points `h_i = H (0.05 + 0.9 frac(i φ))` from the golden-ratio
/// sequence: well spread, deterministic.
fn interior_points(height: f64, n: usize) -> Vec<f64> {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    (1..=n).map(|i| height * (0.05 + 0.9 * (i as f64 * phi).fract())).collect()
}

fn sci_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// Runs the full consistency suite on one scenario.
pub fn verify(scenario: &Scenario) -> Result<VerifyReport> {
    let height = scenario.height();
    let owned = match scenario.model()? {
        ScenarioModel::Solid(_) => ScenarioModel::Solid(crate::equilibrium::SolidModel::new(
            scenario.profile.clone(),
            scenario.densities()?,
            VERIFY_QUADRATURE_TOL,
        )?),
        mass_form => mass_form,
    };
    let model = owned.as_model();
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    let solve_tol = scenario.tolerance.min(1e-10 * height);
    let solved = solve_with(scenario, model, solve_tol)?;
    let h_star = solved.general.h_star;
    let limit = 1e-8 * height;

    let t_star = cog(model, h_star)?;
    let residual = (t_star - h_star).abs();
    checks.push(check(
        "fixed_point",
        residual <= limit,
        format!("|T(h*) - h*| = {residual:e} (limit {limit:e})"),
    ));

    if h_star > 0.0 && h_star < height {
        let slope = crate::equilibrium::cog_derivative(model, h_star)?;
        checks.push(check(
            "stationary",
            slope.abs() <= limit,
            format!("|T'(h*)| = {:e} (limit {limit:e})", slope.abs()),
        ));
    } else {
        checks.push(check("stationary", true, format!("h* = {h_star} lies on the boundary; slope not required to vanish")));
    }

    let scan = solve_minimum_scan(model, VERIFY_GRID)?;
    let gap = (scan - h_star).abs();
    checks.push(check(
        "fixed_point_is_minimum",
        gap <= 1e-6 * height,
        format!("|h* - argmin T| = {gap:e} (limit {:e})", 1e-6 * height),
    ));

    let step = height / (VERIFY_GRID - 1) as f64;
    let mut previous = f64::NEG_INFINITY;
    let mut first_drop = None;
    let mut out_of_range = None;
    let slack = 1e-12 * height;
    for i in 0..VERIFY_GRID {
        let h = if i == VERIFY_GRID - 1 { height } else { i as f64 * step };
        let f = balance(model, h)?;
        if f <= previous && first_drop.is_none() {
            first_drop = Some(h);
        }
        previous = f;
        let t = cog(model, h)?;
        if !(t >= -slack && t <= height + slack) && out_of_range.is_none() {
            out_of_range = Some((h, t));
        }
    }
    checks.push(check(
        "balance_increasing",
        first_drop.is_none(),
        match first_drop {
            None => format!("F(h) = h m0 - m1 strictly increasing on {VERIFY_GRID} points"),
            Some(h) => format!("F fails to increase at h = {h}"),
        },
    ));
    checks.push(check(
        "cog_in_range",
        out_of_range.is_none(),
        match out_of_range {
            None => format!("T(h) within [0, H] on {VERIFY_GRID} points"),
            Some((h, t)) => format!("T({h}) = {t} outside [0, {height}]"),
        },
    ));

    let mut worst = 0.0f64;
    for h in interior_points(height, ODE_POINTS) {
        let slope = crate::equilibrium::cog_derivative(model, h)?;
        let r = ode_residual(model, h)?.abs() / (1.0 + slope.abs());
        worst = worst.max(r);
    }
    checks.push(check(
        "ode_identity",
        worst <= 1e-8,
        format!("max |residual| / (1 + |T'|) = {worst:e} over {ODE_POINTS} points (limit 1e-8)"),
    ));

    checks.push(moment_rate_check(model, height)?);

    let solid = match &owned {
        ScenarioModel::Solid(m) => m.clone(),
        ScenarioModel::MassForm(_) => crate::equilibrium::SolidModel::new(
            scenario.profile.clone(),
            scenario.densities()?,
            VERIFY_QUADRATURE_TOL,
        )?,
    };
    let reference = cog(&solid, h_star)?;
    let ladder = oracle_convergence(&scenario.profile, solid.material(), h_star, reference, &ORACLE_LADDER)?;
    let finest = *ladder.errors.last().unwrap_or(&f64::INFINITY);
    let exact = ladder.errors.iter().all(|e| *e <= 1e-11 * height);
    let decreasing = ladder.errors.windows(2).all(|w| w[1] < w[0]);

    checks.push(check(
        "oracle_ladder",
        finest <= 1e-4 * height && (decreasing || exact),
        format!(
            "errors [{}] at n = {ORACLE_LADDER:?}; observed orders {:.2?}",
            sci_list(&ladder.errors),
            ladder.orders
        ),
    ));

    if let Some(special) = &solved.special {
        let diff = special.difference.abs();
        checks.push(check(
            "special_case_agreement",
            diff <= limit,
            format!("{} h* = {}, difference {diff:e} (limit {limit:e})", special.method.name(), special.h_star),
        ));
    }

    if let MaterialForm::Masses { shape: MassFormShape::Cone, .. } = &scenario.material {
        let engine = solve_fixed_point(&solid, solve_tol)?;
        notes.push(format!(
            "lumped cone formulas place the shell centroid at 3H/4 and the fill centroid at 2h/3, \
             while a conical surface of revolution has 2H/3 and 3h/4; the surface-of-revolution \
             root for the same masses is h* = {} (differs by {:e})",
            engine.h_star,
            engine.h_star - h_star
        ));
    }
    if let Some(note) = solved.note {
        notes.push(note);
    }

    Ok(VerifyReport { h_star, checks, notes })
}

/// Central differences of `m1` against `h m0'` must decay with order 2. A
/// residual already at rounding level (e.g. `m1` quadratic in `h`) passes.
fn moment_rate_check(model: &dyn MomentModel, height: f64) -> Result<Check> {
    let h = 0.5 * height;
    let residuals = RATE_STEPS
        .iter()
        .map(|s| moment_rate_residual(model, h, s * height).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;
    let scale = model.masses(h)?.m0;
    let orders: Vec<f64> = residuals
        .windows(2)
        .zip(RATE_STEPS.windows(2))
        .map(|(r, s)| (r[0] / r[1]).ln() / (s[0] / s[1]).ln())
        .collect();
    let rounding = residuals.iter().all(|r| *r <= 1e-9 * scale);
    let second_order = orders.iter().all(|o| (o - 2.0).abs() <= 0.2);
    let detail = if rounding {
        format!("residuals [{}] at rounding level (central difference exact)", sci_list(&residuals))
    } else {
        format!("residuals [{}]; observed orders {orders:.3?} (want 2 +/- 0.2)", sci_list(&residuals))
    };
    Ok(check("moment_rate_order", rounding || second_order, detail))
}
