//! Bracketed scalar root refinement and golden-section minimisation.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    /// Final sign-changing bracket, ordered.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Stopping rule for [`brent`]. The search ends as soon as `|f(x)| <= f_tol`
/// or the bracket half-width drops below `x_tol + 2 eps |x|`.
#[derive(Debug, Clone, Copy)]
pub struct Stopping {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iterations: usize,
}

impl Stopping {
    pub fn residual(f_tol: f64) -> Self {
        Self {
            x_tol: 0.0,
            f_tol,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn width(x_tol: f64) -> Self {
        Self {
            x_tol,
            f_tol: 0.0,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// Brent's method on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of
/// opposite sign (or zero). Interpolated steps are used only when they land
/// inside the current bracket; otherwise the step bisects.
pub fn brent<F>(mut f: F, lo: f64, hi: f64, f_lo: f64, f_hi: f64, stop: Stopping) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if f_lo == 0.0 {
        return Ok(Root { x: lo, fx: 0.0, bracket: (lo, lo), iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, fx: 0.0, bracket: (hi, hi), iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }

    // b is the best estimate, a the previous iterate, c the counterpoint.
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f_lo, f_hi);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iteration in 1..=stop.max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * stop.x_tol;
        let xm = 0.5 * (c - b);
        if fb.abs() <= stop.f_tol || fb == 0.0 || xm.abs() <= tol1 {
            let bracket = if b < c { (b, c) } else { (c, b) };
            if fb.abs() > stop.f_tol && stop.x_tol == 0.0 {
                // Bracket exhausted at machine resolution without the
                // residual target being reached.
                return Err(Error::ToleranceNotMet { best: b, estimate: fb.abs() });
            }
            return Ok(Root { x: b, fx: fb, bracket, iterations: iteration - 1 });
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                // secant
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                // inverse quadratic interpolation
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(Error::NonFinite { at: b });
        }
    }

    Err(Error::ToleranceNotMet { best: b, estimate: fb.abs() })
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`. Returns the
/// best abscissa seen.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, x_tol: f64, max_iterations: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..max_iterations {
        if (b - a).abs() <= x_tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { x1 } else { x2 })
}
