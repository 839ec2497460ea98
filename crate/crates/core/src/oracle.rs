//! Brute-force slicing of the solid into horizontal layers.
//!
//! The shell is approximated by conical frustum bands through consecutive
//! profile samples and the fill by midpoint disks. Only values of `g` are
//! used: no derivatives, no quadrature, no closed forms. This makes the
//! oracle an independent check of the analytic engine.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::moments::{MaterialSpec, SurfaceMoments};
use crate::profile::Profile;

pub const MIN_SLICES: usize = 10;

/// Uniform slicing of `[0, H]` into `n_slices` layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discretization {
    pub n_slices: usize,
    pub height: f64,
}

impl Discretization {
    pub fn new(n_slices: usize, height: f64) -> Result<Self> {
        if n_slices < MIN_SLICES {
            return Err(Error::domain(format!("need at least {MIN_SLICES} slices, got {n_slices}")));
        }
        Ok(Self { n_slices, height })
    }

    pub fn edge(&self, i: usize) -> f64 {
        if i == self.n_slices {
            self.height
        } else {
            i as f64 * self.height / self.n_slices as f64
        }
    }

    /// Lateral area of the frustum through `(z0, g0)` and `(z1, g1)`.
    pub fn band_area(z0: f64, g0: f64, z1: f64, g1: f64) -> f64 {
        PI * (g0 + g1) * ((z1 - z0).powi(2) + (g1 - g0).powi(2)).sqrt()
    }
}

/// Shell area and first moment summed over frustum bands.
pub fn oracle_surface_moments(profile: &Profile, n: usize) -> Result<SurfaceMoments> {
    let grid = Discretization::new(n, profile.height())?;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut z0 = 0.0;
    let mut g0 = profile.eval_g(0.0)?;
    for i in 1..=n {
        let z1 = grid.edge(i);
        let g1 = profile.eval_g(z1)?;
        let area = Discretization::band_area(z0, g0, z1, g1);
        s0 += area;
        s1 += area * 0.5 * (z0 + z1);
        z0 = z1;
        g0 = g1;
    }
    Ok(SurfaceMoments { s0, s1 })
}

/// Fill volume and first moment below `h`, with the top layer clipped at
/// exactly `h`.
fn oracle_fill(profile: &Profile, grid: &Discretization, h: f64) -> Result<(f64, f64)> {
    let mut volume = 0.0;
    let mut first = 0.0;
    for i in 0..grid.n_slices {
        let lo = grid.edge(i);
        if lo >= h {
            break;
        }
        let hi = grid.edge(i + 1).min(h);
        let mid = 0.5 * (lo + hi);
        let g = profile.eval_g(mid)?;
        let disk = PI * g * g * (hi - lo);
        volume += disk;
        first += disk * mid;
    }
    Ok((volume, first))
}

/// Center of gravity at fill level `h` from `n` slices.
pub fn oracle_cog(profile: &Profile, material: &MaterialSpec, h: f64, n: usize) -> Result<f64> {
    material.validate()?;
    let height = profile.height();
    if h.is_nan() || h < 0.0 || h > height {
        return Err(Error::domain(format!("h outside [0,H]: h = {h}, H = {height}")));
    }
    let grid = Discretization::new(n, height)?;
    let shell = oracle_surface_moments(profile, n)?;
    let (volume, first) = oracle_fill(profile, &grid, h)?;
    let mass = material.alpha * shell.s0 + material.beta * volume;
    if mass <= 0.0 {
        return Ok(0.0);
    }
    Ok((material.alpha * shell.s1 + material.beta * first) / mass)
}

/// Oracle errors against `reference` on a slice-count ladder, with the
/// observed order between consecutive rungs.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    pub slices: Vec<usize>,
    pub errors: Vec<f64>,
    /// `log(e_k / e_{k+1}) / log(n_{k+1} / n_k)`.
    pub orders: Vec<f64>,
}

pub fn oracle_convergence(
    profile: &Profile,
    material: &MaterialSpec,
    h: f64,
    reference: f64,
    ladder: &[usize],
) -> Result<Convergence> {
    let errors = ladder
        .iter()
        .map(|&n| oracle_cog(profile, material, h, n).map(|t| (t - reference).abs()))
        .collect::<Result<Vec<_>>>()?;
    let orders = ladder
        .windows(2)
        .zip(errors.windows(2))
        .map(|(n, e)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect();
    Ok(Convergence { slices: ladder.to_vec(), errors, orders })
}
