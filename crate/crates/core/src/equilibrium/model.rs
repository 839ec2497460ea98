use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{Body, MassSpec, MaterialSpec, SurfaceMoments};
use crate::profile::Profile;

/// Zero-th and first mass moments of shell plus fill at one fill level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassMoments {
    pub m0: f64,
    pub m1: f64,
}

/// Anything that can report `m0(h)`, `m1(h)` and the fill rate `m0'(h)`.
pub trait MomentModel: Send + Sync {
    fn height(&self) -> f64;
    fn masses(&self, h: f64) -> Result<MassMoments>;
    /// `m0'(h)`, the mass added per unit rise of the fill level.
    fn mass_rate(&self, h: f64) -> Result<f64>;
}

pub(crate) fn check_level(height: f64, h: f64) -> Result<()> {
    if h.is_nan() || h < 0.0 || h > height {
        return Err(Error::domain(format!("h outside [0,H]: h = {h}, H = {height}")));
    }
    Ok(())
}

/// Shell with surface density `alpha` filled with material of density
/// `beta`. Shell moments are computed once at construction.
#[derive(Debug, Clone)]
pub struct SolidModel<B: Body = Profile> {
    body: B,
    material: MaterialSpec,
    surface: SurfaceMoments,
    tol: f64,
}

impl<B: Body> SolidModel<B> {
    /// `tol` is the quadrature tolerance used for every integral.
    pub fn new(body: B, material: MaterialSpec, tol: f64) -> Result<Self> {
        material.validate()?;
        if !(tol > 0.0) {
            return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
        }
        let surface = body.surface_moments(tol)?;
        Ok(Self { body, material, surface, tol })
    }

    pub fn body(&self) -> &B {
        &self.body
    }

    pub fn material(&self) -> &MaterialSpec {
        &self.material
    }

    pub fn surface(&self) -> SurfaceMoments {
        self.surface
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

impl<B: Body> MomentModel for SolidModel<B> {
    fn height(&self) -> f64 {
        self.body.height()
    }

    fn masses(&self, h: f64) -> Result<MassMoments> {
        check_level(self.height(), h)?;
        let fill = self.body.fill_moments(h, self.tol)?;
        let MaterialSpec { alpha, beta } = self.material;
        Ok(MassMoments {
            m0: alpha * self.surface.s0 + beta * fill.volume,
            m1: alpha * self.surface.s1 + beta * fill.first,
        })
    }

    fn mass_rate(&self, h: f64) -> Result<f64> {
        Ok(self.material.beta * self.body.section_area(h)?)
    }
}

/// Fill geometry for the lumped-mass forms of the cylinder and the cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassFormShape {
    /// Fill fraction `h/H`, fill centroid `h/2`.
    Cylinder,
    /// Fill fraction `(h/H)²`, fill centroid `2h/3`, as in the classical
    /// lumped cone formula. A conical surface of revolution actually has
    /// fill centroid `3h/4` and shell centroid `2H/3`; see `SolidModel` for
    /// that geometry.
    Cone,
}

impl MassFormShape {
    pub fn fill_fraction(self, h: f64, height: f64) -> f64 {
        match self {
            MassFormShape::Cylinder => h / height,
            MassFormShape::Cone => (h / height).powi(2),
        }
    }

    pub fn fill_fraction_rate(self, h: f64, height: f64) -> f64 {
        match self {
            MassFormShape::Cylinder => 1.0 / height,
            MassFormShape::Cone => 2.0 * h / (height * height),
        }
    }

    pub fn fill_cog(self, h: f64) -> f64 {
        match self {
            MassFormShape::Cylinder => 0.5 * h,
            MassFormShape::Cone => 2.0 * h / 3.0,
        }
    }

    /// Conventional centroid of the empty shell: `H/2` and `3H/4`.
    pub fn default_shell_cog(self, height: f64) -> f64 {
        match self {
            MassFormShape::Cylinder => 0.5 * height,
            MassFormShape::Cone => 0.75 * height,
        }
    }
}

/// Lumped shell mass `M` at a fixed centroid plus a fill of total mass `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassFormModel {
    pub shape: MassFormShape,
    pub mass: MassSpec,
    pub height: f64,
}

impl MassFormModel {
    pub fn new(shape: MassFormShape, mass: MassSpec, height: f64) -> Result<Self> {
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::domain(format!("height must be positive, got {height}")));
        }
        MassSpec::new(mass.shell_mass, mass.fill_mass, mass.shell_cog, height)?;
        Ok(Self { shape, mass, height })
    }

    /// Model with the conventional shell centroid for `shape`.
    pub fn standard(shape: MassFormShape, shell_mass: f64, fill_mass: f64, height: f64) -> Result<Self> {
        let mass = MassSpec::new(shell_mass, fill_mass, shape.default_shell_cog(height), height)?;
        Self::new(shape, mass, height)
    }
}

impl MomentModel for MassFormModel {
    fn height(&self) -> f64 {
        self.height
    }

    fn masses(&self, h: f64) -> Result<MassMoments> {
        check_level(self.height, h)?;
        let fill = self.mass.fill_mass * self.shape.fill_fraction(h, self.height);
        Ok(MassMoments {
            m0: self.mass.shell_mass + fill,
            m1: self.mass.shell_mass * self.mass.shell_cog + fill * self.shape.fill_cog(h),
        })
    }

    fn mass_rate(&self, h: f64) -> Result<f64> {
        check_level(self.height, h)?;
        Ok(self.mass.fill_mass * self.shape.fill_fraction_rate(h, self.height))
    }
}

/// Center of gravity in lumped-mass form:
/// `(M c + m φ(h) c_f(h)) / (M + m φ(h))` with fill fraction `φ` and fill
/// centroid `c_f`.
pub fn cog_mass_form<C, F>(mass: &MassSpec, fill_cog: C, fill_fraction: F, h: f64) -> f64
where
    C: Fn(f64) -> f64,
    F: Fn(f64) -> f64,
{
    let fill = mass.fill_mass * fill_fraction(h);
    (mass.shell_mass * mass.shell_cog + fill * fill_cog(h)) / (mass.shell_mass + fill)
}

/// `T0(h) = (MH² + mh²) / (2(MH + mh))`.
pub fn cylinder_cog(shell_mass: f64, fill_mass: f64, height: f64, h: f64) -> f64 {
    0.5 * (shell_mass * height * height + fill_mass * h * h) / (shell_mass * height + fill_mass * h)
}

/// `T1(h) = (9MH³ + 8mh³) / (12(MH² + mh²))`.
pub fn cone_cog(shell_mass: f64, fill_mass: f64, height: f64, h: f64) -> f64 {
    (9.0 * shell_mass * height.powi(3) + 8.0 * fill_mass * h.powi(3))
        / (12.0 * (shell_mass * height * height + fill_mass * h * h))
}
