//! Geometric and mass moments of the shell and the fill, taken relative to
//! the base plane `z = 0`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Profile, ProfileKind};
use crate::quadrature::Integrator;

/// Zero-th and first moments of the shell surface: area `S0` and `∫ z dA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMoments {
    pub s0: f64,
    pub s1: f64,
}

impl SurfaceMoments {
    /// Height of the empty shell's center of gravity.
    pub fn centroid(&self) -> f64 {
        self.s1 / self.s0
    }
}

/// `I0 = ∫₀ʰ g²` and `I1 = ∫₀ʰ z g²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FillIntegrals {
    pub i0: f64,
    pub i1: f64,
}

/// Surface density of the shell and volume density of the fill.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl MaterialSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let m = Self { alpha, beta };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(self.alpha) || !ok(self.beta) {
            return Err(Error::InvalidMaterial(format!(
                "densities must be finite and non-negative (alpha = {}, beta = {})",
                self.alpha, self.beta
            )));
        }
        if self.alpha == 0.0 && self.beta == 0.0 {
            return Err(Error::InvalidMaterial("alpha and beta are both zero".into()));
        }
        Ok(())
    }

    /// Densities reproducing a shell mass `M` and full-fill mass `m` on
    /// `profile`: `alpha = M / S0`, `beta = m / V`.
    pub fn from_mass(profile: &Profile, mass: &MassSpec, tol: f64) -> Result<Self> {
        let surface = surface_moments(profile, tol)?;
        let (volume, _) = volume_and_area(profile, tol)?;
        Self::new(mass.shell_mass / surface.s0, mass.fill_mass / volume)
    }
}

/// Lumped masses: `M` for the empty shell, `m` for the material of a full
/// fill, and the height of the empty shell's center of gravity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassSpec {
    pub shell_mass: f64,
    pub fill_mass: f64,
    pub shell_cog: f64,
}

impl MassSpec {
    pub fn new(shell_mass: f64, fill_mass: f64, shell_cog: f64, height: f64) -> Result<Self> {
        if !(shell_mass.is_finite() && shell_mass > 0.0) {
            return Err(Error::InvalidMaterial(format!("shell mass M must be positive, got {shell_mass}")));
        }
        if !(fill_mass.is_finite() && fill_mass >= 0.0) {
            return Err(Error::InvalidMaterial(format!("fill mass m must be non-negative, got {fill_mass}")));
        }
        if !(0.0..=height).contains(&shell_cog) {
            return Err(Error::InvalidMaterial(format!(
                "shell center of gravity {shell_cog} outside [0, {height}]"
            )));
        }
        Ok(Self { shell_mass, fill_mass, shell_cog })
    }

    /// `M = alpha S0`, `m = beta V`, shell centroid `S1 / S0`.
    pub fn from_material(profile: &Profile, material: &MaterialSpec, tol: f64) -> Result<Self> {
        let surface = surface_moments(profile, tol)?;
        let (volume, _) = volume_and_area(profile, tol)?;
        Ok(Self {
            shell_mass: material.alpha * surface.s0,
            fill_mass: material.beta * volume,
            shell_cog: surface.centroid(),
        })
    }
}

/// Shell moments together with the mass moments of shell plus fill.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub s0: f64,
    pub s1: f64,
    pub m0: f64,
    pub m1: f64,
}

fn quadrature(profile: &Profile, tol: f64) -> (Integrator, Vec<f64>) {
    let mut points = vec![0.0];
    points.extend(profile.breakpoints());
    points.push(profile.height());
    (Integrator::new(tol), points)
}

fn limits_to(points: &[f64], h: f64) -> Vec<f64> {
    let mut out: Vec<f64> = points.iter().copied().filter(|&p| p < h).collect();
    out.push(h);
    out
}

/// `S0 = 2π ∫ g sqrt(1 + g'^2)` and `S1 = 2π ∫ z g sqrt(1 + g'^2)` by
/// adaptive quadrature, for any profile.
pub fn surface_moments_by_quadrature(profile: &Profile, tol: f64) -> Result<SurfaceMoments> {
    let (integrator, points) = quadrature(profile, tol);
    let s0 = integrator.integrate_over(|z| profile.arc_integrand(z).unwrap_or(f64::NAN), &points)?;
    let s1 = integrator.integrate_over(
        |z| z * profile.arc_integrand(z).unwrap_or(f64::NAN),
        &points,
    )?;
    Ok(SurfaceMoments { s0: 2.0 * PI * s0.value, s1: 2.0 * PI * s1.value })
}

/// Shell surface moments; closed forms where elementary, quadrature
/// otherwise.
pub fn surface_moments(profile: &Profile, tol: f64) -> Result<SurfaceMoments> {
    let h = profile.height();
    Ok(match profile.kind() {
        ProfileKind::Cylinder { radius } => SurfaceMoments {
            s0: 2.0 * PI * radius * h,
            s1: PI * radius * h * h,
        },
        ProfileKind::Cone { top_radius } => cone_surface(*top_radius, h),
        ProfileKind::Power { exponent } if *exponent == 1.0 => cone_surface(h, h),
        ProfileKind::Sphere { radius } => SurfaceMoments {
            s0: 4.0 * PI * radius * radius,
            s1: 4.0 * PI * radius.powi(3),
        },
        ProfileKind::HalfSphere { radius } => SurfaceMoments {
            s0: 2.0 * PI * radius * radius,
            s1: PI * radius.powi(3),
        },
        _ => surface_moments_by_quadrature(profile, tol)?,
    })
}

fn cone_surface(top_radius: f64, h: f64) -> SurfaceMoments {
    let slant = (1.0 + (top_radius / h).powi(2)).sqrt();
    SurfaceMoments {
        s0: PI * top_radius * slant * h,
        s1: 2.0 / 3.0 * PI * top_radius * slant * h * h,
    }
}

/// Enclosed volume `V = π ∫₀ᴴ g²` and shell area `A = S0`.
pub fn volume_and_area(profile: &Profile, tol: f64) -> Result<(f64, f64)> {
    let fill = fill_integrals(profile, profile.height(), tol)?;
    let surface = surface_moments(profile, tol)?;
    Ok((PI * fill.i0, surface.s0))
}

/// Area of the horizontal cross-section at height `h`: `π g(h)²`.
pub fn cross_section_area(profile: &Profile, h: f64) -> Result<f64> {
    let g = profile.eval_g(h)?;
    Ok(PI * g * g)
}

fn check_fill_level(height: f64, h: f64) -> Result<()> {
    if h.is_nan() || h < 0.0 || h > height {
        return Err(Error::domain(format!("h outside [0,H]: h = {h}, H = {height}")));
    }
    Ok(())
}

pub fn fill_integrals_by_quadrature(profile: &Profile, h: f64, tol: f64) -> Result<FillIntegrals> {
    check_fill_level(profile.height(), h)?;
    if h == 0.0 {
        return Ok(FillIntegrals { i0: 0.0, i1: 0.0 });
    }
    let (integrator, points) = quadrature(profile, tol);
    let points = limits_to(&points, h);
    let g2 = |z: f64| profile.eval_g(z).map(|g| g * g).unwrap_or(f64::NAN);
    let i0 = integrator.integrate_over(g2, &points)?;
    let i1 = integrator.integrate_over(|z| z * g2(z), &points)?;
    Ok(FillIntegrals { i0: i0.value, i1: i1.value })
}

/// `∫₀ʰ g²` and `∫₀ʰ z g²`.
pub fn fill_integrals(profile: &Profile, h: f64, tol: f64) -> Result<FillIntegrals> {
    check_fill_level(profile.height(), h)?;
    let height = profile.height();
    Ok(match profile.kind() {
        ProfileKind::Cylinder { radius } => {
            let r2 = radius * radius;
            FillIntegrals { i0: r2 * h, i1: 0.5 * r2 * h * h }
        }
        ProfileKind::Cone { top_radius } => {
            let k = (top_radius / height).powi(2);
            FillIntegrals { i0: k * h.powi(3) / 3.0, i1: k * h.powi(4) / 4.0 }
        }
        ProfileKind::Power { exponent: p } => {
            let a = 2.0 * p + 1.0;
            FillIntegrals { i0: h.powf(a) / a, i1: h.powf(a + 1.0) / (a + 1.0) }
        }
        ProfileKind::Sphere { radius } | ProfileKind::HalfSphere { radius } => FillIntegrals {
            i0: radius * h * h - h.powi(3) / 3.0,
            i1: 2.0 * radius * h.powi(3) / 3.0 - h.powi(4) / 4.0,
        },
        _ => fill_integrals_by_quadrature(profile, h, tol)?,
    })
}

pub fn mass_moments(profile: &Profile, material: &MaterialSpec, h: f64, tol: f64) -> Result<MomentSet> {
    material.validate()?;
    let surface = surface_moments(profile, tol)?;
    let fill = fill_integrals(profile, h, tol)?;
    Ok(MomentSet {
        s0: surface.s0,
        s1: surface.s1,
        m0: material.alpha * surface.s0 + PI * material.beta * fill.i0,
        m1: material.alpha * surface.s1 + PI * material.beta * fill.i1,
    })
}

/// Volume moments of the fill below `h`: `∫₀ʰ f` and `∫₀ʰ z f` with `f` the
/// cross-section area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FillMoments {
    pub volume: f64,
    pub first: f64,
}

/// A container between the planes `z = 0` and `z = H`, described by its
/// shell moments and horizontal cross-section areas.
pub trait Body: Send + Sync {
    fn height(&self) -> f64;
    fn surface_moments(&self, tol: f64) -> Result<SurfaceMoments>;
    fn section_area(&self, h: f64) -> Result<f64>;
    fn fill_moments(&self, h: f64, tol: f64) -> Result<FillMoments>;
}

impl Body for Profile {
    fn height(&self) -> f64 {
        Profile::height(self)
    }

    fn surface_moments(&self, tol: f64) -> Result<SurfaceMoments> {
        surface_moments(self, tol)
    }

    fn section_area(&self, h: f64) -> Result<f64> {
        cross_section_area(self, h)
    }

    fn fill_moments(&self, h: f64, tol: f64) -> Result<FillMoments> {
        let f = fill_integrals(self, h, tol)?;
        Ok(FillMoments { volume: PI * f.i0, first: PI * f.i1 })
    }
}

/// General solid given by its shell moments and a cross-section area
/// function `f(h)`, which need not come from a surface of revolution.
#[derive(Clone)]
pub struct SectionedSolid {
    height: f64,
    surface: SurfaceMoments,
    section: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for SectionedSolid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SectionedSolid")
            .field("height", &self.height)
            .field("surface", &self.surface)
            .finish_non_exhaustive()
    }
}

impl SectionedSolid {
    pub fn new<F>(height: f64, surface: SurfaceMoments, section: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::domain(format!("height must be positive, got {height}")));
        }
        if !(surface.s0 > 0.0 && surface.s1 >= 0.0 && surface.s1 <= height * surface.s0) {
            return Err(Error::domain(format!(
                "surface moments must satisfy S0 > 0 and 0 <= S1 <= H S0 (S0 = {}, S1 = {})",
                surface.s0, surface.s1
            )));
        }
        Ok(Self { height, surface, section: Arc::new(section) })
    }
}

impl Body for SectionedSolid {
    fn height(&self) -> f64 {
        self.height
    }

    fn surface_moments(&self, _tol: f64) -> Result<SurfaceMoments> {
        Ok(self.surface)
    }

    fn section_area(&self, h: f64) -> Result<f64> {
        check_fill_level(self.height, h)?;
        let a = (self.section)(h);
        if !a.is_finite() || a < 0.0 {
            return Err(Error::domain(format!("cross-section area f({h}) = {a}")));
        }
        Ok(a)
    }

    fn fill_moments(&self, h: f64, tol: f64) -> Result<FillMoments> {
        check_fill_level(self.height, h)?;
        let integrator = Integrator::new(tol);
        let volume = integrator.integrate(|z| (self.section)(z), 0.0, h)?;
        let first = integrator.integrate(|z| z * (self.section)(z), 0.0, h)?;
        Ok(FillMoments { volume: volume.value, first: first.value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn sphere_surface() {
        let s = surface_moments(&Profile::sphere(1.0).unwrap(), TOL).unwrap();
        assert!(close(s.s0, 4.0 * PI, 1e-15));
        assert!(close(s.s1, 4.0 * PI, 1e-15));
    }

    #[test]
    fn half_sphere_surface() {
        let s = surface_moments(&Profile::half_sphere(1.0).unwrap(), TOL).unwrap();
        assert!(close(s.s0, 2.0 * PI, 1e-15));
        assert!(close(s.s1, PI, 1e-15));
    }

    #[test]
    fn cylinder_surface() {
        let s = surface_moments(&Profile::cylinder(1.0, 1.0).unwrap(), TOL).unwrap();
        assert_eq!(s, SurfaceMoments { s0: 2.0 * PI, s1: PI });
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let profiles = [
            Profile::cylinder(1.3, 2.0).unwrap(),
            Profile::cone(0.7, 1.5).unwrap(),
            Profile::power(1.0, 1.2).unwrap(),
            Profile::sphere(0.8).unwrap(),
            Profile::half_sphere(1.7).unwrap(),
        ];
        for p in &profiles {
            let closed = surface_moments(p, TOL).unwrap();
            let quad = surface_moments_by_quadrature(p, TOL).unwrap();
            assert!(close(quad.s0, closed.s0, 1e-9), "{p:?}");
            assert!(close(quad.s1, closed.s1, 1e-9), "{p:?}");
        }
    }

    #[test]
    fn volumes() {
        let (v, a) = volume_and_area(&Profile::cylinder(1.0, 1.0).unwrap(), TOL).unwrap();
        assert!(close(v, PI, 1e-15) && close(a, 2.0 * PI, 1e-15));
        let (v, a) = volume_and_area(&Profile::sphere(1.0).unwrap(), TOL).unwrap();
        assert!(close(v, 4.0 * PI / 3.0, 1e-15) && close(a, 4.0 * PI, 1e-15));
        let (v, _) = volume_and_area(&Profile::power(1.0, 1.0).unwrap(), TOL).unwrap();
        assert!(close(v, PI / 3.0, 1e-15));
    }

    #[test]
    fn cross_sections() {
        assert!(close(cross_section_area(&Profile::cylinder(2.0, 1.0).unwrap(), 0.5).unwrap(), 4.0 * PI, 1e-15));
        assert!(close(cross_section_area(&Profile::sphere(1.0).unwrap(), 1.0).unwrap(), PI, 1e-15));
        assert_eq!(cross_section_area(&Profile::cone(1.0, 1.0).unwrap(), 0.0).unwrap(), 0.0);
        assert!(cross_section_area(&Profile::cone(1.0, 1.0).unwrap(), 1.5).is_err());
    }

    #[test]
    fn fill_integral_examples() {
        let f = fill_integrals(&Profile::power(1.0, 1.0).unwrap(), 1.0, TOL).unwrap();
        assert!(close(f.i0, 1.0 / 3.0, 1e-15) && close(f.i1, 0.25, 1e-15));
        let f = fill_integrals(&Profile::sphere(1.0).unwrap(), 1.0, TOL).unwrap();
        assert!(close(f.i0, 2.0 / 3.0, 1e-15) && close(f.i1, 5.0 / 12.0, 1e-15));
        let f = fill_integrals(&Profile::half_sphere(1.0).unwrap(), 0.0, TOL).unwrap();
        assert_eq!((f.i0, f.i1), (0.0, 0.0));
        let f = fill_integrals_by_quadrature(&Profile::cone(1.0, 1.0).unwrap(), 0.0, TOL).unwrap();
        assert_eq!((f.i0, f.i1), (0.0, 0.0));
        assert!(fill_integrals(&Profile::sphere(1.0).unwrap(), -0.1, TOL).is_err());
    }

    #[test]
    fn mass_moment_examples() {
        let cyl = Profile::cylinder(1.0, 1.0).unwrap();
        let mat = MaterialSpec::new(0.5 / PI, 1.0 / PI).unwrap();
        let empty = mass_moments(&cyl, &mat, 0.0, TOL).unwrap();
        assert!(close(empty.m0, 1.0, 1e-15) && close(empty.m1, 0.5, 1e-15));
        let full = mass_moments(&cyl, &mat, 1.0, TOL).unwrap();
        assert!(close(full.m0, 2.0, 1e-15) && close(full.m1, 1.0, 1e-15));

        let shell = MaterialSpec::new(1.0, 0.0).unwrap();
        let sphere = Profile::sphere(1.0).unwrap();
        for h in [0.0, 0.7, 2.0] {
            let m = mass_moments(&sphere, &shell, h, TOL).unwrap();
            assert!(close(m.m0, 4.0 * PI, 1e-15) && close(m.m1, 4.0 * PI, 1e-15));
        }
    }

    #[test]
    fn invalid_material() {
        assert!(matches!(MaterialSpec::new(0.0, 0.0), Err(Error::InvalidMaterial(_))));
        assert!(MaterialSpec::new(-1.0, 1.0).is_err());
        let bad = MaterialSpec { alpha: 0.0, beta: 0.0 };
        let cyl = Profile::cylinder(1.0, 1.0).unwrap();
        assert!(matches!(mass_moments(&cyl, &bad, 0.5, TOL), Err(Error::InvalidMaterial(_))));
    }

    #[test]
    fn mass_material_conversion_round_trip() {
        let cyl = Profile::cylinder(1.0, 1.0).unwrap();
        let mass = MassSpec::new(1.0, 3.0, 0.5, 1.0).unwrap();
        let mat = MaterialSpec::from_mass(&cyl, &mass, TOL).unwrap();
        assert!(close(mat.alpha, 0.5 / PI, 1e-15));
        assert!(close(mat.beta, 3.0 / PI, 1e-15));
        let back = MassSpec::from_material(&cyl, &mat, TOL).unwrap();
        assert!(close(back.shell_mass, 1.0, 1e-15) && close(back.fill_mass, 3.0, 1e-15));
        assert!(close(back.shell_cog, 0.5, 1e-15));
    }

    #[test]
    fn cone_shell_centroid_is_two_thirds() {
        let cone = Profile::cone(1.0, 3.0).unwrap();
        let s = surface_moments(&cone, TOL).unwrap();
        assert!(close(s.centroid(), 2.0, 1e-15));
    }

    #[test]
    fn sectioned_solid_matches_revolution() {
        let profile = Profile::cone(1.0, 2.0).unwrap();
        let surface = surface_moments(&profile, TOL).unwrap();
        let solid = SectionedSolid::new(2.0, surface, |z| PI * (z / 2.0).powi(2)).unwrap();
        let a = solid.fill_moments(1.3, 1e-12).unwrap();
        let b = Body::fill_moments(&profile, 1.3, 1e-12).unwrap();
        assert!(close(a.volume, b.volume, 1e-12) && close(a.first, b.first, 1e-12));
        assert!(SectionedSolid::new(1.0, SurfaceMoments { s0: 1.0, s1: 2.0 }, |_| 1.0).is_err());
    }

    #[test]
    fn tabulated_frustum_surface() {
        // straight segment == cone; second segment a cylinder of radius 1
        let t = Profile::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        let s = surface_moments(&t, TOL).unwrap();
        let slant = 2f64.sqrt();
        let cone_area = PI * slant;
        let exact_s0 = cone_area + 2.0 * PI;
        let exact_s1 = cone_area * 2.0 / 3.0 + 2.0 * PI * 1.5;
        assert!(close(s.s0, exact_s0, 1e-8), "{} vs {}", s.s0, exact_s0);
        assert!(close(s.s1, exact_s1, 1e-8));
    }
}
