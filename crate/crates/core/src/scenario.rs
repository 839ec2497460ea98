//! Scenario files: one container, one material, solver settings.
//!
//! Scenarios are flat JSON objects, for example
//!
//! ```json
//! { "kind": "sphere", "R": 1, "alpha": 0.018229166666666668, "beta": 1 }
//! { "kind": "cone", "r": 1, "H": 1, "M": 1, "m": 1 }
//! { "g": "sqrt(2*R*z - z^2)", "constants": { "R": 1 }, "H": 2, "alpha": 1, "beta": 1 }
//! ```
//!
//! | key         | meaning                                                   |
//! |-------------|-----------------------------------------------------------|
//! | `kind`      | `cylinder`, `cone`, `power`, `sphere`, `half_sphere`, `expression`, `tabulated`; inferred from `g` or `points` when omitted |
//! | `H`         | height; derived for spheres (`2R`) and half spheres (`R`) and tabulated profiles |
//! | `r`         | cylinder radius or cone top radius                        |
//! | `p`         | power-solid exponent                                      |
//! | `R`         | sphere or half-sphere radius                              |
//! | `g`         | profile expression in `z`                                 |
//! | `constants` | names bound inside `g`                                    |
//! | `points`    | tabulated `[z, g]` pairs                                  |
//! | `alpha`, `beta` | shell surface density and fill volume density         |
//! | `M`, `m`, `shell_cog` | shell mass, full-fill mass, empty-shell centroid (cylinder and cone only) |
//! | `tolerance` | solver tolerance, default `1e-8` or `$COG_DEFAULT_TOL`    |
//! | `samples`   | curve sample count, default 201                           |

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{MassFormModel, MassFormShape, MomentModel, SolidModel};
use crate::error::{Error, Result};
use crate::moments::{MassSpec, MaterialSpec};
use crate::profile::Profile;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 201;
pub const TOLERANCE_ENV: &str = "COG_DEFAULT_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Cylinder,
    Cone,
    Power,
    Sphere,
    HalfSphere,
    Expression,
    Tabulated,
}

/// Scenario file contents before validation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ShapeKind>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(rename = "r", default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(rename = "p", default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub sphere_radius: Option<f64>,
    #[serde(rename = "g", default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub shell_mass: Option<f64>,
    #[serde(rename = "m", default, skip_serializing_if = "Option::is_none")]
    pub fill_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shell_cog: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaterialForm {
    Densities(MaterialSpec),
    /// Lumped masses; only for cylinders and cones.
    Masses { shape: MassFormShape, mass: MassSpec },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub profile: Profile,
    pub material: MaterialForm,
    pub tolerance: f64,
    pub samples: usize,
    pub raw: RawScenario,
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn required(value: Option<f64>, path: &str, kind: &str) -> Result<f64> {
    value.ok_or_else(|| schema(path, format!("required for kind `{kind}`")))
}

fn default_tolerance() -> Result<f64> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(text) => {
            let tol: f64 = text.trim().parse().map_err(|_| {
                Error::Validation(format!("{TOLERANCE_ENV} = `{text}` is not a number"))
            })?;
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::Validation(format!("{TOLERANCE_ENV} must be positive, got {tol}")));
            }
            Ok(tol)
        }
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

/// Quadrature tolerance used for a given solver tolerance.
pub fn quadrature_tolerance(tol: f64) -> f64 {
    (tol * 1e-2).clamp(1e-13, 1e-10)
}

impl RawScenario {
    fn infer_kind(&self) -> Result<ShapeKind> {
        match (self.kind, &self.expression, &self.points) {
            (Some(kind), _, _) => Ok(kind),
            (None, Some(_), None) => Ok(ShapeKind::Expression),
            (None, None, Some(_)) => Ok(ShapeKind::Tabulated),
            (None, Some(_), Some(_)) => Err(schema("g", "`g` and `points` are mutually exclusive")),
            (None, None, None) => Err(schema("kind", "missing; give `kind`, `g` or `points`")),
        }
    }

    fn reject_unused(&self, kind: ShapeKind) -> Result<()> {
        let used: &[&str] = match kind {
            ShapeKind::Cylinder | ShapeKind::Cone => &["H", "r"],
            ShapeKind::Power => &["H", "p"],
            ShapeKind::Sphere | ShapeKind::HalfSphere => &["H", "R"],
            ShapeKind::Expression => &["H", "g", "constants"],
            ShapeKind::Tabulated => &["H", "points"],
        };
        let present = [
            ("H", self.height.is_some()),
            ("r", self.radius.is_some()),
            ("p", self.exponent.is_some()),
            ("R", self.sphere_radius.is_some()),
            ("g", self.expression.is_some()),
            ("constants", self.constants.is_some()),
            ("points", self.points.is_some()),
        ];
        for (name, is_present) in present {
            if is_present && !used.contains(&name) {
                return Err(schema(name, format!("not used by kind `{}`", kind_name(kind))));
            }
        }
        Ok(())
    }

    fn profile(&self, kind: ShapeKind) -> Result<Profile> {
        let name = kind_name(kind);
        let check_height = |derived: f64| -> Result<()> {
            match self.height {
                Some(h) if h != derived => Err(Error::Validation(format!(
                    "H = {h} contradicts the height {derived} implied by kind `{name}`"
                ))),
                _ => Ok(()),
            }
        };
        let profile = match kind {
            ShapeKind::Cylinder => Profile::cylinder(
                required(self.radius, "r", name)?,
                required(self.height, "H", name)?,
            ),
            ShapeKind::Cone => Profile::cone(
                required(self.radius, "r", name)?,
                required(self.height, "H", name)?,
            ),
            ShapeKind::Power => Profile::power(
                required(self.exponent, "p", name)?,
                required(self.height, "H", name)?,
            ),
            ShapeKind::Sphere => {
                let r = required(self.sphere_radius, "R", name)?;
                check_height(2.0 * r)?;
                Profile::sphere(r)
            }
            ShapeKind::HalfSphere => {
                let r = required(self.sphere_radius, "R", name)?;
                check_height(r)?;
                Profile::half_sphere(r)
            }
            ShapeKind::Expression => {
                let text = self.expression.as_deref().ok_or_else(|| schema("g", "required for kind `expression`"))?;
                let constants = self.constants.clone().unwrap_or_default();
                Profile::expression(text, required(self.height, "H", name)?, &constants)
            }
            ShapeKind::Tabulated => {
                let points = self.points.clone().ok_or_else(|| schema("points", "required for kind `tabulated`"))?;
                if let Some(&(z, _)) = points.last() {
                    check_height(z)?;
                }
                Profile::tabulated(points)
            }
        };
        profile.map_err(|e| match e {
            Error::Domain(msg) => Error::Validation(msg),
            other => other,
        })
    }

    fn material(&self, kind: ShapeKind, height: f64) -> Result<MaterialForm> {
        let densities = self.alpha.is_some() || self.beta.is_some();
        let masses = self.shell_mass.is_some() || self.fill_mass.is_some() || self.shell_cog.is_some();
        match (densities, masses) {
            (true, true) => Err(schema(
                "material",
                "give either `alpha`/`beta` or `M`/`m`/`shell_cog`, not both",
            )),
            (false, false) => Err(schema("material", "missing; give `alpha` and `beta`, or `M` and `m`")),
            (true, false) => {
                let alpha = self.alpha.ok_or_else(|| schema("alpha", "required with `beta`"))?;
                let beta = self.beta.ok_or_else(|| schema("beta", "required with `alpha`"))?;
                let spec = MaterialSpec::new(alpha, beta)
                    .map_err(|e| Error::Validation(e.to_string()))?;
                Ok(MaterialForm::Densities(spec))
            }
            (false, true) => {
                let shape = match kind {
                    ShapeKind::Cylinder => MassFormShape::Cylinder,
                    ShapeKind::Cone => MassFormShape::Cone,
                    other => {
                        return Err(Error::Validation(format!(
                            "the mass form (M, m) applies to cylinders and cones, not `{}`",
                            kind_name(other)
                        )))
                    }
                };
                let shell_mass = self.shell_mass.ok_or_else(|| schema("M", "required with `m`"))?;
                let fill_mass = self.fill_mass.ok_or_else(|| schema("m", "required with `M`"))?;
                let shell_cog = self.shell_cog.unwrap_or_else(|| shape.default_shell_cog(height));
                let mass = MassSpec::new(shell_mass, fill_mass, shell_cog, height)
                    .map_err(|e| Error::Validation(e.to_string()))?;
                Ok(MaterialForm::Masses { shape, mass })
            }
        }
    }

    pub fn validate(&self) -> Result<Scenario> {
        let kind = self.infer_kind()?;
        self.reject_unused(kind)?;
        let profile = self.profile(kind)?;
        let material = self.material(kind, profile.height())?;
        let tolerance = match self.tolerance {
            Some(t) if t > 0.0 && t.is_finite() => t,
            Some(t) => return Err(Error::Validation(format!("tolerance must be positive, got {t}"))),
            None => default_tolerance()?,
        };
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(Error::Validation(format!("samples must be at least 2, got {samples}")));
        }
        Ok(Scenario { profile, material, tolerance, samples, raw: self.clone() })
    }
}

fn kind_name(kind: ShapeKind) -> &'static str {
    match kind {
        ShapeKind::Cylinder => "cylinder",
        ShapeKind::Cone => "cone",
        ShapeKind::Power => "power",
        ShapeKind::Sphere => "sphere",
        ShapeKind::HalfSphere => "half_sphere",
        ShapeKind::Expression => "expression",
        ShapeKind::Tabulated => "tabulated",
    }
}

/// Parses and validates scenario JSON text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema { path, message: e.into_inner().to_string() }
    })?;
    raw.validate()
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

/// Either evaluation model a scenario can describe.
#[derive(Debug, Clone)]
pub enum ScenarioModel {
    Solid(SolidModel<Profile>),
    MassForm(MassFormModel),
}

impl ScenarioModel {
    pub fn as_model(&self) -> &dyn MomentModel {
        match self {
            ScenarioModel::Solid(m) => m,
            ScenarioModel::MassForm(m) => m,
        }
    }
}

impl Scenario {
    pub fn height(&self) -> f64 {
        self.profile.height()
    }

    pub fn quadrature_tolerance(&self) -> f64 {
        quadrature_tolerance(self.tolerance)
    }

    pub fn model(&self) -> Result<ScenarioModel> {
        Ok(match &self.material {
            MaterialForm::Densities(spec) => {
                ScenarioModel::Solid(SolidModel::new(self.profile.clone(), *spec, self.quadrature_tolerance())?)
            }
            MaterialForm::Masses { shape, mass } => {
                ScenarioModel::MassForm(MassFormModel::new(*shape, *mass, self.height())?)
            }
        })
    }

    /// Densities on this profile, converting a mass form via
    /// `alpha = M / S0`, `beta = m / V`.
    pub fn densities(&self) -> Result<MaterialSpec> {
        match &self.material {
            MaterialForm::Densities(spec) => Ok(*spec),
            MaterialForm::Masses { mass, .. } => {
                MaterialSpec::from_mass(&self.profile, mass, self.quadrature_tolerance())
            }
        }
    }

    /// Surface-of-revolution model of the same container, whatever form
    /// the material was given in.
    pub fn solid_model(&self) -> Result<SolidModel<Profile>> {
        SolidModel::new(self.profile.clone(), self.densities()?, self.quadrature_tolerance())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::cog;

    #[test]
    fn sphere_height_is_derived() {
        let s = parse_scenario(r#"{"kind":"sphere","R":1,"alpha":1,"beta":1}"#).unwrap();
        assert_eq!(s.height(), 2.0);
        assert_eq!(s.tolerance, DEFAULT_TOLERANCE);
        assert_eq!(s.samples, DEFAULT_SAMPLES);
    }

    #[test]
    fn both_material_forms_rejected() {
        let err = parse_scenario(r#"{"kind":"cylinder","r":1,"H":1,"alpha":1,"beta":1,"M":1,"m":1}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path == "material"), "{err:?}");
    }

    #[test]
    fn expression_sphere_matches_named_sphere() {
        let expr = parse_scenario(r#"{"g":"sqrt(2*z-z^2)","H":2,"alpha":1,"beta":1}"#).unwrap();
        let named = parse_scenario(r#"{"kind":"sphere","R":1,"alpha":1,"beta":1}"#).unwrap();
        let (a, b) = (expr.model().unwrap(), named.model().unwrap());
        for h in [0.0, 0.5, 1.0, 1.7, 2.0] {
            let ta = cog(a.as_model(), h).unwrap();
            let tb = cog(b.as_model(), h).unwrap();
            assert!((ta - tb).abs() < 1e-9, "h = {h}: {ta} vs {tb}");
        }
    }

    #[test]
    fn schema_errors_carry_paths() {
        let err = parse_scenario(r#"{"kind":"tabulated","points":[[0,1],[1,"x"]],"alpha":1,"beta":1}"#)
            .unwrap_err();
        match err {
            Error::Schema { path, .. } => assert!(path.starts_with("points[1]"), "{path}"),
            other => panic!("{other:?}"),
        }
        let err = parse_scenario(r#"{"kind":"cylinder","r":1,"H":1,"alpha":1,"beta":1,"colour":2}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Schema { .. }));
        let err = parse_scenario(r#"{"kind":"cylinder","H":1,"alpha":1,"beta":1}"#).unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path == "r"));
        let err = parse_scenario(r#"{"kind":"cylinder","r":1,"H":1,"R":2,"alpha":1,"beta":1}"#).unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path == "R"));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            parse_scenario(r#"{"kind":"cylinder","r":-1,"H":1,"alpha":1,"beta":1}"#),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_scenario(r#"{"kind":"sphere","R":1,"H":3,"alpha":1,"beta":1}"#),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_scenario(r#"{"kind":"sphere","R":1,"M":1,"m":1}"#),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_scenario(r#"{"kind":"cylinder","r":1,"H":1,"alpha":0,"beta":0}"#),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_scenario(r#"{"g":"2*","H":1,"alpha":1,"beta":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn mass_form_defaults() {
        let s = parse_scenario(r#"{"kind":"cone","r":1,"H":2,"M":1,"m":1}"#).unwrap();
        match s.material {
            MaterialForm::Masses { shape, mass } => {
                assert_eq!(shape, MassFormShape::Cone);
                assert_eq!(mass.shell_cog, 1.5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cylinder_mass_form_converts_to_densities() {
        let s = parse_scenario(r#"{"kind":"cylinder","r":1,"H":1,"M":1,"m":1}"#).unwrap();
        let d = s.densities().unwrap();
        assert!((d.alpha - 0.5 / std::f64::consts::PI).abs() < 1e-15);
        assert!((d.beta - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    }
}
