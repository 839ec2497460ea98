//! Center of gravity of a solid of revolution partially filled with a
//! homogeneous material.
//!
//! The center of gravity `T(h)` of shell plus fill, as a function of the fill
//! level `h`, is lowest exactly when it lies on the fill surface,
//! `T(h) = h`. This crate evaluates `T`, locates that level with a general
//! bracketed engine and with dedicated solvers for cylinders, cones, power
//! solids, spheres and half spheres, and checks the governing identities
//! numerically and against a brute-force slicing oracle.

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod moments;
pub mod oracle;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod scenario;

pub use error::{Error, ParseError, Result};
pub use moments::{Body, MassSpec, MaterialSpec, MomentSet, SectionedSolid, SurfaceMoments};
pub use profile::{parse_profile, Profile, ProfileKind};
