mod common;

use std::collections::BTreeMap;

use cog_core::equilibrium::{
    closed_form_cylinder, cog, cog_derivative, solve_cone_cubic, solve_fixed_point,
    solve_power_equation, MassFormModel, MassFormShape, MomentModel, SolidModel,
};
use cog_core::moments::{fill_integrals, fill_integrals_by_quadrature, surface_moments};
use cog_core::oracle::oracle_cog;
use cog_core::profile::parse_expression;
use cog_core::{parse_profile, MaterialSpec, Profile};
use proptest::prelude::*;

fn polynomial_text(c: &[f64]) -> String {
    format!("{} + {}*z - {}*z^2 + {}*z^3", c[0], c[1], c[2], c[3])
}

/// Fourth-order central difference.
fn five_point(f: impl Fn(f64) -> f64, x: f64, step: f64) -> f64 {
    (f(x - 2.0 * step) - 8.0 * f(x - step) + 8.0 * f(x + step) - f(x + 2.0 * step)) / (12.0 * step)
}

fn named_profiles() -> Vec<Profile> {
    vec![
        Profile::cylinder(0.7, 1.3).unwrap(),
        Profile::cone(1.2, 0.8).unwrap(),
        Profile::power(0.4, 1.0).unwrap(),
        Profile::power(2.0, 1.5).unwrap(),
        Profile::sphere(0.9).unwrap(),
        Profile::half_sphere(1.4).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn expression_derivative_matches_finite_difference(
        c in prop::collection::vec(0.1f64..2.0, 4),
        p in 0.5f64..3.0,
    ) {
        let text = format!("sqrt({}) * (1 + z)^{p}", polynomial_text(&[c[0] + 1.0, c[1], 0.0, c[3]]));
        let profile = parse_profile(&text, 1.0).unwrap();
        for i in 0..100 {
            let z = 0.01 + 0.98 * i as f64 / 99.0;
            let exact = profile.eval_g_prime(z).unwrap();
            let fd = five_point(|z| profile.eval_g(z).unwrap(), z, 1e-3);
            prop_assert!((exact - fd).abs() <= 1e-7 * (1.0 + exact.abs()), "z = {z}: {exact} vs {fd}");
        }
    }

    #[test]
    fn printed_expression_reparses(c in prop::collection::vec(0.1f64..2.0, 4), k in 1.0f64..3.0) {
        let mut constants = BTreeMap::new();
        constants.insert("k".to_string(), k);
        let text = format!("k * ({}) / (2 + z^1.5) - -z", polynomial_text(&c));
        let ast = parse_expression(&text, &constants).unwrap();
        let again = parse_expression(&ast.to_string(), &BTreeMap::new()).unwrap();
        for i in 0..100 {
            let z = i as f64 / 99.0;
            prop_assert_eq!(ast.eval(z), again.eval(z));
        }
    }

    #[test]
    fn fill_moment_rate_identity(p in 0.3f64..3.0, h in 0.1f64..0.9) {
        // d I1 / dh = h d I0 / dh
        let profile = Profile::power(p, 1.0).unwrap();
        let i0 = |x: f64| fill_integrals(&profile, x, 1e-12).unwrap().i0;
        let i1 = |x: f64| fill_integrals(&profile, x, 1e-12).unwrap().i1;
        let d0 = five_point(i0, h, 1e-3);
        let d1 = five_point(i1, h, 1e-3);
        prop_assert!((d1 - h * d0).abs() <= 1e-8, "{d1} vs {}", h * d0);
    }

    #[test]
    fn closed_forms_match_quadrature(r in 0.2f64..3.0, height in 0.2f64..3.0, seed in 0u64..1000) {
        let h_values: Vec<f64> = (0..20).map(|i| height * ((seed + i) as f64 * 0.618_033_988_749_895).fract()).collect();
        for profile in [
            Profile::cylinder(r, height).unwrap(),
            Profile::cone(r, height).unwrap(),
            Profile::power(r, height).unwrap(),
            Profile::sphere(r).unwrap(),
            Profile::half_sphere(r).unwrap(),
        ] {
            let top = profile.height();
            for h in &h_values {
                let h = h / height * top;
                let closed = fill_integrals(&profile, h, 1e-12).unwrap();
                let quad = fill_integrals_by_quadrature(&profile, h, 1e-12).unwrap();
                prop_assert!((closed.i0 - quad.i0).abs() <= 1e-9 * (1.0 + closed.i0.abs()));
                prop_assert!((closed.i1 - quad.i1).abs() <= 1e-9 * (1.0 + closed.i1.abs()));
            }
        }
    }

    #[test]
    fn mass_grows_and_cog_stays_inside(alpha in 0.0f64..2.0, beta in 0.01f64..2.0) {
        let material = MaterialSpec::new(alpha, beta).unwrap();
        for profile in named_profiles() {
            let surface = surface_moments(&profile, 1e-10).unwrap();
            let height = profile.height();
            prop_assert!(surface.s1 <= height * surface.s0);
            let model = SolidModel::new(profile, material, 1e-10).unwrap();
            let mut last = -1.0;
            for i in 0..=50 {
                let h = height * i as f64 / 50.0;
                let m0 = model.masses(h).unwrap().m0;
                prop_assert!(m0 >= last);
                last = m0;
                let t = cog(&model, h).unwrap();
                prop_assert!(t >= -1e-12 && t <= height * (1.0 + 1e-12), "T({h}) = {t}");
            }
        }
    }

    #[test]
    fn slope_matches_finite_difference(alpha in 0.01f64..1.0, beta in 0.1f64..2.0) {
        let material = MaterialSpec::new(alpha, beta).unwrap();
        for profile in named_profiles() {
            let height = profile.height();
            let model = SolidModel::new(profile, material, 1e-13).unwrap();
            for frac in [0.2, 0.5, 0.7] {
                let h = frac * height;
                let exact = cog_derivative(&model, h).unwrap();
                let fd = five_point(|x| cog(&model, x).unwrap(), h, 1e-3 * height);
                prop_assert!((exact - fd).abs() <= 1e-6 * (1.0 + exact.abs()), "{exact} vs {fd}");
            }
        }
    }

    #[test]
    fn mass_form_solvers_scale_with_length(mass in 0.1f64..5.0, fill in 0.1f64..5.0, height in 0.1f64..3.0) {
        let cyl = closed_form_cylinder(mass, fill, height);
        let cone = solve_cone_cubic(mass, fill, height).unwrap();
        for s in [2.0, 10.0] {
            prop_assert!((closed_form_cylinder(mass, fill, s * height) - s * cyl).abs() <= 1e-12 * s * height);
            prop_assert!((solve_cone_cubic(mass, fill, s * height).unwrap() - s * cone).abs() <= 1e-10 * s * height);
        }
    }
}

#[test]
fn mass_form_cylinder_matches_general_engine() {
    for (mass, fill) in [(1.0, 1.0), (1.0, 3.0), (0.3, 2.0), (4.0, 0.5)] {
        let model = MassFormModel::standard(MassFormShape::Cylinder, mass, fill, 2.0).unwrap();
        let general = solve_fixed_point(&model, 1e-13).unwrap().h_star;
        assert!((general - closed_form_cylinder(mass, fill, 2.0)).abs() < 1e-10);
        let model = MassFormModel::standard(MassFormShape::Cone, mass, fill, 2.0).unwrap();
        let general = solve_fixed_point(&model, 1e-13).unwrap().h_star;
        assert!((general - solve_cone_cubic(mass, fill, 2.0).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn power_one_is_a_cone() {
    let material = MaterialSpec::new(0.2, 1.0).unwrap();
    let power = solve_power_equation(1.0, 1.0, &material, 1e-12).unwrap();
    let cone = SolidModel::new(Profile::cone(1.0, 1.0).unwrap(), material, 1e-12).unwrap();
    let general = solve_fixed_point(&cone, 1e-12).unwrap().h_star;
    assert!((power - general).abs() < 1e-8);
}

#[test]
fn oracle_error_shrinks_with_refinement() {
    let material = MaterialSpec::new(0.3, 1.0).unwrap();
    for profile in named_profiles() {
        let height = profile.height();
        let h = 0.63 * height;
        let model = SolidModel::new(profile.clone(), material, 1e-13).unwrap();
        let exact = cog(&model, h).unwrap();
        let e1 = (oracle_cog(&profile, &material, h, 500).unwrap() - exact).abs();
        let e2 = (oracle_cog(&profile, &material, h, 2000).unwrap() - exact).abs();
        if e1 < 1e-12 * height {
            continue;
        }
        let order = (e1 / e2).ln() / 4f64.ln();
        assert!(order >= 1.0, "{:?}: order {order}", profile.kind());
    }
}

#[test]
fn corpus_has_required_shapes() {
    let corpus = common::corpus_scenarios();
    assert!(corpus.len() >= 12);
    for (name, scenario) in &corpus {
        let model = scenario.model().unwrap();
        let h_star = solve_fixed_point(model.as_model(), 1e-10).unwrap().h_star;
        assert!(h_star > 0.0 && h_star < scenario.height(), "{name}: {h_star}");
    }
}
