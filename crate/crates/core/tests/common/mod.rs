#![allow(dead_code)]

use cog_core::scenario::{RawScenario, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub const CORPUS_SEED: u64 = 0x5eed_c061;

/// Density pairs each corpus geometry is solved with.
pub const MATERIALS: [(f64, f64); 2] = [(0.05, 1.0), (0.5, 0.3)];

/// Random cubic `g(z) = c0 + c1 z + c2 z² + c3 z³` with positive
/// coefficients, printed as an expression.
pub fn random_polynomial(rng: &mut ChaCha8Rng) -> String {
    let c: Vec<f64> = (0..4).map(|_| rng.gen_range(0.2..1.5)).collect();
    format!("{} + {}*z + {}*z^2 + {}*z^3", c[0], c[1], c[2], c[3])
}

/// Geometries of the property corpus, without material.
pub fn geometries() -> Vec<(String, serde_json::Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut out = vec![
        ("cylinder".to_string(), json!({"kind": "cylinder", "r": 1.0, "H": 1.0})),
        ("cone".to_string(), json!({"kind": "cone", "r": 1.0, "H": 1.0})),
        ("power_0.4".to_string(), json!({"kind": "power", "p": 0.4, "H": 1.0})),
        ("power_1".to_string(), json!({"kind": "power", "p": 1.0, "H": 1.0})),
        ("power_2".to_string(), json!({"kind": "power", "p": 2.0, "H": 1.0})),
        ("sphere".to_string(), json!({"kind": "sphere", "R": 1.0})),
        ("half_sphere".to_string(), json!({"kind": "half_sphere", "R": 1.0})),
    ];
    for i in 0..2 {
        let g = random_polynomial(&mut rng);
        out.push((format!("polynomial_{i}"), json!({"g": g, "H": 1.0})));
    }
    out
}

/// Every geometry with every material pair.
pub fn corpus() -> Vec<(String, serde_json::Value)> {
    let mut out = Vec::new();
    for (name, geometry) in geometries() {
        for (k, (alpha, beta)) in MATERIALS.iter().enumerate() {
            let mut doc = geometry.clone();
            doc["alpha"] = json!(alpha);
            doc["beta"] = json!(beta);
            out.push((format!("{name}/{k}"), doc));
        }
    }
    out
}

pub fn to_scenario(doc: &serde_json::Value) -> Scenario {
    let raw: RawScenario = serde_json::from_value(doc.clone()).expect("corpus document parses");
    raw.validate().expect("corpus scenario is valid")
}

pub fn corpus_scenarios() -> Vec<(String, Scenario)> {
    corpus().into_iter().map(|(name, doc)| (name, to_scenario(&doc))).collect()
}
