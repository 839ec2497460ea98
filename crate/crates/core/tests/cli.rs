use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cog_core::cli::SolveReport;
use tempfile::TempDir;

fn cog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cog"))
        .args(args)
        .env_remove("COG_DEFAULT_TOL")
        .output()
        .expect("cog runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CYLINDER: &str = r#"{"kind":"cylinder","r":1,"H":1,"M":1,"m":1}"#;
const SPHERE: &str = r#"{"kind":"sphere","R":1,"alpha":1,"beta":1}"#;

fn eval_t(scenario: &Path, h: &str) -> f64 {
    let out = cog(&["eval", "--scenario", s(scenario), "--h", h, "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    v["T"].as_f64().unwrap()
}

#[test]
fn eval_endpoints() {
    let dir = TempDir::new().unwrap();
    let cyl = write(&dir, "cyl.json", CYLINDER);
    assert!((eval_t(&cyl, "0") - 0.5).abs() < 1e-15);
    let sphere = write(&dir, "sphere.json", SPHERE);
    assert!((eval_t(&sphere, "2") - 1.0).abs() < 1e-12);
}

#[test]
fn eval_out_of_range_is_input_error() {
    let dir = TempDir::new().unwrap();
    let cyl = write(&dir, "cyl.json", CYLINDER);
    let out = cog(&["eval", "--scenario", s(&cyl), "--h", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("h outside [0,H]"));
}

#[test]
fn bad_scenarios_exit_2() {
    let dir = TempDir::new().unwrap();
    let both = write(&dir, "both.json", r#"{"kind":"cylinder","r":1,"H":1,"alpha":1,"beta":1,"M":1,"m":1}"#);
    let out = cog(&["solve", "--scenario", s(&both)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("material"));
    let out = cog(&["solve", "--scenario", "/definitely/missing.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_json_round_trips() {
    let dir = TempDir::new().unwrap();
    let cyl = write(&dir, "cyl.json", CYLINDER);
    let out = cog(&["solve", "--scenario", s(&cyl), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let report: SolveReport = serde_json::from_str(&text).unwrap();
    assert!((report.general.h_star - 0.414214).abs() < 1e-6);
    let special = report.special.unwrap();
    assert!(special.difference.abs() < 1e-10);
    assert_eq!(serde_json::to_string_pretty(&report).unwrap(), text.trim_end());
}

#[test]
fn solve_cone_mass_form_and_massless_shell() {
    let dir = TempDir::new().unwrap();
    let cone = write(&dir, "cone.json", r#"{"kind":"cone","r":1,"H":1,"M":1,"m":1}"#);
    let report: SolveReport =
        serde_json::from_str(&stdout(&cog(&["solve", "--scenario", s(&cone), "--json"]))).unwrap();
    assert!((report.general.h_star - 0.65593).abs() < 1e-5);
    let empty = write(&dir, "empty.json", r#"{"kind":"sphere","R":1,"alpha":0,"beta":1}"#);
    let out = cog(&["solve", "--scenario", s(&empty)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("h*          0\n"), "{text}");
    assert!(text.contains("massless shell"));
}

#[test]
fn tolerance_env_override() {
    let dir = TempDir::new().unwrap();
    let power = write(&dir, "p.json", r#"{"kind":"power","p":2,"H":1,"alpha":0.1,"beta":1}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_cog"))
        .args(["solve", "--scenario", s(&power), "--json"])
        .env("COG_DEFAULT_TOL", "1e-3")
        .output()
        .unwrap();
    let loose: SolveReport = serde_json::from_str(&stdout(&out)).unwrap();
    let tight: SolveReport =
        serde_json::from_str(&stdout(&cog(&["solve", "--scenario", s(&power), "--json"]))).unwrap();
    assert!(loose.general.fixed_point_residual <= 1e-3);
    assert!(tight.general.fixed_point_residual <= 1e-8);
    assert!(loose.general.iterations <= tight.general.iterations);
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn curve_csv_layout() {
    let dir = TempDir::new().unwrap();
    let cyl = write(&dir, "cyl.json", CYLINDER);
    let out = dir.path().join("cyl.csv");
    assert_eq!(cog(&["curve", "--scenario", s(&cyl), "--out", s(&out)]).status.code(), Some(0));
    let rows = read_csv(&out);
    assert_eq!(rows[0], ["h", "T", "dT", "m0", "m1"]);
    assert_eq!(rows.len(), 202);
    let t = |row: &Vec<String>| row[1].parse::<f64>().unwrap();
    assert!((t(&rows[1]) - 0.5).abs() < 1e-15);
    assert!((t(&rows[201]) - 0.5).abs() < 1e-15);
    assert_eq!(rows[1][0], "0.0000000000000000e0");

    assert_eq!(cog(&["curve", "--scenario", s(&cyl), "--out", s(&out), "--samples", "2"]).status.code(), Some(0));
    assert_eq!(read_csv(&out).len(), 3);
}

#[test]
fn sphere_curve_minimum_near_solution() {
    let dir = TempDir::new().unwrap();
    let sphere = write(&dir, "sphere.json", SPHERE);
    let out = dir.path().join("sphere.csv");
    cog(&["curve", "--scenario", s(&sphere), "--out", s(&out)]);
    let rows = read_csv(&out);
    let (h_min, _) = rows[1..]
        .iter()
        .map(|r| (r[0].parse::<f64>().unwrap(), r[1].parse::<f64>().unwrap()))
        .fold((0.0, f64::INFINITY), |best, (h, t)| if t < best.1 { (h, t) } else { best });
    let report: SolveReport =
        serde_json::from_str(&stdout(&cog(&["solve", "--scenario", s(&sphere), "--json"]))).unwrap();
    let t_min = rows[1..].iter().map(|r| r[1].parse::<f64>().unwrap()).fold(f64::INFINITY, f64::min);
    assert!((t_min - report.general.t_star).abs() < 1e-3);
    assert!((h_min - report.general.h_star).abs() <= 2.0 / 200.0);
}

#[test]
fn sweeps() {
    let dir = TempDir::new().unwrap();
    let sphere = write(&dir, "sphere.json", r#"{"kind":"sphere","R":1,"alpha":0.01,"beta":1}"#);
    let out = dir.path().join("sweep.csv");
    let status = cog(&[
        "sweep", "--scenario", s(&sphere), "--param", "alpha", "--from", "0.001", "--to", "0.017",
        "--steps", "20", "--out", s(&out),
    ]);
    assert_eq!(status.status.code(), Some(0));
    let rows = read_csv(&out);
    assert_eq!(rows[0], ["alpha", "h_star", "T_star"]);
    assert_eq!(rows.len(), 21);
    let h: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(h.windows(2).all(|w| w[1] > w[0]));

    let cyl = write(&dir, "cyl.json", CYLINDER);
    cog(&["sweep", "--scenario", s(&cyl), "--param", "m", "--from", "1", "--to", "3", "--steps", "2", "--out", s(&out)]);
    let rows = read_csv(&out);
    let h: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert!((h[0] - (2f64.sqrt() - 1.0)).abs() < 1e-8);
    assert!((h[1] - 1.0 / 3.0).abs() < 1e-8);

    cog(&["sweep", "--scenario", s(&cyl), "--param", "M", "--from", "2", "--to", "9", "--steps", "1", "--out", s(&out)]);
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0].parse::<f64>().unwrap(), 2.0);

    let bad = cog(&["sweep", "--scenario", s(&cyl), "--param", "gamma", "--from", "1", "--to", "2", "--steps", "2", "--out", s(&out)]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let dir = TempDir::new().unwrap();
    let cyl = write(&dir, "cyl.json", CYLINDER);
    let out = cog(&["verify", "--scenario", s(&cyl)]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));

    let sphere = write(&dir, "sphere.json", r#"{"kind":"sphere","R":1,"alpha":0.018229166666666668,"beta":1}"#);
    let out = cog(&["verify", "--scenario", s(&sphere)]);
    assert_eq!(out.status.code(), Some(0));
    let first = stdout(&out).lines().next().unwrap().to_string();
    let h: f64 = first.trim_start_matches("h* = ").parse().unwrap();
    assert!((h - 0.5).abs() < 1e-8);

    let cone = write(&dir, "cone.json", r#"{"kind":"cone","r":1,"H":1,"M":1,"m":1}"#);
    let out = cog(&["verify", "--scenario", s(&cone)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NOTE lumped cone formulas"));
}
