//! End-to-end tests of the binary: JSON/CSV outputs, exit codes, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nalgebra::DVector;
use polyiso::movements::zonotope_move_field;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polyiso"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_cube(path: &Path) {
    let cube = polyiso::geom::shapes::cube(3).to_def();
    fs::write(path, serde_json::to_string(&cube).unwrap()).unwrap();
}

#[test]
fn lk_on_cube() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cube.json");
    write_cube(&input);
    let out = run(&["lk", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let l = report["L"].as_f64().unwrap();
    assert!((l - 0.2886751345948129).abs() < 1e-12);
}

#[test]
fn defects_requires_isotropic_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cube.json");
    write_cube(&input);
    let out = run(&["defects", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("isotropize"));
}

#[test]
fn isotropize_round_trips_l() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("simplex.json");
    let iso_path = dir.path().join("iso.json");
    let simplex = polyiso::geom::shapes::standard_simplex(3).to_def();
    fs::write(&input, serde_json::to_string(&simplex).unwrap()).unwrap();

    let before = run(&["lk", "--input", input.to_str().unwrap()]);
    let out = run(&[
        "isotropize",
        "--input",
        input.to_str().unwrap(),
        "--output",
        iso_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let after = run(&["lk", "--input", iso_path.to_str().unwrap()]);
    let l0: serde_json::Value = serde_json::from_str(&stdout(&before)).unwrap();
    let l1: serde_json::Value = serde_json::from_str(&stdout(&after)).unwrap();
    assert!((l0["L"].as_f64().unwrap() - l1["L"].as_f64().unwrap()).abs() <= 1e-9);

    // Defects now succeed; the isotropized simplex is the regular one, so
    // they vanish.
    let defects = run(&["defects", "--input", iso_path.to_str().unwrap()]);
    assert!(defects.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&defects)).unwrap();
    assert_eq!(report["zero_defect"], serde_json::Value::Bool(true));
}

#[test]
fn reflectors_on_isotropic_simplex() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("simplex.json");
    let iso_path = dir.path().join("iso.json");
    let simplex = polyiso::geom::shapes::standard_simplex(3).to_def();
    fs::write(&input, serde_json::to_string(&simplex).unwrap()).unwrap();
    run(&[
        "isotropize",
        "--input",
        input.to_str().unwrap(),
        "--output",
        iso_path.to_str().unwrap(),
    ]);
    let out = run(&["reflectors", "--input", iso_path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for row in rows.as_array().unwrap() {
        assert_eq!(row["is_affine"], serde_json::Value::Bool(true));
        assert_eq!(row["is_euclidean"], serde_json::Value::Bool(true));
    }
}

#[test]
fn rs_scan_hexagon_csv() {
    let dir = tempfile::tempdir().unwrap();
    // Build the hexagon movement with the library, then feed it through the
    // CLI as plain JSON files.
    let (body, field, interval) =
        zonotope_move_field(&DVector::from_column_slice(&[1.0, 1.0]), 0, 1).unwrap();
    let body_path = dir.path().join("hexagon.json");
    fs::write(&body_path, serde_json::to_string(&body.to_def()).unwrap()).unwrap();
    let field_path = dir.path().join("field.json");
    let field_json = serde_json::json!({
        "direction": field.direction().as_slice(),
        "speeds": field.speeds(),
        "odd": field.odd(),
    });
    fs::write(&field_path, field_json.to_string()).unwrap();
    let csv_path = dir.path().join("scan.csv");
    let out = run(&[
        "rs-scan",
        "--input",
        body_path.to_str().unwrap(),
        "--field",
        field_path.to_str().unwrap(),
        "--t-min",
        &interval[0].to_string(),
        "--t-max",
        &interval[1].to_string(),
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,L,valid,volume");
    assert_eq!(lines.len(), 42); // header + 41 samples
    let first: Vec<&str> = lines[1].split(',').collect();
    let l_end: f64 = first[1].parse().unwrap();
    assert!((l_end - 0.2886751345948129).abs() <= 1e-9);
    assert_eq!(first[2], "true");
}

#[test]
fn zono_scan_csv_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let args = |csv: &Path| {
        vec![
            "zono-scan".to_string(),
            "--n".into(),
            "2".into(),
            "--grid-step".into(),
            "0.25".into(),
            "--output".into(),
            csv.to_str().unwrap().to_string(),
        ]
    };
    let out_a = bin().args(args(&csv_a)).output().unwrap();
    let out_b = bin().args(args(&csv_b)).output().unwrap();
    assert!(out_a.status.success());
    assert_eq!(out_a.stdout, out_b.stdout);
    assert_eq!(fs::read(&csv_a).unwrap(), fs::read(&csv_b).unwrap());
    let csv = fs::read_to_string(&csv_a).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "y1,y2,L");
    assert_eq!(csv.lines().count(), 26); // header + 5^2 grid points
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out_a)).unwrap();
    assert!((summary["max_l"].as_f64().unwrap() - 0.2886751345948129).abs() <= 1e-9);
    assert_eq!(summary["argmin"][0], serde_json::json!([1.0, 1.0]));
}

#[test]
fn canonicalize_hexagon() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("zono.json");
    fs::write(
        &input,
        r#"{"dim": 2, "center": [0, 0], "generators": [[1, 0], [0, 1], [1, 1]]}"#,
    )
    .unwrap();
    let out = run(&["canonicalize", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["y"], serde_json::json!([1.0, 1.0]));
    let li = report["L_input"].as_f64().unwrap();
    let lc = report["L_canonical"].as_f64().unwrap();
    assert!((li - lc).abs() <= 1e-9);
}

#[test]
fn prism_identity_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("base.json");
    let square = polyiso::geom::shapes::cube(2).to_def();
    fs::write(&input, serde_json::to_string(&square).unwrap()).unwrap();
    let out = run(&["prism", "--input", input.to_str().unwrap(), "--half-height", "0.5"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["abs_difference"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn missing_file_exits_4() {
    let out = run(&["lk", "--input", "/nonexistent/body.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn near_flat_body_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("thin.json");
    let thin: Vec<Vec<f64>> = polyiso::geom::shapes::cube(3)
        .vertices()
        .iter()
        .map(|v| vec![v[0], v[1], v[2] * 1e-7])
        .collect();
    fs::write(
        &input,
        serde_json::to_string(&serde_json::json!({"dim": 3, "vertices": thin})).unwrap(),
    )
    .unwrap();
    let out = bin()
        .args(["isotropize", "--input", input.to_str().unwrap(), "--output"])
        .arg(dir.path().join("out.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
