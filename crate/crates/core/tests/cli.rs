use std::path::{Path, PathBuf};
use std::process::Command;

use pseudometric::chart::sample_pseudometric;
use pseudometric::densify::{densify_with, DensifyRequest};
use pseudometric::extend::{extend_metric_with, perturb_with, ExtensionProblem};
use pseudometric::family::{family_member, FamilySelector};
use pseudometric::io::{matrix_to_csv, parse_matrix};
use pseudometric::{DistanceMatrix, Tolerance};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut argv = vec!["pseudometric"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = pseudometric::cli::run_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn write_matrix(dir: &TempDir, name: &str, m: &DistanceMatrix) -> PathBuf {
    write(dir, name, &matrix_to_csv(m))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn matrix_out(r: &Run) -> DistanceMatrix {
    assert_eq!(r.code, 0, "stderr: {}", r.err);
    parse_matrix(&r.out).unwrap().matrix
}

fn tol() -> Tolerance {
    Tolerance::new(1e-9).unwrap()
}

#[test]
fn validate_discrete_metric() {
    let dir = TempDir::new().unwrap();
    let f = write_matrix(&dir, "d.csv", &DistanceMatrix::discrete(4, 1.0));
    let r = run(&["validate", "--metric", p(&f)]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["is_metric"], true);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn validate_reports_triangle_violation() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.csv", "0,1,3\n1,0,1\n3,1,0\n");
    let r = run(&["validate", p(&f)]);
    assert_eq!(r.code, 2);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["is_pseudometric"], false);
    let viol = &v["violations"][0];
    assert_eq!(viol["kind"], "triangle");
    assert_eq!(viol["indices"], serde_json::json!([1, 2, 3]));
    assert_eq!(viol["magnitude"], 1.0);

    let pretty = run(&["--pretty", "validate", p(&f)]);
    assert_eq!(pretty.code, 2);
    assert!(pretty.out.contains("not a pseudometric"));
}

#[test]
fn pseudometric_is_not_a_metric() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "z.csv", "0,0\n0,0\n");
    assert_eq!(run(&["validate", p(&f)]).code, 0);
    assert_eq!(run(&["validate", "--metric", p(&f)]).code, 2);
}

#[test]
fn encode_decode_roundtrip_through_files() {
    let dir = TempDir::new().unwrap();
    let d = sample_pseudometric(5, 11, false).unwrap();
    let f = write_matrix(&dir, "d.csv", &d);
    for natural in [false, true] {
        let mut args = vec!["encode", p(&f)];
        if natural {
            args.push("--natural");
        }
        let enc = run(&args);
        assert_eq!(enc.code, 0, "{}", enc.err);
        let coords = write(&dir, "c.json", &enc.out);
        let dec = run(&["decode", p(&coords)]);
        let back = write(&dir, "back.csv", &dec.out);
        let dist = run(&["distance", p(&f), p(&back)]);
        assert_eq!(dist.code, 0);
        let v: Value = serde_json::from_str(&dist.out).unwrap();
        assert!(v["sup_distance"].as_f64().unwrap() <= 1e-9);
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = write_matrix(&dir, "d.csv", &DistanceMatrix::discrete(3, 1.0));
    let two = write_matrix(&dir, "two.csv", &DistanceMatrix::zeros(2));

    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["validate"]).code, 1);
    assert_eq!(run(&["perturb", p(&d), "--pair", "0,1", "--epsilon", "1"]).code, 1);
    assert_eq!(run(&["perturb", p(&d), "--pair", "1,2,3", "--epsilon", "1"]).code, 1);
    assert_eq!(run(&["family"]).code, 1);
    assert_eq!(run(&["validate", "--tolerance=-1", p(&d)]).code, 1);

    let missing = dir.path().join("missing.csv");
    assert_eq!(run(&["validate", p(&missing)]).code, 3);
    let garbage = write(&dir, "g.csv", "0,x\n1,0\n");
    assert_eq!(run(&["validate", p(&garbage)]).code, 3);
    let ragged = write(&dir, "r.csv", "0,1\n1\n");
    assert_eq!(run(&["validate", p(&ragged)]).code, 3);

    assert_eq!(run(&["distance", p(&d), p(&two)]).code, 4);
    assert_eq!(run(&["densify", p(&d), "--epsilon", "0"]).code, 4);
    assert_eq!(run(&["perturb", p(&d), "--pair", "2,2", "--epsilon", "1"]).code, 4);
    assert_eq!(run(&["family", "--bits", "012"]).code, 3);

    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.out.contains("validate"));
}

#[test]
fn densify_matches_library() {
    let dir = TempDir::new().unwrap();
    let d = sample_pseudometric(6, 2, false).unwrap();
    let f = write_matrix(&dir, "d.csv", &d);
    let got = matrix_out(&run(&["densify", p(&f), "--epsilon", "0.05", "--tolerance", "1e-9"]));
    let want = densify_with(&DensifyRequest::new(d.clone(), 0.05), tol()).unwrap();
    assert_eq!(got, want);

    let base = DistanceMatrix::discrete(6, 0.01);
    let b = write_matrix(&dir, "b.csv", &base);
    let got = matrix_out(&run(&[
        "densify", p(&f), "--epsilon", "0.05", "--base", p(&b), "--tolerance", "1e-9", "--json",
    ]));
    let want = densify_with(&DensifyRequest::new(d, 0.05).with_base(base), tol()).unwrap();
    assert_eq!(got, want);
}

#[test]
fn perturb_matches_library() {
    let dir = TempDir::new().unwrap();
    let d = sample_pseudometric(5, 8, false).unwrap();
    let f = write_matrix(&dir, "d.csv", &d);
    let got = matrix_out(&run(&[
        "perturb", p(&f), "--pair", "2,4", "--epsilon", "0.1", "--tolerance", "1e-9",
    ]));
    assert_eq!(got, perturb_with(&d, 1, 3, 0.1, tol()).unwrap());
}

#[test]
fn extend_matches_library() {
    let dir = TempDir::new().unwrap();
    let target = sample_pseudometric(6, 4, true).unwrap();
    let indices = [0usize, 2, 5];
    let subset = target.restrict(&indices).unwrap();
    let s = write_matrix(&dir, "s.csv", &subset);
    let t = write_matrix(&dir, "t.csv", &target);
    let cap = 2.0 * target.max_entry();
    let cap_arg = cap.to_string();
    let got = matrix_out(&run(&[
        "extend", "--subset", p(&s), "--indices", "1,3,6", "--n", "6", "--target", p(&t),
        "--cap", &cap_arg, "--floor", "0.001", "--tolerance", "1e-9",
    ]));
    let want = extend_metric_with(
        &ExtensionProblem {
            subset_metric: subset,
            indices: indices.to_vec(),
            full_n: 6,
            target,
            cap,
            floor: 0.001,
        },
        tol(),
    )
    .unwrap();
    assert_eq!(got, want);
}

#[test]
fn family_matches_library() {
    let got = matrix_out(&run(&["family", "--bits", "0110"]));
    let sel: FamilySelector = "0110".parse().unwrap();
    assert_eq!(got, family_member(&sel));

    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sel.txt", "0111\n1110\n\n");
    let r = run(&["family", "--bits", "0110", "--separation", p(&f)]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["selectors"], 3);
    assert_eq!(v["separation"], 1.0);

    let r = run(&["family", "--enumerate", "4"]);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["members"], 16);
    assert_eq!(v["exhaustive"], true);
    assert_eq!(v["separation"], 1.0);

    let r = run(&["family", "--enumerate", "12", "--pairs", "50", "--seed", "1"]);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["exhaustive"], false);
    assert_eq!(v["separation"], 1.0);
}

#[test]
fn sample_matches_library() {
    let got = matrix_out(&run(&["sample", "--n", "7", "--seed", "42", "--metric"]));
    assert_eq!(got, sample_pseudometric(7, 42, true).unwrap());
    let json = matrix_out(&run(&["sample", "--n", "3", "--seed", "1", "--json"]));
    assert_eq!(json, sample_pseudometric(3, 1, false).unwrap());
}

#[test]
fn binary_runs_end_to_end() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.csv", "0,1,3\n1,0,1\n3,1,0\n");
    let out = Command::new(env!("CARGO_BIN_EXE_pseudometric"))
        .args(["validate", p(&f)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"triangle\""));

    let out = Command::new(env!("CARGO_BIN_EXE_pseudometric"))
        .arg("--version")
        .output()
        .unwrap();
    assert!(out.status.success());
}
