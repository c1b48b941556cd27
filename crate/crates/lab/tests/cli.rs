use std::path::PathBuf;
use std::process::Command;

use kreinrel::fixtures::{flip_gamma, flip_triple};
use kreinrel::linalg::{self, c};
use kreinrel_lab::cli;
use kreinrel_lab::io;

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/ex4.json").display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["kreinrel"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn fixture_roundtrips_bit_exactly() {
    let path = fixture();
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = io::parse(&path, &text).unwrap();
    assert_eq!(io::render(&doc), text);
}

#[test]
fn fixture_triple_is_the_flip_triple() {
    let loaded = io::load(&fixture()).unwrap();
    let tr = loaded.triple.unwrap();
    let reference = flip_triple().unwrap();
    assert!(linalg::max_abs(&(tr.ambient() - reference.ambient())) < 1e-12);
    let on_tplus = reference.frame();
    assert!(linalg::max_abs(&(tr.ambient() * on_tplus - flip_gamma() * on_tplus)) < 1e-12);
}

#[test]
fn validate_fixture() {
    let (code, out, _) = run(&["triple", "validate", &fixture()]);
    assert_eq!(code, 0);
    assert!(out.contains("valid boundary triple, boundary dimension 3"));
    assert!(out.contains("T0 (dim 4)") && out.contains("T1 (dim 4)") && out.contains("beta:"));
}

#[test]
fn weyl_at_one_plus_two_i() {
    let (code, out, _) = run(&["--format", "json", "weyl", "--z", "1+2i", &fixture()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let z = c(1.0, 2.0);
    let expected = [[c(0.0, 0.0), c(0.0, 0.0), z], [c(0.0, 0.0), c(0.0, 0.0), z * z], [z, z * z, c(0.0, 0.0)]];
    for (i, row) in expected.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let got = &v["M"][i][j];
            let g = c(got[0].as_f64().unwrap(), got[1].as_f64().unwrap());
            assert!((g - e).norm() < 1e-10, "M[{i}][{j}] = {g}, expected {e}");
        }
    }
}

#[test]
fn triple_weyl_and_alias_agree() {
    let a = run(&["triple", "weyl", &fixture(), "--z", "-1+i"]);
    let b = run(&["weyl", "--z", "-1+i", &fixture()]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}

#[test]
fn relation_check_reports_defects() {
    let (code, out, _) = run(&["relation", "check", &fixture()]);
    assert_eq!(code, 0);
    assert!(out.contains("defect numbers (3, 3)"));
    assert!(out.contains("symmetric true"));
}

#[test]
fn flip_example_is_rejected_by_similarity() {
    let (code, out, _) = run(&["similar", &fixture(), &fixture()]);
    assert_eq!(code, 1);
    assert!(out.contains("not in the resolvent sets"));
}

#[test]
fn scaled_triple_is_not_similar() {
    let tr = flip_triple().unwrap().k_shift(&linalg::eye(3)).unwrap();
    let a = tmp("shifted.json");
    let b = tmp("shifted_scaled.json");
    std::fs::write(&a, io::render(&io::triple_document(&tr))).unwrap();
    std::fs::write(&b, io::render(&io::triple_document(&tr.scaled(2.0).unwrap()))).unwrap();
    let (code, out, _) = run(&["similar", a.to_str().unwrap(), b.to_str().unwrap(), "--grid", "1+2i,2+i"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("not similar"));
    let (code, out, _) = run(&["similar", a.to_str().unwrap(), a.to_str().unwrap(), "--grid", "1+2i,2+i"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("similar"));
}

#[test]
fn transform_output_is_loadable() {
    let (code, out, _) = run(&["triple", "transform", &fixture(), "--kind", "transpose"]);
    assert_eq!(code, 0);
    let path = tmp("transposed.json");
    std::fs::write(&path, &out).unwrap();
    let (code, _, err) = run(&["triple", "validate", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn input_errors_exit_two() {
    let (code, _, err) = run(&["relation", "check", "/definitely/missing.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.json"));

    let path = tmp("broken.json");
    std::fs::write(&path, "{\n  \"space\": {\"dim\": 2,\n  }\n}\n").unwrap();
    let (code, _, err) = run(&["relation", "check", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("broken.json:3:"), "{err}");

    let path = tmp("shape.json");
    std::fs::write(&path, r#"{"space": {"dim": 2, "J": [[[1,0],[0,0]]]}}"#).unwrap();
    let (code, _, err) = run(&["relation", "check", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("space.J"), "{err}");

    let (code, _, _) = run(&["weyl", "--z", "nonsense", &fixture()]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn invalid_triple_is_a_rejection() {
    let mut doc = io::read(fixture()).unwrap();
    doc.triple.as_mut().unwrap().gamma[0][0] = [3.0, 0.0];
    let path = tmp("bad_gamma.json");
    std::fs::write(&path, io::render(&doc)).unwrap();
    let (code, out, _) = run(&["triple", "validate", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn verify_writes_a_report_that_rerenders() {
    let path = tmp("boundary_report.json");
    let (code, text, _) =
        run(&["verify", "--suite", "boundary", "--trials", "5", "--seed", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let (code, again, _) = run(&["report", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(text, again);
    let (_, second, _) = run(&["verify", "--suite", "boundary", "--trials", "5", "--seed", "4"]);
    assert_eq!(text, second);
}

#[test]
fn grid_parsing_closes_under_conjugation() {
    let g = cli::parse_grid("1+2i, 3i").unwrap();
    assert_eq!(g, vec![c(1.0, 2.0), c(1.0, -2.0), c(0.0, 3.0), c(0.0, -3.0)]);
    assert_eq!(cli::parse_grid("default").unwrap(), kreinrel::extensions::default_grid());
    assert!(cli::parse_grid("1+").is_err());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kreinrel");
    let ok = Command::new(bin).args(["triple", "validate", &fixture()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let rejected = Command::new(bin).args(["similar", &fixture(), &fixture()]).output().unwrap();
    assert_eq!(rejected.status.code(), Some(1));
    let bad = Command::new(bin).args(["relation", "parts", "/no/such/file"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
