//! End-to-end runs of the `lfda` binary.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::iris_path;
use tempfile::TempDir;

fn lfda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lfda"))
        .args(args)
        .output()
        .expect("run lfda")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(o: &Output) {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    assert!(o.stderr.is_empty(), "success wrote to stderr: {}", stderr(o));
}

fn fails_with(o: &Output, code: i32, needle: &str) {
    assert_eq!(o.status.code(), Some(code), "stdout: {}", stdout(o));
    let err = stderr(o);
    assert!(err.contains(needle), "expected '{needle}' in: {err}");
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn fit_iris(dir: &TempDir, name: &str, extra: &[&str]) -> (Output, std::path::PathBuf) {
    let out = dir.path().join(name);
    let iris = iris_path();
    let mut args = vec!["fit", "--input", p(&iris), "--label-col", "species", "--output", p(&out)];
    args.extend_from_slice(extra);
    (lfda(&args), out)
}

#[test]
fn fit_lfda_on_iris() {
    let dir = TempDir::new().unwrap();
    let (o, model) = fit_iris(&dir, "m.json", &["--method", "lfda", "--r", "3", "--metric", "plain"]);
    ok(&o);
    let line = stdout(&o);
    assert_eq!(line.lines().count(), 1);
    assert!(line.starts_with("lfda n=150 d=4 r=3 eigenvalues=["), "{line}");
    let i = lfda(&["inspect", "--model", p(&model)]);
    ok(&i);
    let text = stdout(&i);
    for key in ["kind: lfda", "transform: 4x3", "embedded: 150x3", "metric: plain", "transformable: true"] {
        assert!(text.contains(key), "missing {key} in\n{text}");
    }
}

#[test]
fn rank_above_feature_count_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (o, model) = fit_iris(&dir, "m.json", &["--method", "lfda", "--r", "9"]);
    fails_with(&o, 2, "r exceeds feature count");
    assert!(!model.exists());
}

#[test]
fn self_reports_label_counts() {
    let dir = TempDir::new().unwrap();
    let (o, _) = fit_iris(
        &dir,
        "s.json",
        &["--method", "self", "--r", "3", "--beta", "0.1", "--discard-fraction", "0.1", "--seed", "42"],
    );
    ok(&o);
    assert!(stdout(&o).contains("135 labeled / 15 unlabeled"), "{}", stdout(&o));
}

#[test]
fn method_specific_flags_are_checked() {
    let dir = TempDir::new().unwrap();
    let (o, _) = fit_iris(&dir, "m.json", &["--method", "lfda", "--r", "2", "--beta", "0.3"]);
    fails_with(&o, 2, "--beta applies only to --method self");
    let (o, _) = fit_iris(&dir, "m.json", &["--method", "self", "--r", "2", "--beta", "1.5"]);
    fails_with(&o, 2, "beta must lie in [0, 1]");
    let (o, _) = fit_iris(&dir, "m.json", &["--method", "self", "--r", "2", "--discard-fraction", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let (o, _) = fit_iris(&dir, "m.json", &["--method", "klfda", "--r", "2", "--sigma=-1"]);
    fails_with(&o, 2, "bandwidth");
    let (o, _) = fit_iris(&dir, "m.json", &["--method", "pca", "--r", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_label_column_is_named() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m.json");
    let iris = iris_path();
    let o = lfda(&["fit", "--input", p(&iris), "--label-col", "kind", "--r", "2", "--output", p(&out)]);
    fails_with(&o, 2, "'kind'");
}

#[test]
fn non_finite_feature_names_row_and_column() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bad.csv");
    fs::write(&csv, "a,b,y\n1,2,u\n3,inf,v\n").unwrap();
    let out = dir.path().join("m.json");
    let o = lfda(&["fit", "--input", p(&csv), "--label-col", "y", "--r", "1", "--output", p(&out)]);
    fails_with(&o, 2, "row 2, column 'b'");
}

#[test]
fn lfda_with_missing_labels_fails() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("partial.csv");
    fs::write(&csv, "a,b,y\n1,2,u\n3,4,\n5,1,v\n2,2,u\n").unwrap();
    let out = dir.path().join("m.json");
    let o = lfda(&["fit", "--input", p(&csv), "--label-col", "y", "--r", "1", "--output", p(&out)]);
    fails_with(&o, 2, "missing label");
}

#[test]
fn transform_round_trip_and_label_pass_through() {
    let dir = TempDir::new().unwrap();
    let (o, model) = fit_iris(&dir, "m.json", &["--r", "3"]);
    ok(&o);
    let z = dir.path().join("z.csv");
    let iris = iris_path();
    let t = lfda(&["transform", "--model", p(&model), "--input", p(&iris), "--output", p(&z)]);
    ok(&t);
    assert!(t.stdout.is_empty());
    let text = fs::read_to_string(&z).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("Z1,Z2,Z3,species"));
    assert_eq!(lines.count(), 150);
}

#[test]
fn transform_without_label_column_omits_it() {
    let dir = TempDir::new().unwrap();
    let (o, model) = fit_iris(&dir, "m.json", &["--r", "2"]);
    ok(&o);
    let csv = dir.path().join("new.csv");
    fs::write(
        &csv,
        "petal_width,sepal_length,sepal_width,petal_length,id\n0.2,5.1,3.5,1.4,a\n",
    )
    .unwrap();
    let z = dir.path().join("z.csv");
    ok(&lfda(&["transform", "--model", p(&model), "--input", p(&csv), "--output", p(&z)]));
    let text = fs::read_to_string(&z).unwrap();
    assert_eq!(text.lines().next(), Some("Z1,Z2"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn transform_names_missing_feature() {
    let dir = TempDir::new().unwrap();
    let (o, model) = fit_iris(&dir, "m.json", &["--r", "2"]);
    ok(&o);
    let renamed = dir.path().join("renamed.csv");
    let text = fs::read_to_string(iris_path()).unwrap().replacen("sepal_width", "sepal_breadth", 1);
    fs::write(&renamed, text).unwrap();
    let z = dir.path().join("z.csv");
    let t = lfda(&["transform", "--model", p(&model), "--input", p(&renamed), "--output", p(&z)]);
    fails_with(&t, 2, "column 'sepal_width' not found");
}

#[test]
fn klfda_without_training_data() {
    let dir = TempDir::new().unwrap();
    let (o, model) = fit_iris(&dir, "k.json", &["--method", "klfda", "--r", "3", "--no-store-training"]);
    ok(&o);
    let i = lfda(&["inspect", "--model", p(&model)]);
    ok(&i);
    assert!(stdout(&i).contains("transformable: false"));
    let z = dir.path().join("z.csv");
    let iris = iris_path();
    let t = lfda(&["transform", "--model", p(&model), "--input", p(&iris), "--output", p(&z)]);
    fails_with(&t, 2, "model not transformable");
}

#[test]
fn klfda_with_auto_bandwidth_transforms() {
    let dir = TempDir::new().unwrap();
    let (o, model) = fit_iris(&dir, "k.json", &["--method", "klfda", "--r", "2", "--sigma", "auto"]);
    ok(&o);
    let i = stdout(&lfda(&["inspect", "--model", p(&model)]));
    assert!(i.contains("transformable: true") && i.contains("training: 150x4"), "{i}");
    assert!(!i.contains("sigma: 1.00000e0"));
    let z = dir.path().join("z.csv");
    let iris = iris_path();
    ok(&lfda(&["transform", "--model", p(&model), "--input", p(&iris), "--output", p(&z)]));
}

#[test]
fn inspect_rejects_corrupt_and_foreign_versions() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"format_version\": 1, \"kind\": ").unwrap();
    fails_with(&lfda(&["inspect", "--model", p(&bad)]), 2, "invalid model JSON");

    let (o, model) = fit_iris(&dir, "m.json", &["--r", "2"]);
    ok(&o);
    let text = fs::read_to_string(&model).unwrap().replace("\"format_version\": 1", "\"format_version\": 7");
    let v7 = dir.path().join("v7.json");
    fs::write(&v7, text).unwrap();
    fails_with(&lfda(&["inspect", "--model", p(&v7)]), 2, "unsupported format_version 7");

    let missing = dir.path().join("absent.json");
    fails_with(&lfda(&["inspect", "--model", p(&missing)]), 2, "absent.json");
}

#[test]
fn plot_counts_points_and_legend() {
    let dir = TempDir::new().unwrap();
    let (o, model) = fit_iris(&dir, "m.json", &["--r", "3"]);
    ok(&o);
    let z = dir.path().join("z.csv");
    let iris = iris_path();
    ok(&lfda(&["transform", "--model", p(&model), "--input", p(&iris), "--output", p(&z)]));
    let svg = dir.path().join("p.svg");
    ok(&lfda(&["plot", "--input", p(&z), "--output", p(&svg)]));
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<circle").count(), 150);
    let legend = text.split("class=\"legend\"").nth(1).unwrap();
    assert_eq!(legend.matches("<rect").count(), 3);
    for name in ["setosa", "versicolor", "virginica"] {
        assert!(legend.contains(&format!(">{name}</text>")));
    }
    assert!(text.contains(">Z1</text>") && text.contains(">Z2</text>"));

    let svg13 = dir.path().join("p13.svg");
    ok(&lfda(&["plot", "--input", p(&z), "--dims", "0,2", "--output", p(&svg13)]));
    assert!(fs::read_to_string(&svg13).unwrap().contains(">Z3</text>"));
    fails_with(
        &lfda(&["plot", "--input", p(&z), "--dims", "0,3", "--output", p(&svg13)]),
        2,
        "out of range",
    );
}

#[test]
fn plot_single_row() {
    let dir = TempDir::new().unwrap();
    let z = dir.path().join("z.csv");
    fs::write(&z, "Z1,Z2,label\n0.5,-1.25,only\n").unwrap();
    let svg = dir.path().join("p.svg");
    ok(&lfda(&["plot", "--input", p(&z), "--output", p(&svg)]));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches("<circle").count(), 1);
}

#[test]
fn plot_needs_two_columns() {
    let dir = TempDir::new().unwrap();
    let z = dir.path().join("z.csv");
    fs::write(&z, "Z1,label\n0.5,a\n").unwrap();
    let svg = dir.path().join("p.svg");
    fails_with(&lfda(&["plot", "--input", p(&z), "--output", p(&svg)]), 2, "two embedding columns");
}
