use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn corpus(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chamberhom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn cohomology_three_lines() {
    let out = run(&["cohomology", &corpus("three_central.arr"), "--char", "-++", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(
        v["H"],
        json!([{"free":0,"torsion":[]},{"free":0,"torsion":[2]},{"free":0,"torsion":[2,2]}])
    );
    assert!(v["convention"].as_str().unwrap().starts_with("H^k"));
}

#[test]
fn table_output_has_convention_header() {
    let out = run(&["homology", &corpus("three_central.arr"), "--char", "--+"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# H_k(M; L)"));
    assert!(text.contains("H_1 = Z + Z/2"));
}

#[test]
fn predict_matches() {
    let out = run(&["predict", &corpus("three_central.arr"), "--char", "-++"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("H^2 = (Z/2)^2"));
    assert!(text.contains("match: true"));
    let v = stdout_json(&run(&[
        "predict",
        &corpus("three_central.arr"),
        "--char",
        "-++",
        "--json",
    ]));
    assert_eq!(v["match"], json!(true));
    assert_eq!(v["degrees"][1]["computed"], json!({"free":0,"torsion":[2]}));
}

#[test]
fn predict_refuses_without_cdo() {
    let out = run(&["predict", &corpus("three_central.arr"), "--char", "--+"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("H_infinity"));
}

#[test]
fn cdo_witness() {
    let out = run(&["cdo", &corpus("three_central.arr"), "--char", "--+", "--json"]);
    assert_eq!(stdout_json(&out), json!({"holds": false, "witnesses": ["H_infinity"]}));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(
        run(&["cohomology", &corpus("three_central.arr"), "--char", "-+"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["cohomology", "/nonexistent.arr"]).status.code(), Some(2));
    assert_eq!(
        run(&["cohomology", &corpus("icosidodecahedral.central3")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["search-torsion", &corpus("three_central.arr"), "--sample", "9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn oracle_agrees() {
    let out = run(&[
        "oracle",
        &corpus("three_lines_presentation.pres"),
        "--arrangement",
        &corpus("three_central.arr"),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["agree"], json!(true));
    assert_eq!(v["results"].as_array().unwrap().len(), 8);
}

#[test]
fn double_star_search() {
    let out = run(&["search-torsion", &corpus("double_star.arr"), "--all-omegas", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["omega"], json!("1111111111"));
    assert_eq!(lines[0]["cover_h1"], json!({"free":10,"torsion":[2]}));
    assert_eq!(lines[0]["local_h1"], json!({"free":0,"torsion":[2,2,2,2,2,2,2,2,4]}));
    assert_eq!(lines[0]["uct"], json!(true));
}

#[test]
fn three_lines_search_is_empty() {
    let out = run(&["search-torsion", &corpus("three_central.arr"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn double_cover_groups() {
    let v = stdout_json(&run(&[
        "double-cover",
        &corpus("double_star.arr"),
        "--omega",
        "1111111111",
        "--json",
    ]));
    assert_eq!(v["homology"][1], json!({"free":10,"torsion":[2]}));
    assert_eq!(v["cohomology"][2]["torsion"], json!([2]));
}

#[test]
fn gen_random_is_deterministic() {
    let args = ["gen-random", "--lines", "5", "--seed", "1"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("field Q\n"));
    assert_eq!(text.lines().count(), 6);
    let planted = run(&["gen-random", "--lines", "6", "--seed", "3", "--parallel", "2", "--json"]);
    assert_eq!(planted.status.code(), Some(0));
    assert_eq!(
        run(&["gen-random", "--lines", "40", "--bound", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn decone_reproduces_bundled_file() {
    let out = run(&["decone", &corpus("icosidodecahedral.central3"), "--infinity", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let bundled = std::fs::read_to_string(corpus("icosidodeca_decone.arr")).unwrap();
    let stripped: String = bundled
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), stripped);
}

#[test]
fn poset_and_chambers() {
    let v = stdout_json(&run(&["poset", &corpus("fig2_four_lines.arr"), "--json"]));
    assert_eq!(v["invariants"]["betti"], json!([1, 4, 5]));
    assert_eq!(v["classes"], json!([["H1"], ["H2", "H3"], ["H4"]]));
    let v = stdout_json(&run(&["chambers", &corpus("three_central.arr"), "--json"]));
    assert_eq!(v["ch"], json!([1, 3, 2]));
    assert_eq!(v["bch"], json!([1, 2, 0]));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "search-torsion",
        &corpus("double_star.arr"),
        "--sample",
        "200",
        "--seed",
        "4",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
