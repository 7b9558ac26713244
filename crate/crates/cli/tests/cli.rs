use std::path::{Path, PathBuf};

use serde_json::Value;

use kissing_core::graph::platonic::tetrahedron;
use kissing_core::packing::{solve_packing, verify_contact};

fn data(name: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    p.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = kissing_cli::run(std::iter::once("kissing").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}\n{err}"));
    (code, v)
}

#[test]
fn missing_file_is_an_input_error() {
    let (code, _, err) = run(&["graph-info", "/nonexistent/graph.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("graph.json"));
    assert_eq!(run(&["graph-info"]).0, 2);
    assert_eq!(run(&["qmark", "--d", "1", "--theta", "1/3"]).0, 2);
}

#[test]
fn graph_info_of_k4() {
    let (code, v) = run_json(&["graph-info", &data("k4.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["simple"], true);
    assert_eq!(v["k_connectivity"], 3);
    assert_eq!(v["hamiltonian_count"], 3);
}

#[test]
fn parallel_chords_do_not_mate() {
    let (code, v) = run_json(&["mate", "--plus", &data("sq02.json"), "--minus", &data("sq13.json"), "--offset", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["mateable"], false);
    assert_eq!(v["witness"][0]["leaf"], serde_json::json!(["1/8", "5/8"]));
    // the same verdict is a PASS when it is the expected one
    let (code, _) = run_json(&[
        "mate", "--plus", &data("sq02.json"), "--minus", &data("sq13.json"), "--offset", "3", "--expect", "obstructed",
    ]);
    assert_eq!(code, 0);
    let (code, v) = run_json(&["mate", "--plus", &data("sq02.json"), "--minus", &data("sq02.json"), "--offset", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["glued"]["rotation"].as_array().unwrap().len(), 4);
}

#[test]
fn obstruct_reports_the_cycle() {
    let (code, v) = run_json(&["obstruct", "--lp", &data("lam_chord02.json"), "--lq", &data("lam_chord13.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["obstructed"], true);
    let (code, v) = run_json(&["obstruct", "--lp", &data("lam_chord02.json"), "--lq", &data("lam_basilica.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["obstructed"], false);
}

#[test]
fn pack_matches_the_library() {
    let (code, v) = run_json(&["pack", &data("k4.json"), "--tol", "1e-10"]);
    assert_eq!(code, 0);
    let k4 = kissing_cli::load_graph(Path::new(&data("k4.json"))).unwrap();
    assert!(kissing_core::graph::is_isomorphic(&k4, &tetrahedron()));
    let lib = solve_packing(&k4, 1e-10).unwrap();
    assert_eq!(v["packing"], kissing_cli::to_value(&lib.to_document()));
    assert_eq!(v["contact"], kissing_cli::to_value(&verify_contact(&lib)));
}

#[test]
fn fixed_seed_is_reproducible() {
    let args = ["verify-map", "--map", "octahedron", "--seed", "3"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn dictionary_examples() {
    let (code, v) = run_json(&["dictionary", &data("k4.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["predictions"]["gasket_limit_set"], true);
    assert_eq!(v["predictions"]["shared_matings"], 3);
    assert_eq!(v["map"]["pass"], true);
    assert_eq!(v["pass"], true);

    let (code, v) = run_json(&["dictionary", &data("sq02.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["predictions"]["anti_polynomial"], true);
    assert_eq!(v["classification"]["hamiltonian_count"], 1);

    let (code, v) = run_json(&["dictionary", &data("bowtie.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["predictions"]["connected_limit_set"], false);
    assert_eq!(v["levels"][1]["connected"], false);
}

#[test]
fn julia_writes_a_png() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("j.png");
    let (code, v) = run_json(&["julia", "--map", "tetrahedron", "--res", "48", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    let img = image::open(&out).unwrap();
    assert_eq!(img.width(), 48);
}
