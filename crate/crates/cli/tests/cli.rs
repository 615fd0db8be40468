use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamevalues"))
        .args(args)
        .env_remove("GAMEVALUES_THREADS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn value_f64(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::Object(m) => m["num"].as_f64().unwrap() / m["den"].as_f64().unwrap(),
        other => panic!("not a value: {other}"),
    }
}

#[test]
fn cycle4_value_chain() {
    let out = run(&["value", "--game", "cycle:4", "--kind", "det-sync,vect-sync,qc-upper"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json_of(&out);
    let reports = j["reports"].as_array().unwrap();
    assert_eq!(reports[0]["bound"], "exact");
    assert_eq!(reports[0]["value"], serde_json::json!({"num": 3, "den": 4}));
    assert_eq!(reports[1]["bound"], "estimate");
    let vect = value_f64(&reports[1]["value"]);
    assert!((vect - 2.0 * (1.0 - 1.0 / 3f64.sqrt())).abs() < 2e-3, "{vect}");
    assert_eq!(reports[2]["bound"], "upper");
    let qc = value_f64(&reports[2]["value"]);
    assert!(qc <= (1.0 + 3f64.sqrt()) / 3.0 + 1e-6 && qc >= 0.75, "{qc}");
}

#[test]
fn chsh3_classical_values() {
    let out = run(&["value", "--game", "chsh:3", "--kind", "det,det-sync", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "bound,converged,explored,kind,tol,value");
    assert!(lines[1].starts_with("exact,") && lines[1].ends_with(",det,,2/3"), "{}", lines[1]);
    assert!(lines[2].ends_with(",det-sync,,5/9"), "{}", lines[2]);
}

#[test]
fn perfect_check_on_cycles() {
    let j = json_of(&run(&["perfect-check", "--game", "cycle:7"]));
    assert_eq!(j["perfect"], false);
    assert!(j["labelling"].is_null());
    let j = json_of(&run(&["perfect-check", "--game", "cycle:6"]));
    assert_eq!(j["perfect"], true);
    assert_eq!(j["labelling"], serde_json::json!([0, 1, 2, 0, 1, 2]));
    // non-digraph synchronous group game goes through propagation
    let j = json_of(&run(&["perfect-check", "--game", "commutator:S3"]));
    assert_eq!((j["perfect"].as_bool(), j["method"].as_str()), (Some(false), Some("propagation")));
}

#[test]
fn dcut_of_a_file_digraph() {
    let path = scratch("triangle_plus.txt");
    std::fs::write(&path, "# directed triangle and a chord\n0 1\n1 2\n2 0\n0 3\n3 1\n").unwrap();
    let j = json_of(&run(&["dcut", "--game", path.to_str().unwrap()]));
    // the chord path 0→3→1 has net length 2, so one arc is lost
    assert_eq!(j["arcs"], 5);
    assert_eq!(j["dcut"], 4);
    let err = run(&["dcut", "--game", "chsh:3"]);
    assert_eq!(err.status.code(), Some(2));
}

#[test]
fn certificates_verify_and_tampering_fails() {
    let out = run(&["value", "--game", "chsh:3", "--kind", "det-sync,q1,qc-upper,vect-sync", "--emit-gram"]);
    assert_eq!(out.status.code(), Some(0));
    let path = scratch("chsh3_reports.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let ok = run(&["verify-certificate", path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let j = json_of(&ok);
    assert_eq!(j["pass"], true);
    assert_eq!(j["results"].as_array().unwrap().len(), 4);

    let mut all = json_of(&out);
    let qc = &mut all["reports"][2];
    let z = qc["certificate"]["Z"].as_array_mut().unwrap();
    let bumped = z[0][4].as_f64().unwrap() + 0.1;
    z[0][4] = bumped.into();
    z[4][0] = bumped.into();
    let bad = scratch("chsh3_tampered.json");
    std::fs::write(&bad, serde_json::to_vec(&all["reports"][2]).unwrap()).unwrap();
    let fail = run(&["verify-certificate", bad.to_str().unwrap()]);
    assert_eq!(fail.status.code(), Some(2));
    let j = json_of(&fail);
    assert_eq!(j["pass"], false);
    assert!(j["results"][0]["residuals"]["cost_free"].as_f64().unwrap() > 0.05);
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let args = ["value", "--game", "chsh:3", "--kind", "det,q1,q1-bipartite,qc-upper", "--restarts", "4", "--seed", "3"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    let again = run(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
}

#[test]
fn lower_bounds_stay_below_upper_bounds() {
    let out = run(&["value", "--game", "cycle:5", "--kind", "det-sync,q1,vect-sync,qc-upper", "--restarts", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    let v: Vec<f64> = j["reports"].as_array().unwrap().iter().map(|r| value_f64(&r["value"])).collect();
    let (det, q1, vect, qc) = (v[0], v[1], v[2], v[3]);
    assert!(det <= q1 + 1e-9, "{det} {q1}");
    assert!(q1 <= qc + 1e-6, "{q1} {qc}");
    assert!(q1 <= vect + 1e-4, "{q1} {vect}");
}

#[test]
fn exit_codes() {
    let bad_game = run(&["value", "--game", "torus:3", "--kind", "det"]);
    assert_eq!(bad_game.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_game.stderr).contains("torus"));

    let missing_field = scratch("missing_perm.json");
    std::fs::write(&missing_field, r#"{"kind":"unique","nx":2,"ny":2,"k":2}"#).unwrap();
    let out = run(&["value", "--game", missing_field.to_str().unwrap(), "--kind", "det"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("perm"));

    let rect = scratch("rect.json");
    std::fs::write(&rect, r#"{"kind":"unique","nx":1,"ny":2,"k":2,"perm":[[[0,1],[1,0]]]}"#).unwrap();
    let sync = run(&["value", "--game", rect.to_str().unwrap(), "--kind", "det-sync"]);
    assert_eq!(sync.status.code(), Some(2));
    let det = run(&["value", "--game", rect.to_str().unwrap(), "--kind", "det"]);
    assert_eq!(det.status.code(), Some(0));

    let starved = run(&["value", "--game", "cycle:4", "--kind", "vect", "--max-iters", "5"]);
    assert_eq!(starved.status.code(), Some(3));
    let j = json_of(&starved);
    assert_eq!(j["reports"][0]["converged"], false);
}

#[test]
fn density_override() {
    let path = scratch("skewed.json");
    std::fs::write(&path, r#"{"pi": [["1/2", 0], [0, "1/2"]]}"#).unwrap();
    let out = run(&["value", "--game", "chsh:2", "--density", path.to_str().unwrap(), "--kind", "det"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out)["reports"][0]["value"], serde_json::json!({"num": 1, "den": 1}));
}

#[test]
fn round_on_a_perfect_game() {
    let out = run(&["round", "--game", "cycle:6", "--sync"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json_of(&out);
    assert_eq!(j["perfect"], true);
    assert_eq!(j["strategy_value"], serde_json::json!({"num": 1, "den": 1}));
}

#[test]
fn reproduce_selected_rows() {
    let out = run(&["reproduce", "--only", "1,2,5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")), "{text}");
    assert_eq!(run(&["reproduce", "--only", "10"]).status.code(), Some(2));
}
