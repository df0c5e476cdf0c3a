use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nosol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nosol"))
        .args(args)
        .env_remove("NOSOL_BUDGET")
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn verify_exit_codes() {
    let o = nosol(&["verify", "--sym", "1,2", "--set", "0,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"], "solution_free");

    let o = nosol(&["verify", "--sym", "1,1", "--set", "1,2,3,4"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["witness"], serde_json::json!([1, 3, 2, 2]));

    let o = nosol(&["verify", "--sym", "1,1", "--set", "1,2,3,4", "--distinct"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["witness"], serde_json::json!([1, 4, 2, 3]));

    let o = nosol(&["verify", "--sym", "1,1", "--set", "1,2,4,8,16,32,64,128", "--budget", "3"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["result"], "budget_exhausted");
}

#[test]
fn malformed_input_is_64() {
    for args in [
        &["verify", "--sym", "1,x", "--set", "1"][..],
        &["verify", "--sym", "1,2", "--set", "1,1"],
        &["verify", "--eq", "1,2", "--set", "1"],
        &["verify", "--sym", "1,2"],
        &["frobnicate"],
        &["search", "--sym", "1,2", "--L", "4", "--exact", "--greedy"],
    ] {
        assert_eq!(code(&nosol(args)), 64, "{args:?}");
    }
}

#[test]
fn construct_preconditions_are_65() {
    assert_eq!(code(&nosol(&["construct", "two-var", "--a", "3", "--b", "3"])), 65);
    assert_eq!(code(&nosol(&["construct", "distinct-var", "--m", "2"])), 65);
}

#[test]
fn set_file_with_comments() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s.txt");
    std::fs::write(&f, "# Sidon\n1\n2\n\n5\n11\n").unwrap();
    let o = nosol(&["verify", "--sym", "1,1", "--set-file", p(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["set"], serde_json::json!([1, 2, 5, 11]));
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let recipes: [&[&str]; 6] = [
        &["geometric", "--m", "2", "--k", "3"],
        &["two-var", "--a", "2", "--b", "5"],
        &["coprime-power", "--a", "2", "--b", "3", "--k", "3"],
        &["spaced", "--a", "1,9", "--s", "4"],
        &["thm3", "--a", "10", "--b", "11", "--c", "31"],
        &["distinct-var", "--m", "5"],
    ];
    for (n, r) in recipes.iter().enumerate() {
        let cert = dir.path().join(format!("c{n}.json"));
        let mut args = vec!["construct"];
        args.extend_from_slice(r);
        args.extend(["--out", p(&cert)]);
        let o = nosol(&args);
        assert_eq!(code(&o), 0, "{r:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(json(&o)["rate"].as_f64().unwrap() > 0.0);
        let manifest: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("c{n}.json.manifest.json"))).unwrap())
                .unwrap();
        assert_eq!(manifest["certificates"], serde_json::json!([p(&cert)]));
        assert_eq!(manifest["exit_code"], 0);
        let v = nosol(&["verify", "--cert", p(&cert)]);
        assert_eq!(code(&v), 0, "{r:?}");
        let rate = nosol(&["rate", "--cert", p(&cert)]);
        assert_eq!(code(&rate), 0);
    }
}

#[test]
fn geometric_lift_size() {
    let dir = tempfile::tempdir().unwrap();
    let lifted = dir.path().join("a.txt");
    let o = nosol(&["construct", "geometric", "--m", "2", "--k", "3", "--N", "4096", "--lifted-out", p(&lifted)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["lifted"]["size"], 16);
    let lines = std::fs::read_to_string(&lifted).unwrap();
    assert_eq!(lines.lines().count(), 16);
}

#[test]
fn section5_small() {
    let o = nosol(&["construct", "section5", "--d", "5"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["base"], 23);
    assert_eq!(v["digits"], serde_json::json!([0, 1]));
}

#[test]
fn shift_from_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.json");
    assert_eq!(code(&nosol(&["construct", "two-var", "--a", "1", "--b", "2", "--out", p(&src)])), 0);
    let o = nosol(&["construct", "shift", "--cert", p(&src), "--i", "1,0", "--j", "0,1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["equation"], serde_json::json!([-6, 5, 2, -1]));
    assert_eq!(v["base"], 8);
}

#[test]
fn search_small_cases() {
    let o = nosol(&["search", "--sym", "1,2", "--L", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["best"]["digits"], serde_json::json!([0, 1]));

    let o = nosol(&["search", "--eq", "2,2,-3,-1", "--L", "40", "--exact"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["rows"][0]["size"], 4);
    assert_eq!(v["all_exhausted"], true);
}

#[test]
fn search_best_effort_is_3() {
    let o = nosol(&["search", "--sym", "43,69,70", "--L", "11649", "--anytime", "--budget", "50"]);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    assert_eq!(v["all_exhausted"], false);
    assert!(v["best"]["size"].as_u64().unwrap() >= 1);
}

#[test]
fn search_progress_is_ndjson() {
    let o = nosol(&["search", "--sym", "43,69,70", "--L", "5825", "--progress"]);
    assert_eq!(code(&o), 0);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.lines().count() > 0);
    for line in err.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["l"], 5825);
    }
}

#[test]
fn alpha_and_sweep() {
    let o = nosol(&["alpha", "--beta", "1.01"]);
    assert_eq!(code(&o), 0);
    let inv = json(&o)["inverse_rate"].as_f64().unwrap();
    assert!((inv - 4.77).abs() < 0.005);

    let o = nosol(&["sweep", "--k", "2", "--C", "100", "--eps", "0.3", "--exhaustive"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["bound_ok"], true);

    let o = nosol(&["sweep", "--k", "2", "--C", "100", "--eps", "0.3", "--samples", "500", "--seed", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["sampling"]["kind"], "monte_carlo");
}

#[test]
fn explicit_manifest_lists_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("run.json");
    let out = dir.path().join("alpha.json");
    let o = nosol(&["alpha", "--beta", "1", "--out", p(&out), "--manifest", p(&m)]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(v["outputs"], serde_json::json!([p(&out)]));
    assert_eq!(v["config"]["alpha"]["beta"], 1.0);
}
