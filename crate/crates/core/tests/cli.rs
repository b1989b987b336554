use std::path::PathBuf;

use isomono::cli::{run, EXIT_INVALID, EXIT_NUMERIC, EXIT_OK};
use serde_json::Value;

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "instances", name].iter().collect();
    p.display().to_string()
}

fn call(args: &[&str]) -> (Value, i32, String) {
    let mut out = Vec::new();
    let mut full = vec!["isomono"];
    full.extend_from_slice(args);
    let code = run(full, &mut out);
    let text = String::from_utf8(out).unwrap();
    let json = serde_json::from_str(&text).unwrap_or(Value::Null);
    (json, code, text)
}

fn temp_file(name: &str, body: &str) -> String {
    let p = std::env::temp_dir().join(format!("isomono-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn build_round_trips_the_double_pole_file() {
    let (r, code, _) = call(&["build", &instance("double_poles.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(r["outputs"]["round_trip"]["ok"], true);
    assert_eq!(r["command"], "build");
    assert_eq!(r["instance_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn build_reports_the_quintic_constants() {
    let (r, code, _) = call(&["build", &instance("kimura.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(r["outputs"]["kimura"]["K1"].is_string());
    assert!(r["outputs"]["kimura"]["K2"].is_string());
}

#[test]
fn exact_reports_are_byte_identical() {
    for cmd in ["build", "hamiltonians", "certify"] {
        let (_, _, a) = call(&[cmd, &instance("double_poles.json")]);
        let (_, _, b) = call(&[cmd, &instance("double_poles.json")]);
        assert_eq!(a, b, "{cmd}");
    }
}

#[test]
fn malformed_rational_exits_with_a_parse_error() {
    let f = temp_file(
        "bad.json",
        r#"{"schema_version":1,"points":[{"pos":"1/x","order":1,"kind":"reg","theta":{"plus":["0"],"minus":["0"]}}]}"#,
    );
    let (r, code, _) = call(&["build", &f]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(r["error"]["kind"], "Parse");
    assert_eq!(r["exit_code"], EXIT_INVALID);
}

#[test]
fn invalid_instance_is_itemized() {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(instance("double_poles.json")).unwrap()).unwrap();
    // residue part of θ⁺ at the first point, which breaks the Fuchs relation
    v["points"][0]["theta"]["plus"][1] = Value::from("100");
    let text = v.to_string();
    let f = temp_file("fuchs.json", &text);
    let (r, code, _) = call(&["validate", &f]);
    assert_eq!(code, EXIT_INVALID);
    let failed: Vec<&Value> = r["diagnostics"].as_array().unwrap().iter().filter(|c| c["ok"] == false).collect();
    assert!(!failed.is_empty());
    let (_, code, _) = call(&["build", &f]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn usage_errors_are_json() {
    let (r, code, _) = call(&["frobnicate"]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(r["error"]["kind"], "Usage");
}

#[test]
fn hamiltonians_are_split_by_kind() {
    let (r, code, _) = call(&["hamiltonians", &instance("double_poles.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(r["outputs"]["H_theta"].as_object().unwrap().len(), 6);
    assert!(r["outputs"]["H_t"].as_object().unwrap().is_empty());
}

#[test]
fn canonical_omega_has_inverse_p_blocks() {
    let (r, code, _) = call(&["omega", &instance("double_poles.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(r["outputs"]["matches"], true);
    let m = r["outputs"]["omega"].as_array().unwrap();
    for (a, row) in m.iter().enumerate() {
        for (b, v) in row.as_array().unwrap().iter().enumerate() {
            let w = &m[b][a];
            if v == "0" {
                assert_eq!(w, "0");
            } else {
                assert_eq!(a / 2, b / 2);
                assert_eq!(format!("-{}", v.as_str().unwrap()).replace("--", ""), w.as_str().unwrap());
            }
        }
    }
}

#[test]
fn omega_all_pairs_on_the_quintic() {
    let (r, code, _) = call(&["omega", "--pairs", "all", &instance("kimura.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(r["outputs"]["fiber_pairs_agree"], true);
}

#[test]
fn certify_succeeds_on_both_files() {
    for f in ["double_poles.json", "kimura.json"] {
        let (r, code, _) = call(&["certify", &instance(f)]);
        assert_eq!(code, EXIT_OK, "{f}");
        assert_eq!(r["outputs"]["all_hold"], true);
    }
}

#[test]
fn flow_with_no_steps_echoes_the_initial_state() {
    let (r, code, _) = call(&["flow", &instance("double_poles.json"), "--dir", "theta_un:0:0:+", "--steps", "0"]);
    assert_eq!(code, EXIT_OK);
    let traj = r["outputs"]["trajectory"].as_array().unwrap();
    assert_eq!(traj.len(), 1);
    assert_eq!(r["outputs"]["initial"], r["outputs"]["final"]);
}

#[test]
fn flow_writes_the_trajectory_file() {
    let out = std::env::temp_dir().join(format!("isomono-{}-traj.json", std::process::id()));
    let (r, code, _) = call(&[
        "flow",
        &instance("kimura.json"),
        "--dir",
        "theta_ra:0:5",
        "--steps",
        "4",
        "--h",
        "0.01",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(r["outputs"].get("trajectory").is_none());
    let traj: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(traj.len(), 5);
    let s: Vec<f64> = traj.iter().map(|st| st["s"].as_f64().unwrap()).collect();
    assert!((s[4] - s[0] - 0.04).abs() < 1e-12);
}

#[test]
fn flow_rejects_fixed_positions() {
    let (r, code, _) = call(&["flow", &instance("double_poles.json"), "--dir", "t:1"]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(r["error"]["kind"], "NotADeformationDirection");
}

#[test]
fn flow_into_a_collision_is_a_numeric_failure() {
    let (r, code, _) = call(&["flow", &instance("double_poles.json"), "--dir", "theta_un:0:0:+", "--h", "1e3", "--steps", "50"]);
    assert_eq!(code, EXIT_NUMERIC, "{r}");
    assert_eq!(r["error"]["kind"], "FlowSingular");
}

#[test]
fn reproduce_accepts_names_and_aliases() {
    for which in ["double-poles", "5.1", "kimura", "5.2"] {
        let (r, code, _) = call(&["reproduce", which, "--samples", "3"]);
        assert_eq!(code, EXIT_OK, "{which}");
        assert_eq!(r["outputs"]["max_discrepancy"], "0");
        assert_eq!(r["outputs"]["samples"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn reduce_selects_a_point() {
    let (r, code, _) = call(&["reduce", &instance("double_poles.json"), "--point", "1"]);
    assert_eq!(code, EXIT_OK);
    let reps = r["outputs"].as_array().unwrap();
    assert_eq!(reps.len(), 1);
    assert_eq!(reps[0]["point"], 1);
    let (_, code, _) = call(&["reduce", &instance("double_poles.json"), "--point", "9"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn timing_is_opt_in() {
    let (r, _, _) = call(&["validate", &instance("kimura.json")]);
    assert!(r.get("timing_ms").is_none());
    let (r, _, _) = call(&["--timing", "validate", &instance("kimura.json")]);
    assert!(r["timing_ms"].is_number());
}
