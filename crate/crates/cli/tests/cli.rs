use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qharm::corpus::corpus;
use qharm::schema::{HopfTensors, MeasureSpec, QuantumGroupSpec, ScenarioFile};
use qharm_core::{FiniteGroup, HopfData};
use serde_json::{json, Value};

fn qharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qharm"))
        .args(args)
        .env_remove("QHARM_TOLERANCE")
        .output()
        .expect("spawn qharm")
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn z2_walk() -> Value {
    json!({
        "schema": 1,
        "name": "z2_walk",
        "quantum_group": {"construct": "function_algebra", "group": "Z2"},
        "action": {"construct": "comultiplication"},
        "measure": {"construct": "point_mass", "index": 1},
        "expect": {"ergodic": true, "nondegenerate": true, "dim_harmonic": 1}
    })
}

fn json_report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

fn load_error(report: &Value) -> (String, String) {
    let e = &report["entries"][0]["load_error"];
    (
        e["kind"].as_str().unwrap().to_string(),
        e["message"].as_str().unwrap().to_string(),
    )
}

#[test]
fn passing_scenario_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ok.json", &z2_walk());
    for verb in ["verify", "harmonic", "suite", "battery"] {
        let o = qharm(&[verb, p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{verb}: {}", stdout(&o));
    }
}

#[test]
fn expectation_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = z2_walk();
    v["expect"]["dim_harmonic"] = json!(2);
    let p = write(dir.path(), "wrong.json", &v);
    let o = qharm(&["--report", "json", "suite", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = json_report(&o);
    let f = r["first_failure"].as_str().unwrap();
    assert!(f.contains("dim_harmonic"), "{f}");
}

#[test]
fn weights_off_simplex_are_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = z2_walk();
    v["measure"] = json!({"construct": "weights", "weights": [0.5, 0.6]});
    let p = write(dir.path(), "w.json", &v);
    let o = qharm(&["--report", "json", "verify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let r = json_report(&o);
    let (kind, msg) = load_error(&r);
    assert_eq!(kind, "schema");
    assert!(msg.contains("measure.weights"), "{msg}");
}

#[test]
fn unknown_field_is_reported_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = z2_walk();
    v["action"]["bogus"] = json!(1);
    let p = write(dir.path(), "u.json", &v);
    let o = qharm(&["--report", "json", "verify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let r = json_report(&o);
    let (kind, msg) = load_error(&r);
    assert_eq!(kind, "schema");
    assert!(msg.contains("bogus") && msg.contains("action"), "{msg}");
}

#[test]
fn non_group_table_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = z2_walk();
    v["quantum_group"] = json!({"construct": "function_algebra", "table": [[0, 1], [1, 1]]});
    let p = write(dir.path(), "t.json", &v);
    let o = qharm(&["--report", "json", "verify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let (kind, msg) = load_error(&json_report(&o));
    assert_eq!(kind, "schema");
    assert!(msg.contains("quantum_group.table"), "{msg}");
}

#[test]
fn unsupported_schema_version_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = z2_walk();
    v["schema"] = json!(2);
    let p = write(dir.path(), "v.json", &v);
    assert_eq!(
        qharm(&["verify", p.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn missing_file_exits_two() {
    let o = qharm(&["--report", "json", "verify", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(load_error(&json_report(&o)).0, "io");
}

#[test]
fn dimension_guard_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ok.json", &z2_walk());
    let o = qharm(&[
        "--max-dim",
        "1",
        "--report",
        "json",
        "verify",
        p.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(load_error(&json_report(&o)).0, "too_large");
}

#[test]
fn corrupted_antipode_names_the_axiom() {
    let h = HopfData::function_algebra(&FiniteGroup::dihedral(3)).unwrap();
    let bad = h.with_corrupted_antipode(1, 2, qharm_core::C64::new(1e-3, 0.0));
    let mut tensors = HopfTensors::from_hopf(&bad);
    tensors.haar = None;
    let file = ScenarioFile {
        schema: 1,
        name: "bad_antipode".into(),
        description: None,
        quantum_group: QuantumGroupSpec::Load {
            path: None,
            data: Some(Box::new(tensors)),
        },
        action: qharm::schema::ActionSpec::Comultiplication {},
        measure: MeasureSpec::Haar {},
        expect: Default::default(),
    };
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, file.to_json()).unwrap();
    let o = qharm(&["--report", "json", "verify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let (kind, msg) = load_error(&json_report(&o));
    assert_eq!(kind, "verification");
    assert!(msg.contains("antipode"), "{msg}");
}

#[test]
fn hopf_tensors_load_from_a_relative_path() {
    let dir = tempfile::tempdir().unwrap();
    let h = HopfData::function_algebra(&FiniteGroup::cyclic(3)).unwrap();
    std::fs::write(
        dir.path().join("z3.json"),
        serde_json::to_string(&HopfTensors::from_hopf(&h)).unwrap(),
    )
    .unwrap();
    let mut v = z2_walk();
    v["quantum_group"] = json!({"construct": "load", "path": "z3.json"});
    v["expect"] = json!({"dim_harmonic": 1});
    let p = write(dir.path(), "s.json", &v);
    let o = qharm(&["suite", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_report_is_stable_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ok.json", &z2_walk());
    let strip = |mut v: Value| {
        v["wall_time_ms"] = Value::Null;
        for e in v["entries"].as_array_mut().unwrap() {
            e["report"]["wall_time_ms"] = Value::Null;
        }
        v
    };
    let a = strip(json_report(&qharm(&[
        "--report",
        "json",
        "suite",
        p.to_str().unwrap(),
    ])));
    let b = strip(json_report(&qharm(&[
        "--report",
        "json",
        "suite",
        p.to_str().unwrap(),
    ])));
    assert_eq!(a, b);
    assert_eq!(a["report_version"], 1);
    assert_eq!(a["stage"], "suite");
    assert_eq!(a["exit_code"], 0);
    let r = &a["entries"][0]["report"];
    assert_eq!(r["dim_harmonic"], 1);
    assert_eq!(r["ergodic"], true);
    assert!(r["checks"].as_array().unwrap().len() >= 19);
    assert!(r["oracle"]["matches"].as_bool().unwrap());
    assert!(r["cesaro"]["deviation"].is_number());
}

#[test]
fn tolerance_flag_overrides_environment() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ok.json", &z2_walk());
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qharm"));
        cmd.env_remove("QHARM_TOLERANCE");
        if let Some(e) = env {
            cmd.env("QHARM_TOLERANCE", e);
        }
        if let Some(f) = flag {
            cmd.args(["--tolerance", f]);
        }
        cmd.args(["--report", "json", "verify", p.to_str().unwrap()]);
        let o = cmd.output().unwrap();
        json_report(&o)["tolerance"]["eps_compare"]
            .as_f64()
            .unwrap()
    };
    assert_eq!(run(None, None), 1e-8);
    assert_eq!(run(Some("1e-6"), None), 1e-6);
    assert_eq!(run(Some("1e-6"), Some("1e-7")), 1e-7);
}

#[test]
fn invalid_tolerance_is_a_usage_error() {
    let o = qharm(&["--tolerance", "-1", "battery"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn directory_arguments_expand_in_order() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "b.json", &z2_walk());
    write(dir.path(), "a.json", &z2_walk());
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let r = json_report(&qharm(&[
        "--report",
        "json",
        "verify",
        dir.path().to_str().unwrap(),
    ]));
    let sources: Vec<&str> = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["source"].as_str().unwrap())
        .collect();
    assert_eq!(sources.len(), 2);
    assert!(sources[0].ends_with("a.json") && sources[1].ends_with("b.json"));
}

#[test]
fn export_corpus_writes_every_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let o = qharm(&["export-corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let n = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(n, corpus().len());
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ok.json", &z2_walk());
    let out = dir.path().join("report.txt");
    let o = qharm(&[
        "--out",
        out.to_str().unwrap(),
        "verify",
        p.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("1 passed"), "{text}");
}
