use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jkssi_cli::spec::{game_to_spec, interval_to_spec, GameSpec};
use jkssi_core::builtin::{golden_games, interval_suite, random_suite};
use jkssi_core::indices::phi;
use jkssi_core::rational::format_rational;
use serde_json::Value;
use tempfile::TempDir;

fn jkssi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jkssi")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = jkssi(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn write_spec(dir: &TempDir, name: &str, spec: &GameSpec) -> PathBuf {
    write(dir, name, &serde_json::to_string(spec).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn schema() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/game-spec.v1.schema.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&doc).expect("schema compiles")
}

const EXAMPLE1: &str = r#"{"schema":"v1","n":2,"j":3,"k":3,"type":"table","values":[0,1,2,0,1,2,2,2,2]}"#;

#[test]
fn phi_of_example1() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "ex1.json", EXAMPLE1);
    let v = ok_json(&["phi", s(&p)]);
    assert_eq!(v["phi"], serde_json::json!(["5/12", "7/12"]));
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["command"], "phi");
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("timing").is_none());
}

#[test]
fn reports_are_reproducible_without_timing() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "ex1.json", EXAMPLE1);
    assert_eq!(jkssi(&["average", s(&p)]).stdout, jkssi(&["average", s(&p)]).stdout);
    let timed = ok_json(&["average", s(&p), "--timing"]);
    assert!(timed["timing"]["elapsed_ms"].is_number());
}

#[test]
fn boundary_violation_exits_3() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", r#"{"n":2,"j":2,"k":2,"type":"table","values":[1,1,1,1]}"#);
    let out = jkssi(&["validate", s(&p)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("BoundaryViolation"), "{err}");
    assert!(err.contains("[0, 0]"), "witness missing: {err}");
}

#[test]
fn monotonicity_violation_exits_3_with_witness() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", r#"{"n":2,"j":3,"k":2,"type":"table","values":[0,1,0,0,1,1,1,1,1]}"#);
    let out = jkssi(&["phi", s(&p)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("MonotonicityViolation"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [
        ("garbage.json", "{not json"),
        ("unknown-type.json", r#"{"n":2,"j":2,"k":2,"type":"spline"}"#),
        ("decimal.json", r#"{"n":2,"j":2,"k":2,"type":"weighted","quota":"0.5","weights":["1","1"]}"#),
        ("no-shape.json", r#"{"n":2,"type":"point-veto","a":[1,1]}"#),
    ] {
        let p = write(&dir, name, text);
        assert_eq!(jkssi(&["phi", s(&p)]).status.code(), Some(2), "{name}");
    }
    assert_eq!(jkssi(&["phi", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(jkssi(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_4() {
    let dir = TempDir::new().unwrap();
    let a = vec!["1"; 25].join(",");
    let p = write(&dir, "big.json", &format!(r#"{{"n":25,"j":3,"k":2,"type":"point-veto","a":[{a}]}}"#));
    let out = jkssi(&["phi", s(&p)]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn rollcall_and_phi_agree_byte_for_byte_on_random_specs() {
    let dir = TempDir::new().unwrap();
    for (i, g) in random_suite(20, 3, 3, 77).iter().enumerate() {
        let p = write_spec(&dir, &format!("g{i}.json"), &game_to_spec(g));
        let a = ok_json(&["phi", s(&p)]);
        let b = ok_json(&["phi-rollcall", s(&p)]);
        assert_eq!(serde_json::to_string(&a["phi"]).unwrap(), serde_json::to_string(&b["phi"]).unwrap(), "game {i}");
        let direct: Vec<String> = phi(g).unwrap().entries().iter().map(format_rational).collect();
        assert_eq!(a["phi"], serde_json::json!(direct));
    }
}

#[test]
fn emitted_veto_specs_round_trip_and_validate() {
    let dir = TempDir::new().unwrap();
    let validator = schema();
    let mut games: Vec<_> = golden_games().into_iter().map(|(_, g)| g).collect();
    games.extend(random_suite(10, 3, 4, 5));
    for (i, g) in games.iter().enumerate() {
        let p = write_spec(&dir, &format!("g{i}.json"), &game_to_spec(g));
        let out = jkssi(&["decompose-veto", "--emit-specs", s(&p)]);
        assert!(out.status.success());
        let emitted: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(validator.is_valid(&emitted), "game {i}: emitted spec fails the schema");
        let q = dir.path().join(format!("combo{i}.json"));
        std::fs::write(&q, &out.stdout).unwrap();
        assert_eq!(ok_json(&["phi", s(&q)])["phi"], ok_json(&["phi", s(&p)])["phi"], "game {i}");
    }
}

#[test]
fn schema_accepts_writer_output_and_rejects_malformed_specs() {
    let validator = schema();
    for (_, g) in golden_games() {
        assert!(validator.is_valid(&serde_json::to_value(game_to_spec(&g)).unwrap()));
    }
    for v in interval_suite() {
        assert!(validator.is_valid(&serde_json::to_value(interval_to_spec(&v)).unwrap()));
    }
    for bad in [
        r#"{"n":2,"j":2,"k":2,"type":"table"}"#,
        r#"{"n":2,"j":3,"k":3,"type":"weighted","quota":"1","weights":["1","1"]}"#,
        r#"{"n":2,"j":2,"k":2,"type":"weighted","quota":"1/0","weights":["1","1"]}"#,
        r#"{"n":0,"j":2,"k":2,"type":"point-veto","a":[1]}"#,
        r#"{"n":1,"type":"interval-step","steps":[{"threshold":[1.5],"level":"1"}]}"#,
    ] {
        assert!(!validator.is_valid(&serde_json::from_str::<Value>(bad).unwrap()), "{bad}");
    }
    assert!(validator.is_valid(&serde_json::from_str::<Value>(EXAMPLE1).unwrap()));
}

#[test]
fn ssi_of_weighted_game() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "w.json", r#"{"n":4,"j":2,"k":2,"type":"weighted","quota":"4","weights":["3","2","1","1"]}"#);
    assert_eq!(ok_json(&["ssi", s(&p)])["ssi"], serde_json::json!(["1/2", "1/6", "1/6", "1/6"]));
}

#[test]
fn phi_param_on_ub() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "ub.json", r#"{"n":3,"j":3,"k":2,"type":"point-veto","a":[1,2,0]}"#);
    assert_eq!(ok_json(&["phi", s(&p)])["phi"], serde_json::json!(["1/3", "2/3", "0/1"]));
    assert_eq!(ok_json(&["phi-param", s(&p), "--a", "1,1,1"])["phi_a"], serde_json::json!(["0/1", "1/1", "0/1"]));
}

#[test]
fn interval_commands() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "iv.json", r#"{"n":2,"type":"interval-step","steps":[{"threshold":["1/4","3/4"],"level":"1/1"}]}"#);
    let closed = ok_json(&["psi", s(&p)]);
    let exact: Vec<f64> = closed["psi"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| jkssi_core::rational::to_f64(&jkssi_cli::spec::parse_exact(r.as_str().unwrap()).unwrap()))
        .collect();
    let args = ["psi", s(&p), "--method", "mc", "--samples", "20000", "--seed", "3"];
    let mc = ok_json(&args);
    assert_eq!(jkssi(&args).stdout, jkssi(&args).stdout);
    for (i, e) in exact.iter().enumerate() {
        let value = mc["psi_mc"]["value"][i].as_f64().unwrap();
        let se = mc["psi_mc"]["std_error"][i].as_f64().unwrap();
        assert!((value - e).abs() <= 4.0 * se + 1e-9);
    }
    let half = ok_json(&["psi-param", s(&p), "--alpha", "1/2"]);
    assert_eq!(half["alpha"], "1/2");
    assert_eq!(half["psi_alpha"].as_array().unwrap().len(), 2);
    assert_eq!(jkssi(&["phi", s(&p)]).status.code(), Some(2));
}

#[test]
fn axioms_on_builtin_suites() {
    let v = ok_json(&["axioms", "--suite", "golden", "--index", "phi"]);
    for r in v["reports"].as_array().unwrap() {
        assert_eq!(r["verdict"], "holds-on-suite", "{r}");
    }
    let v = ok_json(&["axioms", "--suite", "interval", "--index", "blend:1/2", "--axiom", "NP,E"]);
    let verdicts: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["violated", "holds-on-suite"]);
    assert_eq!(jkssi(&["axioms", "--suite", "golden", "--index", "nonsense"]).status.code(), Some(2));
}

#[test]
fn axioms_on_a_suite_file() {
    let dir = TempDir::new().unwrap();
    let specs: Vec<GameSpec> = random_suite(5, 2, 3, 9).iter().map(game_to_spec).collect();
    let p = write(&dir, "suite.json", &serde_json::to_string(&specs).unwrap());
    let v = ok_json(&["axioms", "--suite", s(&p), "--index", "scaled:2", "--axiom", "E"]);
    assert_eq!(v["games"], 5);
    assert_eq!(v["reports"][0]["verdict"], "violated");
    assert_eq!(v["reports"][0]["witness"]["kind"], "single");
}
