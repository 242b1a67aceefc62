use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn kzh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kzh")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn verify_cocycle_passes() {
    let cfg = data("two_t.json");
    let out = kzh(&["verify", "cocycle", "--config", cfg.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema"], "kzh-report/1");
    assert_eq!(v["passed"], true);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 4);
    assert!(v.get("timingMs").is_none());
}

#[test]
fn output_is_deterministic() {
    let cfg = data("two_t.json");
    for cmd in [["verify", "eta"], ["report", "aomoto"], ["report", "e1"]] {
        let a = kzh(&[cmd[0], cmd[1], "--config", cfg.to_str().unwrap()]);
        let b = kzh(&[cmd[0], cmd[1], "--config", cfg.to_str().unwrap()]);
        assert_eq!(a.status.code(), Some(0), "{cmd:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{cmd:?}");
    }
}

#[test]
fn dual_kz_echoes_the_matrix() {
    let out = kzh(&["verify", "dual-kz", "--kappa", "formal"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tables"]["omega"], serde_json::json!([["-1/2", "1"], ["1", "-1/2"]]));
    assert_eq!(v["tables"]["literalDtResidualZero"], false);
    assert_eq!(v["tables"]["printedCoordinateResidualZero"], false);
}

#[test]
fn malformed_color_map_is_a_config_error() {
    let cfg = data("bad_colormap.json");
    let out = kzh(&["verify", "cocycle", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("problem.colorMap") && err.contains("fiber sizes"), "{err}");
}

#[test]
fn non_integer_color_is_a_config_error() {
    let dir = std::env::temp_dir().join(format!("kzh-cli-type-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("type.json");
    std::fs::write(&cfg, r#"{"problem": {"N": 2, "colorMap": [1, "x"]}}"#).unwrap();
    let out = kzh(&["verify", "cocycle", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("problem.colorMap[1]"));
}

#[test]
fn color_out_of_range_names_the_entry() {
    let dir = std::env::temp_dir().join(format!("kzh-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("range.json");
    std::fs::write(&cfg, r#"{"problem": {"N": 2, "colorMap": [1, 2]}}"#).unwrap();
    let out = kzh(&["verify", "cocycle", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("problem.colorMap[1]"));
}

#[test]
fn solve_needs_numeric_kappa() {
    let out = kzh(&["solve", "kz", "--kappa", "formal"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kappa"));
}

#[test]
fn solve_writes_json_and_prints_summary() {
    let cfg = data("solve.json");
    let path = std::env::temp_dir().join(format!("kzh-solve-{}.json", std::process::id()));
    let out = kzh(&["solve", "kz", "--config", cfg.to_str().unwrap(), "--json", path.to_str().unwrap(), "--timing"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("PASS kz_residual"), "{summary}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["tables"]["kzResidual"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["tables"]["regularized"], true);
    assert!(v["timingMs"].is_u64());
}

#[test]
fn unknown_command_and_field() {
    assert_eq!(kzh(&["verify", "everything"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("kzh-cli-field-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("typo.json");
    std::fs::write(&cfg, r#"{"tolerances": {"quadratur": 1e-8}}"#).unwrap();
    let out = kzh(&["verify", "flatness", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerances"));
}

#[test]
fn rank_two_without_omega_is_rejected() {
    let dir = std::env::temp_dir().join(format!("kzh-cli-rank2-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("a2.json");
    std::fs::write(
        &cfg,
        r#"{"algebra": {"B": [["2","-1"],["-1","2"]], "muAlpha": [["1","0"],["0","1"]], "muMu": [["1","0"],["0","1"]]},
            "problem": {"k": [1, 1]}}"#,
    )
    .unwrap();
    let out = kzh(&["verify", "flatness", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let hom = kzh(&["report", "homology", "--config", cfg.to_str().unwrap()]);
    assert_eq!(hom.status.code(), Some(0), "{}", String::from_utf8_lossy(&hom.stderr));
}

#[test]
fn explicit_omega_for_rank_two() {
    let dir = std::env::temp_dir().join(format!("kzh-cli-omega-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let id: Vec<Vec<String>> = (0..6).map(|i| (0..6).map(|j| if i == j { "1" } else { "0" }.to_string()).collect()).collect();
    let base = serde_json::json!({
        "algebra": {"B": [["2","-1"],["-1","2"]], "muAlpha": [["1","0"],["0","1"]], "muMu": [["1","0"],["0","1"]]},
        "problem": {"k": [1, 1]},
    });
    let mut good = base.clone();
    good["options"] = serde_json::json!({"omega": [{"i": 1, "j": 2, "matrix": id}]});
    let mut bad = base;
    bad["options"] = serde_json::json!({"omega": [{"i": 1, "j": 2, "matrix": [["1"]]}]});
    let (g, b) = (dir.join("good.json"), dir.join("bad.json"));
    std::fs::write(&g, good.to_string()).unwrap();
    std::fs::write(&b, bad.to_string()).unwrap();
    let out = kzh(&["verify", "flatness", "--config", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["tables"]["omegaSource"], "options.omega");
    let out = kzh(&["verify", "flatness", "--config", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("options.omega"));
}

#[test]
fn default_config_cocycle_seed_7() {
    let out = kzh(&["verify", "cocycle", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["config"]["algebra"]["n"], 2);
    assert_eq!(v["config"]["problem"]["N"], 1);
}
