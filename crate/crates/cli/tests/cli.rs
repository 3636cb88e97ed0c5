use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_secdist"));
    cmd.env_remove("SECDIST_BACKEND");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn boost_path() -> String {
    repo().join("crates/core/models/boost.json").display().to_string()
}

fn schema(name: &str) -> jsonschema::Validator {
    let text = fs::read_to_string(repo().join("docs").join(name)).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn autonomous_ranks(report: &Value) -> Vec<Vec<u64>> {
    report["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            let v = p["verdicts"]
                .as_array()
                .unwrap()
                .iter()
                .find(|v| v["kind"] == "sigma_secure_autonomous")
                .unwrap();
            v["rank_table"].as_array().unwrap().iter().map(|e| e["rank"].as_u64().unwrap()).collect()
        })
        .collect()
}

#[test]
fn analyze_bundled_reports_rank_table_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&["analyze", "--model", &boost_path(), "--sigma", "1", "--rho", "0", "-o", report.to_str().unwrap()]);
    // Pair (2,3) is not σρ-secure at σ = 1, so not every pair passes.
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("Γ1={1,2}"));
    assert!(text.contains("Γ2={1,3}"));
    let json = read_json(&report);
    assert_valid(&schema("report.schema.json"), &json);
    assert_eq!(autonomous_ranks(&json), vec![vec![4, 3, 3], vec![4, 3, 3], vec![2, 2, 2]]);
    let secure: Vec<bool> = json["pairs"].as_array().unwrap().iter().map(|p| p["secure"].as_bool().unwrap()).collect();
    assert_eq!(secure, vec![true, true, false]);
    assert_eq!(json["seed"], 0);
    assert_eq!(json["reconstructable"], false);
}

#[test]
fn analyze_secure_subset_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let mut model: Value = read_json(Path::new(&boost_path()));
    model["modes"].as_array_mut().unwrap().truncate(2);
    let path = dir.path().join("two_modes.json");
    fs::write(&path, serde_json::to_string(&model).unwrap()).unwrap();
    let report = dir.path().join("report.json");
    let out = run(&["analyze", "--model", path.to_str().unwrap(), "-o", report.to_str().unwrap(), "--seed", "17"]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    let json = read_json(&report);
    assert_valid(&schema("report.schema.json"), &json);
    assert_eq!(json["seed"], 17);
    assert_eq!(json["reconstructable"], true);
}

#[test]
fn analyze_autonomous_fails() {
    let out = run(&["analyze", "--model", &boost_path(), "--autonomous", "--sigma", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn analyze_rejects_sparsity_bound() {
    let out = run(&["analyze", "--model", &boost_path(), "--sigma", "2"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("2σ < p"), "{}", stderr(&out));
}

#[test]
fn exhaustive_and_float_agree_with_default() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = (0..3).map(|k| dir.path().join(format!("r{k}.json"))).collect();
    let p = |k: usize| paths[k].to_str().unwrap().to_string();
    assert_eq!(code(&run(&["analyze", "-o", &p(0)])), 2);
    assert_eq!(code(&run(&["analyze", "--exhaustive", "-o", &p(1)])), 2);
    let float = bin().args(["analyze", "-o", &p(2)]).env("SECDIST_BACKEND", "float").output().unwrap();
    assert_eq!(code(&float), 2);
    let reports: Vec<Value> = paths.iter().map(|p| read_json(p)).collect();
    let validator = schema("report.schema.json");
    for r in &reports {
        assert_valid(&validator, r);
    }
    assert_eq!(reports[1]["enumeration"], "exhaustive");
    assert_eq!(reports[2]["backend"], "float");
    let secure = |r: &Value| -> Vec<Value> { r["pairs"].as_array().unwrap().iter().map(|p| p["secure"].clone()).collect() };
    assert_eq!(secure(&reports[0]), secure(&reports[1]));
    assert_eq!(secure(&reports[0]), secure(&reports[2]));
    assert_eq!(autonomous_ranks(&reports[2]), autonomous_ranks(&reports[0]));
}

#[test]
fn witness_writes_matching_traces() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["witness", "--model", &boost_path(), "--pair", "1", "2", "--sigma", "1", "-o", d]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let lines = |name: &str| -> Vec<Value> {
        fs::read_to_string(dir.path().join(name))
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect()
    };
    let (ti, tj) = (lines("trace_1.jsonl"), lines("trace_2.jsonl"));
    assert_eq!(ti.len(), 5);
    let trace_schema = schema("trace.schema.json");
    for (a, b) in ti.iter().zip(&tj) {
        assert_valid(&trace_schema, a);
        assert_valid(&trace_schema, b);
        assert_eq!(a["y"], b["y"]);
    }
    let w = read_json(&dir.path().join("witness.json"));
    assert_eq!(w["result"], false);
    assert_eq!(w["failing_pattern"]["gamma"], serde_json::json!([1, 3]));
    assert_eq!(w["witness"]["gamma_i"], serde_json::json!([1]));
}

#[test]
fn witness_for_secure_pair_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["witness", "--pair", "1", "2", "--sigma", "0", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("no witness"));
    assert!(!dir.path().join("witness.json").exists());
}

#[test]
fn simulate_is_deterministic() {
    let a = run(&["simulate", "--mode", "2", "--tau", "4", "--seed", "7"]);
    let b = run(&["simulate", "--mode", "2", "--tau", "4", "--seed", "7"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["simulate", "--mode", "2", "--tau", "4", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
    let validator = schema("trace.schema.json");
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 5);
    for line in text.lines() {
        assert_valid(&validator, &serde_json::from_str(line).unwrap());
    }
    assert_eq!(code(&run(&["simulate", "--mode", "9"])), 1);
}

#[test]
fn estimate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let sim = run(&["simulate", "--mode", "2", "--seed", "3", "-o", trace.to_str().unwrap()]);
    assert_eq!(code(&sim), 0, "{}", stderr(&sim));
    let result = dir.path().join("est.json");
    let out = run(&["estimate", "--trace", trace.to_str().unwrap(), "--sigma", "0", "-o", result.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    let json = read_json(&result);
    assert_eq!(json["estimate"]["mode"], "2");
    assert_eq!(json["estimate"]["unique"], true);

    let wdir = dir.path().join("w");
    assert_eq!(code(&run(&["witness", "--pair", "1", "3", "-o", wdir.to_str().unwrap()])), 0);
    let out = run(&["estimate", "--trace", wdir.join("trace_1.jsonl").to_str().unwrap(), "--sigma", "1"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stdout(&out).contains("ambiguous"));

    let garbage = dir.path().join("g.jsonl");
    let mut text = String::new();
    for t in 0..4 {
        text.push_str(&format!(
            "{{\"t\":{t},\"mode\":\"?\",\"x\":[\"0\",\"0\"],\"u\":[\"0\"],\"y\":[\"{}\",\"{}\",\"{}\"],\"w\":[\"0\",\"0\",\"0\"],\"v\":[\"0\"]}}\n",
            t * t + 1,
            7 - 3 * t,
            2 * t * t * t - 5
        ));
    }
    fs::write(&garbage, text).unwrap();
    let out = run(&["estimate", "--trace", garbage.to_str().unwrap(), "--sigma", "0"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("no consistent mode"));
}

#[test]
fn discretize_prints_and_writes_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("disc.json");
    let out = run(&["discretize", "--method", "euler", "--h", "0.1", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("9/10") && text.contains("1/10"), "{text}");
    let model = read_json(&path);
    assert_valid(&schema("model.schema.json"), &model);
    assert_eq!(model["continuous_time"], false);
    assert_eq!(model["modes"][0]["A"][0][0], "9/10");
    // The written file analyzes to the same verdicts as the bundled one.
    assert_eq!(code(&run(&["analyze", "--model", path.to_str().unwrap()])), 2);

    let zoh = run(&["discretize", "--method", "zoh"]);
    assert_eq!(code(&zoh), 1);
    assert!(stderr(&zoh).contains("float backend"));
    let zoh = run(&["discretize", "--method", "zoh", "--backend", "float"]);
    assert_eq!(code(&zoh), 0, "{}", stderr(&zoh));
}

#[test]
fn bundled_model_matches_schema() {
    assert_valid(&schema("model.schema.json"), &read_json(Path::new(&boost_path())));
}

#[test]
fn model_errors_are_located() {
    let dir = tempfile::tempdir().unwrap();
    let mut model = read_json(Path::new(&boost_path()));
    model["modes"][1]["C"].as_array_mut().unwrap().pop();
    let path = dir.path().join("bad.json");
    fs::write(&path, serde_json::to_string(&model).unwrap()).unwrap();
    let out = run(&["analyze", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("modes[1].C"), "{}", stderr(&out));

    fs::write(&path, "{\"n\": 2,").unwrap();
    let out = run(&["analyze", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));
}
