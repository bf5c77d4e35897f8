use std::path::PathBuf;
use std::process::{Command, Output};

fn ringlab(args: &[&str]) -> Output {
    ringlab_env(args, &[])
}

fn ringlab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ringlab"));
    cmd.args(args).env_remove("RINGLAB_TABLE_MAX").env_remove("RINGLAB_RULE_MAX");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn graph_of_gf64_is_complete_on_four() {
    let o = ringlab(&["graph", "gf:2:6", "--unital", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);
    assert_eq!(v["loops"].as_array().unwrap().len(), 4);
}

#[test]
fn graph_of_z4() {
    let v = json(&ringlab(&["graph", "z:4", "--format", "json"]));
    assert_eq!(v["vertices"], serde_json::json!(["<0>", "<1>", "<2>"]));
    assert_eq!(v["edges"], serde_json::json!([[0, 1], [0, 2], [1, 2]]));
}

#[test]
fn dot_output_for_upper_triangular() {
    let o = ringlab(&["graph", "tri:gf:2:1:2", "--format", "dot"]);
    let text = stdout(&o);
    assert!(text.starts_with("graph G {"));
    assert_eq!(text.lines().filter(|l| l.contains("label=")).count(), 8);
    assert_eq!(o.stdout, ringlab(&["graph", "tri:gf:2:1:2", "--format", "dot"]).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(ringlab(&["graph", "z:4x"]).status.code(), Some(2));
    assert_eq!(ringlab(&["graph", "gf:4:1"]).status.code(), Some(2));
    assert_eq!(ringlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ringlab(&["graph", "gf:2:30"]).status.code(), Some(3));
    assert_eq!(ringlab(&["graph", "z:4", "--unital"]).status.code(), Some(0));
    assert_eq!(ringlab(&["graph", "null:4", "--unital"]).status.code(), Some(2));
}

#[test]
fn budgets_from_env_and_flags() {
    let o = ringlab_env(&["graph", "z:16"], &[("RINGLAB_RULE_MAX", "10")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let o = ringlab_env(&["graph", "z:16", "--rule-max", "100"], &[("RINGLAB_RULE_MAX", "10")]);
    assert_eq!(o.status.code(), Some(0));
    // GF(2^8) is rule-backed above the table limit, but realizing K°4 is not.
    let o = ringlab_env(&["graph", "gf:2:8", "--unital"], &[("RINGLAB_TABLE_MAX", "64")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn semidirect_examples() {
    let o = ringlab(&["semidirect", "--data", &data("directproduct.json"), "--graph"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["vertices"].as_array().unwrap().len(), 3);

    let o = ringlab(&["semidirect", "--data", &data("halfneg.json"), "--graph", "--format", "dot", "--deg", "4", "--coef", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("label=")).count(), 4);

    let o = ringlab(&["semidirect", "--data", &data("t2.json")]);
    let v = json(&o);
    assert_eq!(v["bound"], 8);
    assert_eq!(v["classes"].as_array().unwrap().len(), 8);
    assert_eq!(v["unresolved"].as_array().unwrap().len(), 0);
}

#[test]
fn semidirect_unresolved_exit() {
    let o = ringlab(&["semidirect", "--data", &data("directproduct.json"), "--deg", "0"]);
    assert_eq!(o.status.code(), Some(4));
    let v = json(&o);
    assert_eq!(v["unresolved"].as_array().unwrap().len(), 1);
    assert_eq!(v["exact_vertices"], 3);
}

#[test]
fn semidirect_canonical_form() {
    let o = ringlab(&["semidirect", "--data", &data("halfneg.json"), "--canonical", "3/4@2,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let canon: serde_json::Value = serde_json::Deserializer::from_str(&text)
        .into_iter::<serde_json::Value>()
        .nth(1)
        .unwrap()
        .unwrap();
    assert_eq!(canon["representative"]["z"], "1/2@2");
    assert_eq!(ringlab(&["semidirect", "--data", &data("halfneg.json"), "--canonical", "1/3@3,1"]).status.code(), Some(2));
}

#[test]
fn bad_semidirect_data() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"m":2,"ideal":"z:3","e":0,"L":[0,0,0],"Rm":[0,0,0]}"#).unwrap();
    let o = ringlab(&["semidirect", "--data", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m·L(x) = x - ex"));
}

#[test]
fn integral_and_lattice() {
    let o = ringlab(&["integral", "--ring", "z:6", "--element", "3", "--poly", "0,3,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0,3,1\n");
    let o = ringlab(&["integral", "--ring", "z:8", "--element", "2", "--poly", "2,3"]);
    assert_eq!(stdout(&o), "6,1\n");
    let o = ringlab(&["integral", "--ring", "z:12", "--element", "5", "--poly", "-5,1,0,2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert_eq!(ringlab(&["integral", "--ring", "z:4", "--element", "2", "--poly", "0,2"]).status.code(), Some(2));
    let v = json(&ringlab(&["lattice", "gf:2:2"]));
    assert_eq!(v["count"], 2);
    assert_eq!(json(&ringlab(&["lattice", "z:4"]))["count"], 1);
}

#[test]
fn localized_commands() {
    assert_eq!(stdout(&ringlab(&["localized", "rep", "-7/36@6"])), "1/6@6\n");
    let q = stdout(&ringlab(&["localized", "witness", "5/12@6", "1/6@6"]));
    assert!(!q.trim().is_empty());
    assert_eq!(ringlab(&["localized", "witness", "1/2@6", "1/6@6"]).status.code(), Some(1));
    assert_eq!(ringlab(&["localized", "rep", "1/5@6"]).status.code(), Some(2));
    let v = json(&ringlab(&["localized", "graph", "210"]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 16);
}

#[test]
fn verify_default_suite() {
    let o = ringlab(&["verify", "--suite", "paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["passed"], true);
    assert_eq!(v["unresolved"], 0);
}

#[test]
fn verify_properties_is_deterministic() {
    let a = ringlab(&["verify", "--suite", "properties", "--seed", "7"]);
    let b = ringlab(&["verify", "--suite", "properties", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 7);
}

#[test]
fn verify_with_degree_zero_reports_unresolved() {
    let o = ringlab(&["verify", "--suite", "paper", "--deg", "0"]);
    assert_eq!(o.status.code(), Some(4));
    let v = json(&o);
    let listed: Vec<&serde_json::Value> =
        v["items"].as_array().unwrap().iter().filter(|i| i["status"] == "unresolved").collect();
    assert!(!listed.is_empty());
    assert!(listed.iter().all(|i| !i["unresolved"].as_array().unwrap().is_empty()));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ringlab.toml");
    std::fs::write(&cfg, "degree = 0\nformat = \"dot\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = ringlab(&["--config", c, "semidirect", "--data", &data("directproduct.json"), "--graph"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).starts_with("graph G {"));
    let o = ringlab(&["--config", c, "semidirect", "--data", &data("directproduct.json"), "--graph", "--deg", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with('{'));

    std::fs::write(&cfg, "degre = 3\n").unwrap();
    assert_eq!(ringlab(&["--config", c, "graph", "z:4"]).status.code(), Some(2));
    std::fs::write(&cfg, "rule_max = 8\n").unwrap();
    assert_eq!(ringlab(&["--config", c, "graph", "z:16"]).status.code(), Some(3));
}
