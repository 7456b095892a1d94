use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lks(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lks")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn plant(dir: &Path, seed: &str) {
    let out = lks(dir, &["--seed", seed, "gen", "clusterPlant", "--graph-out", "g.txt", "--nabla-out", "n.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn gen_is_deterministic_and_writes_files() {
    let dir = TempDir::new().unwrap();
    let a = lks(dir.path(), &["--seed", "5", "gen", "figure2Family", "--graph-out", "a.txt"]);
    let b = lks(dir.path(), &["--seed", "5", "gen", "figure2Family", "--graph-out", "b.txt"]);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    let ta = std::fs::read(dir.path().join("a.txt")).unwrap();
    let tb = std::fs::read(dir.path().join("b.txt")).unwrap();
    assert_eq!(ta, tb);
    assert!(stdout(&a).contains("audit passed"));
}

#[test]
fn gen_json_report_carries_the_audit() {
    let dir = TempDir::new().unwrap();
    let out = lks(dir.path(), &["--json", "gen", "randomLKS", "--n", "30", "--k", "5"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["n"], 30);
    assert_eq!(report["audit"]["kind"], "randomLks");
    assert_eq!(report["audit"]["lks"], true);
}

#[test]
fn gen_without_decomposition_rejects_nabla_output() {
    let dir = TempDir::new().unwrap();
    let out = lks(dir.path(), &["gen", "randomLKS", "--nabla-out", "n.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn structure_run_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    plant(dir.path(), "2");
    let run = lks(
        dir.path(),
        &[
            "structure",
            "run",
            "--graph",
            "g.txt",
            "--nabla",
            "n.json",
            "--eta",
            "1/5",
            "--epsilon",
            "1/10",
            "--out",
            "o.json",
        ],
    );
    assert_eq!(code(&run), 0, "{}", stdout(&run));
    let verify =
        lks(dir.path(), &["structure", "verify", "--graph", "g.txt", "--nabla", "n.json", "--output", "o.json"]);
    assert_eq!(code(&verify), 0);
    assert!(stdout(&verify).contains("all assertions hold"));
}

#[test]
fn tampered_structure_output_is_a_verified_failure() {
    let dir = TempDir::new().unwrap();
    plant(dir.path(), "4");
    let run = lks(
        dir.path(),
        &["--quiet", "structure", "run", "--graph", "g.txt", "--nabla", "n.json", "--eta", "1/5", "--out", "o.json"],
    );
    assert_eq!(code(&run), 0);
    assert!(run.stdout.is_empty());
    let path = dir.path().join("o.json");
    let mut stored: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let first = stored["MA"]["pairs"][0].clone();
    stored["MA"]["pairs"].as_array_mut().unwrap().push(first);
    std::fs::write(&path, serde_json::to_string(&stored).unwrap()).unwrap();
    let verify = lks(
        dir.path(),
        &["--json", "structure", "verify", "--graph", "g.txt", "--nabla", "n.json", "--output", "o.json"],
    );
    assert_eq!(code(&verify), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&verify)).unwrap();
    let a = report["assertions"].as_array().unwrap().iter().find(|x| x["name"] == "a").unwrap().clone();
    assert_eq!(a["ok"], false);
}

#[test]
fn decomposition_and_matching_commands() {
    let dir = TempDir::new().unwrap();
    plant(dir.path(), "1");
    assert_eq!(
        code(&lks(dir.path(), &["decomp", "verify", "--graph", "g.txt", "--nabla", "n.json", "--eta", "1/5"])),
        0
    );
    assert_eq!(code(&lks(dir.path(), &["match", "ge", "--graph", "g.txt"])), 0);
    let max = lks(dir.path(), &["--json", "match", "max", "--graph", "g.txt"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&max)).unwrap();
    assert_eq!(report["size"], 40);
}

#[test]
fn regularity_certify_on_a_complete_bipartite_pair() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("8 16\n");
    for u in 0..4 {
        for v in 4..8 {
            text.push_str(&format!("{u} {v}\n"));
        }
    }
    std::fs::write(dir.path().join("k44.txt"), text).unwrap();
    let out =
        lks(dir.path(), &["regularity", "certify", "--graph", "k44.txt", "--u", "0..4", "--w", "4..8", "--eps", "1/4"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("regular"));
}

#[test]
fn params_commands_report_exact_values() {
    let dir = TempDir::new().unwrap();
    let out = lks(
        dir.path(),
        &["--json", "params", "step-schedule", "--omega", "1", "--tau", "2/5", "--rho", "1/2", "--eps", "1/100"],
    );
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["base"]["exact"], "1/200");
    assert_eq!(report["descent_identity"], true);
    let levels = lks(dir.path(), &["params", "epsilon-levels", "--eps", "1/2", "--levels", "3"]);
    assert_eq!(code(&levels), 0);
    let bad = lks(dir.path(), &["params", "step-schedule", "--omega", "1", "--tau", "3/5", "--rho", "1/2", "--eps", "1/100"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn malformed_inputs_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "3 1\n2 1\n").unwrap();
    assert_eq!(code(&lks(dir.path(), &["match", "max", "--graph", "bad.txt"])), 2);
    assert_eq!(code(&lks(dir.path(), &["match", "max", "--graph", "missing.txt"])), 2);
    assert_eq!(
        code(&lks(dir.path(), &["params", "pair-constants", "--omega", "x", "--eps", "1", "--rho", "1", "--tau", "1"])),
        2
    );
}

#[test]
fn pipeline_commands_on_a_spot_cross_instance() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&lks(dir.path(), &["--seed", "1", "gen", "spotCross", "--instance-out", "i.json"])), 0);
    assert_eq!(code(&lks(dir.path(), &["pipeline", "extract", "--instance", "i.json"])), 0);
    assert_eq!(code(&lks(dir.path(), &["pipeline", "grow", "--instance", "i.json"])), 0);
    let dichotomy = lks(dir.path(), &["--json", "pipeline", "dichotomy", "--instance", "i.json"]);
    assert_eq!(code(&dichotomy), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&dichotomy)).unwrap();
    assert!(report["result"]["tag"] == "M1" || report["result"]["tag"] == "M2");
}

#[test]
fn pipeline_separate_recounts_its_postconditions() {
    let dir = TempDir::new().unwrap();
    plant(dir.path(), "6");
    let out =
        lks(dir.path(), &["--json", "pipeline", "separate", "--graph", "g.txt", "--nabla", "n.json", "--eta", "1/5"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["recount"]["i"], true);
    assert_eq!(report["recount"]["iii"], true);
}

#[test]
fn batch_writes_report_and_signals_failures() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"jobs":[
        {"generator":{"kind":"clusterPlant","n":80,"k":10,"eta":"1/5","gamma":"1/4","seed":0},"op":"structure","count":3},
        {"generator":{"kind":"randomLKS","n":20,"k":4,"eta":"0","gamma":"1/4","seed":0},"op":"audit","count":2}
    ]}"#;
    std::fs::write(dir.path().join("ok.json"), config).unwrap();
    let out = lks(dir.path(), &["batch", "--config", "ok.json", "--out", "r.json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["total"], 5);
    let failing = r#"{"jobs":[{"generator":{"kind":"randomLKS","n":20,"k":4,"eta":"0","gamma":"1/4","seed":0},"op":"separate","count":1}]}"#;
    std::fs::write(dir.path().join("bad.json"), failing).unwrap();
    assert_eq!(code(&lks(dir.path(), &["batch", "--config", "bad.json"])), 1);
    let empty = lks(dir.path(), &["--json", "batch", "--config", "empty.json"]);
    assert_eq!(code(&empty), 2);
    std::fs::write(dir.path().join("empty.json"), r#"{"jobs":[]}"#).unwrap();
    let empty = lks(dir.path(), &["batch", "--config", "empty.json"]);
    assert_eq!(code(&empty), 0);
    assert!(stdout(&empty).contains("0 of 0"));
}
