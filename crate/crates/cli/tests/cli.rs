use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bclab"))
        .args(args)
        .env_remove("BCLAB_NODE_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_prove_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("j5.json");
    let proof = dir.path().join("j5.proof.json");
    assert_eq!(code(&bclab(&["gen", "jeroslow", "--n", "5", "--out", p(&inst)])), 0);
    let o = bclab(&["prove", p(&inst), "--strategy", "cg-single", "--out", p(&proof)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = bclab(&["verify", p(&proof)]);
    assert_eq!(code(&o), 0);
    let report = json(&o);
    assert_eq!(report["accepted"], true);
    assert_eq!(report["size"], 2);
    assert_eq!(report["max_sparsity"], 5);
}

#[test]
fn tampered_rhs_is_rejected_with_its_node() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("j3.json");
    let proof = dir.path().join("j3.proof.json");
    bclab(&["gen", "jeroslow", "--n", "3", "--out", p(&inst)]);
    bclab(&["prove", p(&inst), "--strategy", "cg-single", "--out", p(&proof)]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&proof).unwrap()).unwrap();
    // Tighten the cut beyond what its certificate supports.
    v["proof"]["nodes"][0]["kind"]["cut"]["halfspace"]["rhs"] = "0".into();
    v["proof"]["nodes"][1]["added"][0]["rhs"] = "0".into();
    std::fs::write(&proof, v.to_string()).unwrap();
    let o = bclab(&["verify", p(&proof)]);
    assert_eq!(code(&o), 1);
    let report = json(&o);
    assert_eq!(report["accepted"], false);
    assert_eq!(report["failures"][0]["node"], 0);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "rejected");
    assert_eq!(err["detail"]["node"], 0);
}

#[test]
fn malformed_inputs_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"format_version\": 1}").unwrap();
    let o = bclab(&["lp", p(&bad)]);
    assert_eq!(code(&o), 3);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "malformed");
    assert_eq!(code(&bclab(&["lp", p(&dir.path().join("missing.json"))])), 3);
    assert_eq!(code(&bclab(&["no-such-command"])), 3);
    assert_eq!(code(&bclab(&["gen", "jeroslow", "--n", "4"])), 3);
    assert_eq!(code(&bclab(&["--help"])), 0);
}

#[test]
fn dangling_node_in_proof_file_is_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("p.json");
    let proof = dir.path().join("p.proof.json");
    bclab(&["gen", "partial", "--n", "5", "--out", p(&inst)]);
    let o = bclab(&["prove", p(&inst), "--strategy", "theorem4", "--out", p(&proof)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&bclab(&["verify", p(&proof)]))["size"], 7);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&proof).unwrap()).unwrap();
    v["proof"]["nodes"][0]["kind"]["children"][0] = 42.into();
    std::fs::write(&proof, v.to_string()).unwrap();
    let o = bclab(&["verify", p(&proof)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("proof.nodes[0].kind.children[0]"));
}

#[test]
fn lp_reports_exact_values() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("t.json");
    bclab(&["gen", "triangle", "--h", "4", "--out", p(&inst)]);
    let v = json(&bclab(&["lp", p(&inst)]));
    assert_eq!(v["status"], "optimal");
    assert_eq!(v["value"], "4");
    assert_eq!(v["point"], serde_json::json!(["1/2", "4"]));
}

#[test]
fn transform_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("j.json");
    let proof = dir.path().join("cp.json");
    let bb = dir.path().join("bb.json");
    bclab(&["gen", "jeroslow", "--n", "5", "--out", p(&inst)]);
    bclab(&["prove", p(&inst), "--strategy", "cg-single", "--out", p(&proof)]);
    for kind in ["cp-to-bb", "bc-to-bb", "normalize", "lift-objective"] {
        let o = bclab(&["transform", p(&proof), "--kind", kind, "--out", p(&bb)]);
        assert_eq!(code(&o), 0, "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        let r = json(&bclab(&["verify", p(&bb)]));
        assert_eq!(r["accepted"], true, "{kind}");
        if kind == "cp-to-bb" {
            assert_eq!(r["size"], 3);
            assert_eq!(r["cuts"], 0);
        }
    }
    let o = bclab(&["transform", p(&proof), "--kind", "embed", "--extra-int", "1", "--extra-cont", "1"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn search_minimum_and_budget_exit() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("j3.json");
    let witness = dir.path().join("w.json");
    bclab(&["gen", "jeroslow", "--n", "3", "--out", p(&inst)]);
    let o = bclab(&["search", p(&inst), "--s", "3", "--witness", p(&witness)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!((v["status"].as_str(), v["lower"].as_u64()), (Some("exact"), Some(3)));
    assert_eq!(code(&bclab(&["verify", p(&witness)])), 0);
    let v = json(&bclab(&["search", p(&inst), "--s", "1"]));
    assert_eq!(v["lower"], 11);

    let five = dir.path().join("j5.json");
    bclab(&["gen", "jeroslow", "--n", "5", "--out", p(&five)]);
    let o = bclab(&["search", p(&five), "--s", "1", "--budget", "20"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["status"], "bracket");
    let o = Command::new(env!("CARGO_BIN_EXE_bclab"))
        .args(["search", p(&five), "--s", "1"])
        .env("BCLAB_NODE_BUDGET", "20")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    // An explicit cap makes the bracket the answer.
    let o = bclab(&["search", p(&five), "--s", "1", "--cap", "5"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["lower"].as_u64().unwrap() > 3);
}

#[test]
fn counts() {
    let v = json(&bclab(&["count", "optimal-vertices", "--n", "7"]));
    assert_eq!(v["count"], "140");
    let v = json(&bclab(&["count", "p-bound", "--n", "7", "--t", "3"]));
    assert_eq!(v["p_bound"], "36");
    let v = json(&bclab(&["count", "vertices-in-split", "--n", "5", "--pi", "1,0,0,0,0", "--pi0", "0"]));
    assert_eq!(v["count"], 6);
    let v = json(&bclab(&["count", "sperner", "--w", "1,1,1,1", "--W", "2"]));
    assert_eq!(v["count"], 6);
}

#[test]
fn vd_bound_experiment_csv() {
    let o = bclab(&["experiment", "vD-bound", "--n", "7", "--B", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,max_observed,p_bound,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    // Presets are deterministic.
    assert_eq!(bclab(&["experiment", "vD-bound", "--n", "7", "--B", "2"]).stdout, o.stdout);
    assert_eq!(code(&bclab(&["experiment", "nope"])), 3);
    assert!(String::from_utf8(bclab(&["experiment", "list"]).stdout).unwrap().contains("lp-oracle"));
}
