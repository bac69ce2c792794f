use std::path::{Path, PathBuf};

use bclab_core::io::{canonicalize, instance_from_json, proof_from_json, read_proof};
use bclab_core::proof::{verify_proof, NodeKind};
use bclab_core::rational::frac;

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

#[test]
fn canonical_form_is_a_fixed_point() {
    let files = corpus();
    assert!(files.len() >= 8);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        let canon = canonicalize(&text).unwrap();
        assert_eq!(canonicalize(&canon).unwrap(), canon, "{}", f.display());
        if !f.to_string_lossy().contains("loose") {
            assert_eq!(canon, text, "{} is not canonical", f.display());
        }
    }
}

#[test]
fn loose_file_reduces() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/square_loose.json");
    let text = std::fs::read_to_string(path).unwrap();
    let inst = instance_from_json(&text).unwrap();
    assert_eq!(inst.polyhedron.constraints[0].rhs, frac(3, 2));
    assert_eq!(inst.polyhedron.constraints[1].coeffs[1], frac(1, 1));
    let canon = canonicalize(&text).unwrap();
    assert!(canon.contains("\"3/2\""));
    assert!(!canon.contains("6/4") && !canon.contains("-0"));
}

#[test]
fn stored_proofs_verify() {
    for f in corpus().into_iter().filter(|f| f.to_string_lossy().ends_with(".proof.json")) {
        let tree = read_proof(&f).unwrap();
        let r = verify_proof(&tree);
        assert!(r.accepted(), "{}: {:?}", f.display(), r.failures);
    }
}

#[test]
fn theorem4_file_has_seven_nodes() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/theorem4_n5.proof.json");
    let tree = read_proof(&path).unwrap();
    assert_eq!(tree.size(), 7);
    assert_eq!(tree.stats().max_sparsity, 1);
    let split = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/jeroslow5_split.proof.json");
    let tree = read_proof(&split).unwrap();
    assert_eq!(tree.size(), 3);
    assert!(matches!(tree.nodes[0].kind, NodeKind::Branch { .. }));
}

#[test]
fn missing_node_is_reported_by_field() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/cks10.proof.json");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let last = v["proof"]["nodes"].as_array().unwrap().len() - 1;
    v["proof"]["nodes"].as_array_mut().unwrap().pop();
    let err = proof_from_json(&v.to_string()).unwrap_err().to_string();
    assert!(err.contains(&format!("no node with id {last}")), "{err}");
}
