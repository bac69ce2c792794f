use super::*;
use crate::proof::{verify_proof, Mode};
use crate::zoo::{jeroslow_equality, jeroslow_inequality, triangle_t};

fn exact(outcome: SearchOutcome) -> Minimum {
    match outcome {
        SearchOutcome::Exact(m) => {
            let report = verify_proof(&m.witness);
            assert!(report.accepted(), "{:?}", report.failures);
            assert_eq!(m.witness.size(), m.size);
            assert!(m.witness.is_pure_branch_and_bound());
            m
        }
        SearchOutcome::Bracket(b) => panic!("no exact minimum: {b:?}"),
    }
}

#[test]
fn dense_split_gives_three_nodes() {
    let inst = jeroslow_inequality(3).unwrap();
    let m = exact(min_bb_tree_size(&inst, &SearchSpace::new(3, 1)).unwrap());
    assert_eq!(m.size, 3);
}

#[test]
fn variable_branching_on_jeroslow() {
    // Hand count: fixing x1 either way leaves a 5-node subtree.
    let inst = jeroslow_inequality(3).unwrap();
    let m = exact(min_bb_tree_size(&inst, &SearchSpace::new(1, 1)).unwrap());
    assert_eq!(m.size, 11);
    assert!(m.witness.leaves().len() >= 2);
    let m5 = exact(min_bb_tree_size(&jeroslow_inequality(5).unwrap(), &SearchSpace::new(1, 1)).unwrap());
    assert_eq!(m5.size, 39);
    assert!(m5.witness.leaves().len() >= 4);
}

#[test]
fn symmetry_does_not_change_the_minimum() {
    let inst = jeroslow_inequality(3).unwrap();
    let mut space = SearchSpace::new(2, 1);
    let with = exact(min_bb_tree_size(&inst, &space).unwrap()).size;
    space.symmetry = false;
    let without = exact(min_bb_tree_size(&inst, &space).unwrap()).size;
    assert_eq!(with, without);
}

#[test]
fn monotone_in_sparsity() {
    let inst = jeroslow_inequality(3).unwrap();
    let sizes: Vec<usize> = (1..=3)
        .map(|s| exact(min_bb_tree_size(&inst, &SearchSpace::new(s, 1)).unwrap()).size)
        .collect();
    assert!(sizes.windows(2).all(|w| w[1] <= w[0]), "{sizes:?}");
}

#[test]
fn triangle_needs_one_branch() {
    let inst = triangle_t(10).unwrap();
    assert_eq!(exact(min_bb_tree_size(&inst, &SearchSpace::new(1, 1)).unwrap()).size, 3);
}

#[test]
fn infeasibility_minimum() {
    let inst = jeroslow_equality(3).unwrap();
    let m = exact(min_bb_tree_size(&inst, &SearchSpace::new(1, 1)).unwrap());
    assert_eq!(m.size, 11);
    let dense = exact(min_bb_tree_size(&inst, &SearchSpace::new(3, 1)).unwrap());
    assert_eq!(dense.size, 3);
}

#[test]
fn cap_below_minimum_gives_sound_bracket() {
    let inst = jeroslow_inequality(3).unwrap();
    let space = SearchSpace::new(1, 1);
    let mut last = 0;
    for cap in [1, 3, 5, 7, 9] {
        let b = min_proof_bracket(&inst, &space, cap).unwrap();
        assert!(b.exact_size().is_none());
        assert!(b.lower() > cap && b.lower() >= last);
        assert!(b.upper().is_none_or(|u| u >= 11));
        last = b.lower();
    }
    assert_eq!(min_proof_bracket(&inst, &space, 11).unwrap().exact_size(), Some(11));
}

#[test]
fn sparse_and_dense_brackets_separate() {
    let inst = jeroslow_inequality(5).unwrap();
    let dense = min_proof_bracket(&inst, &SearchSpace::new(5, 1), 3).unwrap();
    let sparse = min_proof_bracket(&inst, &SearchSpace::new(1, 1), 3).unwrap();
    assert_eq!(dense.upper(), Some(3));
    assert!(sparse.lower() > 3);
}

#[test]
fn budget_exhaustion_returns_a_bracket() {
    let inst = jeroslow_inequality(5).unwrap();
    let out = min_bb_tree_size(&inst, &SearchSpace::new(1, 1).with_budget(20)).unwrap();
    let SearchOutcome::Bracket(b) = out else {
        panic!("expected a bracket")
    };
    assert!(b.lower >= 1);
    if let (Some(u), Some(w)) = (b.upper, &b.witness) {
        assert!(u >= b.lower);
        assert!(verify_proof(w).accepted());
    }
}

#[test]
fn restricted_search() {
    let inst = jeroslow_inequality(3).unwrap();
    let space = SearchSpace::new(1, 1).with_mode(Mode::Restricted);
    let m = exact(min_bb_tree_size(&inst, &space).unwrap());
    assert_eq!(m.witness.mode, Mode::Restricted);
    assert!(m.size >= 11);
}

#[test]
fn rejects_mixed_instances() {
    let inst = crate::transforms::add_objective_variable(&jeroslow_inequality(3).unwrap());
    assert!(min_bb_tree_size(&inst, &SearchSpace::new(1, 1)).is_err());
}

