use super::*;
use crate::disjunction::{make_variable, split_i64};
use crate::rational::{self, frac, int};
use crate::zoo::{cks_tetrahedron, jeroslow_equality, jeroslow_inequality, triangle_t};

fn half_on_first(n_rows: usize) -> Vec<crate::Rational> {
    let mut lambda = rational::zeros(n_rows);
    lambda[0] = frac(1, 2);
    lambda
}

#[test]
fn theorem4_tree_sizes() {
    for n in [3usize, 5, 7] {
        let tree = build_theorem4_tree(n).unwrap();
        assert_eq!(tree.size(), n + 2);
        let report = verify_proof(&tree);
        assert!(report.accepted(), "{:?}", report.failures);
        assert_eq!(tree.stats().max_sparsity, 1);
    }
    assert!(build_theorem4_tree(4).is_err());
    assert!(build_theorem4_tree(1).is_err());
}

#[test]
fn theorem4_last_node_is_infeasible() {
    let tree = build_theorem4_tree(5).unwrap();
    let last = tree.nodes.iter().rfind(|n| tree.depth_of(n.id) == 3).unwrap();
    // The deepest >= 1 child fixes x1 = x2 = x3 = 1.
    let deepest = tree
        .nodes
        .iter().find(|n| tree.depth_of(n.id) == 3 && n.added[0].relation == crate::Relation::Ge)
        .unwrap();
    assert_eq!(
        deepest.kind,
        NodeKind::Leaf {
            reason: LeafReason::LpInfeasible
        }
    );
    assert!(matches!(last.kind, NodeKind::Leaf { .. }));
}

#[test]
fn single_leaf_on_jeroslow_is_rejected() {
    let inst = jeroslow_inequality(5).unwrap();
    let mut tree = ProofTree::new(inst, Mode::Restricted);
    tree.leaf(0, LeafReason::BoundCertified);
    let report = verify_proof(&tree);
    assert!(!report.accepted());
    assert_eq!(report.first_failure().unwrap().code, "leaf-bound-exceeded");
}

#[test]
fn cg_cut_then_leaf() {
    let inst = jeroslow_inequality(3).unwrap();
    let lambda = half_on_first(inst.polyhedron.oriented_len());
    let tree = build_single_cut_proof(&inst, &lambda).unwrap();
    assert_eq!(tree.size(), 2);
    assert!(verify_proof(&tree).accepted());
    let stats = tree.stats();
    assert_eq!((stats.size, stats.max_sparsity, stats.depth), (2, 3, 1));
}

#[test]
fn tampered_cut_is_rejected_at_its_node() {
    let inst = jeroslow_inequality(5).unwrap();
    let lambda = half_on_first(inst.polyhedron.oriented_len());
    let mut tree = build_single_cut_proof(&inst, &lambda).unwrap();
    if let NodeKind::Cut { cut, .. } = &mut tree.nodes[0].kind {
        cut.halfspace.rhs = int(1);
    }
    tree.nodes[1].added[0].rhs = int(1);
    let report = verify_proof(&tree);
    assert_eq!(report.first_failure().unwrap().node, 0);
    assert_eq!(report.first_failure().unwrap().code, "rhs-too-strong");
}

#[test]
fn root_leaf_stats() {
    let inst = triangle_t(2).unwrap();
    let mut tree = ProofTree::new(inst, Mode::Restricted);
    tree.leaf(0, LeafReason::BoundCertified);
    let s = tree.stats();
    assert_eq!((s.size, s.depth, s.leaf_count), (1, 0, 1));
}

#[test]
fn driver_cg_objective() {
    let inst = jeroslow_inequality(5).unwrap();
    let tree = run_branch_and_cut(&inst, &Strategy::cg_objective()).unwrap();
    assert_eq!(tree.size(), 2);
    assert!(verify_proof(&tree).accepted());
}

#[test]
fn driver_variable_branching() {
    let inst = jeroslow_inequality(5).unwrap();
    for sel in [NodeSelection::Dfs, NodeSelection::Bfs, NodeSelection::BestBound] {
        let strategy = Strategy::variable_branching().with_selection(sel);
        let tree = run_branch_and_cut(&inst, &strategy).unwrap();
        assert!(verify_proof(&tree).accepted());
        assert!(tree.stats().leaf_count >= 4);
    }
}

#[test]
fn driver_is_deterministic() {
    let inst = jeroslow_inequality(5).unwrap();
    let a = run_branch_and_cut(&inst, &Strategy::variable_branching()).unwrap();
    let b = run_branch_and_cut(&inst, &Strategy::variable_branching()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn driver_budget() {
    let inst = jeroslow_inequality(7).unwrap();
    match run_branch_and_cut(&inst, &Strategy::variable_branching().with_budget(3)) {
        Err(crate::Error::NodeBudget { budget, partial }) => {
            assert_eq!(budget, 3);
            assert!(!partial.open_nodes().is_empty());
        }
        other => panic!("expected a budget error, got {other:?}"),
    }
}

#[test]
fn cks_branching_is_constant_size() {
    let sizes: Vec<usize> = [10, 100]
        .iter()
        .map(|&h| {
            let tree = run_branch_and_cut(&cks_tetrahedron(h).unwrap(), &Strategy::variable_branching())
                .unwrap();
            assert!(verify_proof(&tree).accepted());
            tree.size()
        })
        .collect();
    assert_eq!(sizes[0], sizes[1]);
}

#[test]
fn infeasibility_proof_by_branching() {
    let inst = jeroslow_equality(5).unwrap();
    let tree = run_branch_and_cut(&inst, &Strategy::variable_branching()).unwrap();
    assert!(verify_proof(&tree).accepted());
    assert!(tree.leaves().iter().all(|&l| tree.nodes[l].kind
        == NodeKind::Leaf {
            reason: LeafReason::LpInfeasible
        }));
}

#[test]
fn dense_split_on_equality_instance() {
    let inst = jeroslow_equality(3).unwrap();
    let mut tree = ProofTree::new(inst, Mode::Restricted);
    let ch = tree.branch(0, split_i64(&[1, 1, 1], 1, 3, 0).unwrap());
    for c in ch {
        close_leaf(&mut tree, c).unwrap();
    }
    assert_eq!(tree.size(), 3);
    assert!(verify_proof(&tree).accepted());
}

#[test]
fn restricted_mode_rejects_non_separating_branch() {
    let inst = triangle_t(3).unwrap();
    let mut tree = ProofTree::new(inst.clone(), Mode::Restricted);
    // The LP optimum (1/2, 3) has x2 integral, so branching on x2 keeps it.
    let ch = tree.branch(0, make_variable(1, 0.into(), 2, 0).unwrap());
    tree.leaf(ch[0], LeafReason::BoundCertified);
    tree.leaf(ch[1], LeafReason::BoundCertified);
    let report = verify_proof(&tree);
    assert!(report.failures.iter().any(|f| f.code == "not-separating" && f.node == 0));

    let mut ok = ProofTree::new(inst, Mode::Restricted);
    let ch = ok.branch(0, make_variable(0, 0.into(), 2, 0).unwrap());
    for c in ch {
        close_leaf(&mut ok, c).unwrap();
    }
    assert!(verify_proof(&ok).accepted());
    assert_eq!(ok.size(), 3);
}

#[test]
fn structural_errors() {
    let inst = triangle_t(2).unwrap();
    let mut tree = ProofTree::new(inst, Mode::Unrestricted);
    let ch = tree.branch(0, make_variable(0, 0.into(), 2, 0).unwrap());
    tree.leaf(ch[0], LeafReason::BoundCertified);
    tree.leaf(ch[1], LeafReason::BoundCertified);
    tree.nodes[2].parent = Some(1);
    assert_eq!(verify_proof(&tree).first_failure().unwrap().code, "structure");
    let mut open = ProofTree::new(triangle_t(2).unwrap(), Mode::Unrestricted);
    open.branch(0, make_variable(0, 0.into(), 2, 0).unwrap());
    assert_eq!(verify_proof(&open).first_failure().unwrap().code, "open-node");
}

#[test]
fn renumbering_preserves_validity() {
    let tree = run_branch_and_cut(&jeroslow_inequality(5).unwrap(), &Strategy::variable_branching())
        .unwrap();
    let r = tree.renumbered();
    assert_eq!(r.size(), tree.size());
    assert!(verify_proof(&r).accepted());
}
