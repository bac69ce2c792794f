use super::*;
use crate::cuts::{cg_cut_along, generate_cg_cut};
use crate::disjunction::make_variable;
use crate::error::Error;
use crate::lp::solve_lp;
use crate::proof::{
    build_single_cut_proof, build_theorem4_tree, close_leaf, verify_proof, Mode, ProofTree,
};
use crate::rational::{self, frac, int};
use crate::zoo::{jeroslow_equality, jeroslow_inequality, triangle_t};

fn single_cg(n: usize) -> ProofTree {
    let inst = jeroslow_inequality(n).unwrap();
    let mut lambda = rational::zeros(inst.polyhedron.oriented_len());
    lambda[0] = frac(1, 2);
    build_single_cut_proof(&inst, &lambda).unwrap()
}

fn accepted(tree: &ProofTree) {
    let report = verify_proof(tree);
    assert!(report.accepted(), "{:?}", report.failures);
}

#[test]
fn single_cut_becomes_one_split() {
    for n in [3, 5, 7] {
        let tree = single_cg(n);
        let bb = cp_proof_to_bb(&tree).unwrap();
        accepted(&bb);
        assert!(bb.is_pure_branch_and_bound());
        assert_eq!(bb.size(), 3);
        assert_eq!(bb.stats().max_sparsity, tree.stats().max_sparsity);
    }
}

#[test]
fn pure_bb_is_unchanged_in_size() {
    let tree = build_theorem4_tree(5).unwrap();
    let bb = cp_proof_to_bb(&tree).unwrap();
    accepted(&bb);
    assert_eq!(bb.size(), tree.size());
}

#[test]
fn two_cut_chain() {
    // x1 + x2 <= 1 from 1/2 * (2 sum x <= 3) + (-x3 <= 0), then sum x <= 1.
    let inst = jeroslow_inequality(3).unwrap();
    let rows = inst.polyhedron.oriented_len();
    let mut tree = ProofTree::new(inst.clone(), Mode::Unrestricted);
    let mut l1 = rational::zeros(rows);
    l1[0] = frac(1, 2);
    l1[5] = int(1);
    let c1 = generate_cg_cut(&inst.polyhedron, &l1).unwrap();
    assert_eq!(c1.halfspace.coeffs, rational::ints(&[1, 1, 0]));
    assert_eq!(c1.halfspace.rhs, int(1));
    let a = tree.cut(0, c1);
    let mut l2 = rational::zeros(rows + 1);
    l2[0] = frac(1, 2);
    let c2 = generate_cg_cut(&tree.relaxation(a), &l2).unwrap();
    let b = tree.cut(a, c2);
    close_leaf(&mut tree, b).unwrap();
    accepted(&tree);

    let bb = cp_proof_to_bb(&tree).unwrap();
    accepted(&bb);
    assert_eq!(bb.size(), 5);
    assert!(bb.size() <= 3 * tree.stats().cut_count + 1);
}

#[test]
fn scaled_cut_is_normalized() {
    let tree = single_cg(5);
    let mut scaled = tree.clone();
    if let crate::proof::NodeKind::Cut { cut, child } = &mut scaled.nodes[0].kind {
        cut.halfspace = crate::LinearConstraint::le(
            cut.halfspace.coeffs.iter().map(|v| v * int(3)).collect(),
            &cut.halfspace.rhs * int(3) + frac(1, 2),
        );
        let c = *child;
        scaled.nodes[c].added = vec![cut.halfspace.clone()];
    }
    assert_eq!(normalize_cuts(&tree).nodes, tree.nodes);
    let normalized = normalize_cuts(&scaled);
    if let crate::proof::NodeKind::Cut { cut, .. } = &normalized.nodes[0].kind {
        assert_eq!(cut.halfspace.coeffs, rational::ints(&[1; 5]));
        assert_eq!(cut.halfspace.rhs, frac(13, 6));
        assert!(crate::cuts::verify_cut(&scaled.instance.polyhedron, cut).is_ok());
    }
    assert_eq!(normalized.nodes[1].added[0].rhs, frac(13, 6));
}

fn branch_then_cut(n: usize) -> ProofTree {
    let inst = jeroslow_inequality(n).unwrap();
    let mut tree = ProofTree::new(inst.clone(), Mode::Unrestricted);
    let kids = tree.branch(0, make_variable(0, 0.into(), n, 0).unwrap());
    for k in kids {
        let cut = cg_cut_along(&tree.relaxation(k), &inst.objective).unwrap().unwrap();
        let c = tree.cut(k, cut);
        close_leaf(&mut tree, c).unwrap();
    }
    accepted(&tree);
    tree
}

#[test]
fn oracle_replacement_adds_oracle_sizes() {
    let tree = branch_then_cut(5);
    let mut total = 0;
    let bb = bc_proof_to_bb(&tree, |p, cut| {
        let proof = certificate_oracle(p, cut)?;
        total += proof.size();
        Ok(proof)
    })
    .unwrap();
    accepted(&bb);
    assert!(bb.is_pure_branch_and_bound());
    assert_eq!(total, 6);
    assert_eq!(bb.size(), tree.size() + total);
}

#[test]
fn oracle_is_not_called_without_cuts() {
    let tree = build_theorem4_tree(5).unwrap();
    let bb = bc_proof_to_bb(&tree, |_, _| panic!("no cuts")).unwrap();
    assert_eq!(bb.size(), tree.size());
}

#[test]
fn wrong_oracle_proof_is_rejected() {
    let tree = branch_then_cut(5);
    let err = bc_proof_to_bb(&tree, |_, _| Ok(build_theorem4_tree(5).unwrap())).unwrap_err();
    assert!(matches!(err, Error::ProofRejected { .. }), "{err}");
    // A proof of the right inequality that does not verify.
    let err = bc_proof_to_bb(&tree, |p, cut| {
        let inst = crate::Instance::new(
            p.clone(),
            cut.halfspace.coeffs.clone(),
            cut.halfspace.rhs.clone(),
            crate::Goal::ProveBound,
        )?;
        let mut t = ProofTree::new(inst, Mode::Unrestricted);
        t.leaf(0, crate::proof::LeafReason::BoundCertified);
        Ok(t)
    })
    .unwrap_err();
    assert!(err.to_string().contains("oracle proof rejected"), "{err}");
}

#[test]
fn embedding_keeps_lp_value_and_proofs() {
    let inst = jeroslow_inequality(3).unwrap();
    let big = embed_instance(&inst, 2, 1);
    assert_eq!((big.n_int(), big.n_cont()), (5, 1));
    let lp = solve_lp(&big.polyhedron, &big.objective).unwrap();
    assert_eq!(lp.value().cloned(), Some(frac(3, 2)));

    let tree = build_theorem4_tree(5).unwrap();
    let lifted = lift_embedded(&tree, 2, 1).unwrap();
    accepted(&lifted);
    assert_eq!(lifted.size(), tree.size());
    let back = project_embedded(&lifted, &tree.instance).unwrap();
    accepted(&back);
    assert_eq!(back.nodes.len(), tree.nodes.len());

    let cg = single_cg(3);
    let lifted = lift_embedded(&cg, 3, 0).unwrap();
    accepted(&lifted);
    let back = project_embedded(&lifted, &cg.instance).unwrap();
    assert_eq!(back.nodes[0].kind, cg.nodes[0].kind);

    let same = lift_embedded(&cg, 0, 0).unwrap();
    assert_eq!(same.instance, cg.instance);
}

#[test]
fn projection_refuses_new_coordinates() {
    let inst = jeroslow_inequality(3).unwrap();
    let big = embed_instance(&inst, 1, 0);
    let mut tree = ProofTree::new(big, Mode::Unrestricted);
    let kids = tree.branch(0, make_variable(3, 0.into(), 4, 0).unwrap());
    for k in kids {
        tree.leaf(k, crate::proof::LeafReason::BoundCertified);
    }
    assert!(project_embedded(&tree, &inst).is_err());
}

#[test]
fn objective_variable() {
    let inst = jeroslow_inequality(5).unwrap();
    let lifted = add_objective_variable(&inst);
    assert_eq!(lifted.n_cont(), 1);
    let lp = solve_lp(&lifted.polyhedron, &lifted.objective).unwrap();
    assert_eq!(lp.value().cloned(), Some(frac(5, 2)));

    let zero = add_objective_variable(&jeroslow_equality(3).unwrap());
    assert_eq!(zero.polyhedron.constraints.last().unwrap().coeffs, rational::ints(&[0, 0, 0, 1]));

    let tree = build_theorem4_tree(5).unwrap();
    let t = lift_objective_variable(&tree).unwrap();
    accepted(&t);
    assert_eq!(t.size(), tree.size());
    let cg = single_cg(5);
    let t = lift_objective_variable(&cg).unwrap();
    accepted(&t);
    let back = project_objective_variable(&t, &cg.instance).unwrap();
    accepted(&back);
}

#[test]
fn composition_gadget() {
    let a = jeroslow_inequality(5).unwrap();
    let b = triangle_t(4).unwrap();
    let g = compose_complementary(&a, &b).unwrap();
    assert_eq!(g.y_index, 5);
    assert_eq!(g.fiber_lp_value(0).unwrap().value().cloned(), Some(frac(5, 2)));
    assert_eq!(g.fiber_lp_value(1).unwrap().value().cloned(), Some(int(4)));

    let proof = g.composed_proof().unwrap();
    accepted(&proof);
    assert_eq!(proof.size(), 6);
    assert!(proof.size() <= 2 + 2 + 7);
}

#[test]
fn composition_needs_bounded_bound_instances() {
    let a = jeroslow_inequality(3).unwrap();
    assert!(compose_complementary(&a, &jeroslow_equality(3).unwrap()).is_err());
    let open = crate::Instance::new(
        crate::Polyhedron::new(1, 0, vec![crate::LinearConstraint::unit(1, 0, crate::Relation::Ge, int(0))])
            .unwrap(),
        rational::ints(&[1]),
        int(0),
        crate::Goal::ProveBound,
    )
    .unwrap();
    assert!(compose_complementary(&a, &open).is_err());
}
