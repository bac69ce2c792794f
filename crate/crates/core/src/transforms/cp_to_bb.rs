//! Replacing cuts by branching.
//!
//! A cut `<a,x> <= delta` with integral `a` becomes the split
//! `{<a,x> <= floor(delta)} u {<a,x> >= floor(delta) + 1}`. The `<=` child
//! takes the place of the cut's child: it adds a row with the same
//! coefficients in the same position, so every certificate further down keeps
//! its row indices (the rhs only gets tighter, which certificates tolerate).
//! The `>=` child is closed either directly (LP-infeasible) or by the cut's
//! own certificate disjunction, whose terms are then all LP-infeasible.

use num_traits::{One, Zero};

use crate::cuts::{Certificate, CuttingPlane};
use crate::disjunction::{make_split, Disjunction};
use crate::error::{Error, Result};
use crate::lp::solve_lp;
use crate::polyhedron::LinearConstraint;
use crate::proof::{
    close_leaf, ensure_valid, leaf_reason, LeafReason, Mode, NodeId, NodeKind, ProofTree,
};
use crate::rational::{self, Rational};

/// Rewrites every cut into primitive integer form and updates its child.
/// Certificates need no change: the verifier accepts any positive multiple,
/// and later certificates only see a rescaled row. Multipliers on that row
/// are divided by the same factor so the combinations below stay identical.
pub fn normalize_cuts(tree: &ProofTree) -> ProofTree {
    let mut out = tree.clone();
    for id in 0..out.nodes.len() {
        let (child, scale) = match &out.nodes[id].kind {
            NodeKind::Cut { cut, child } => {
                let s = rational::primitive_scale(&cut.halfspace.coeffs);
                if s.is_one() {
                    continue;
                }
                (*child, s)
            }
            _ => continue,
        };
        if let NodeKind::Cut { cut, .. } = &mut out.nodes[id].kind {
            cut.halfspace = LinearConstraint::le(
                cut.halfspace.coeffs.iter().map(|a| a * &scale).collect(),
                &cut.halfspace.rhs * &scale,
            );
            out.nodes[child].added = vec![cut.halfspace.clone()];
        }
        let row = out.relaxation(child).oriented_len() - 1;
        let inv = Rational::one() / &scale;
        scale_row_below(&mut out, child, row, &inv);
    }
    out
}

/// Multiplies the multiplier of oriented row `row` by `factor` in every cut
/// certificate at or below `from`.
fn scale_row_below(tree: &mut ProofTree, from: NodeId, row: usize, factor: &Rational) {
    let mut stack = vec![from];
    while let Some(id) = stack.pop() {
        stack.extend(tree.children(id));
        if let NodeKind::Cut { cut, .. } = &mut tree.nodes[id].kind {
            let scale = |v: &mut Vec<Rational>| {
                if let Some(m) = v.get_mut(row) {
                    *m *= factor;
                }
            };
            match &mut cut.certificate {
                Certificate::Cg { multipliers } => scale(multipliers),
                Certificate::Disjunctive { witnesses, .. } => {
                    for w in witnesses {
                        scale(&mut w.multipliers);
                    }
                }
            }
        }
    }
}

fn cut_split(tree: &ProofTree, id: NodeId, cut: &CuttingPlane) -> Result<(Disjunction, Rational)> {
    let inst = &tree.instance;
    let a = &cut.halfspace.coeffs;
    if a[inst.n_int()..].iter().any(|v| !v.is_zero()) || !rational::is_integer_vec(a) {
        return Err(Error::Precondition(format!(
            "cut at node {id} is not integral on integer coordinates only"
        )));
    }
    let floor = cut.halfspace.rhs.floor();
    let split = make_split(a, &floor, inst.n_int(), inst.n_cont())?;
    Ok((split, floor))
}

/// Closes the `>=` side of a replaced cut: a leaf if already LP-infeasible,
/// otherwise a branch on `disjunction` with LP-infeasible children.
fn close_ge_side(
    out: &mut ProofTree,
    ge: NodeId,
    disjunction: Option<&Disjunction>,
) -> Result<()> {
    let lp = solve_lp(&out.relaxation(ge), &out.instance.objective)?;
    if lp.is_infeasible() {
        out.leaf(ge, LeafReason::LpInfeasible);
        return Ok(());
    }
    let d = disjunction.ok_or_else(|| Error::Precondition(format!(
        "node {ge}: the >= side of the split is feasible and the cut has no disjunction"
    )))?;
    for c in out.branch(ge, d.clone()) {
        let lp = solve_lp(&out.relaxation(c), &out.instance.objective)?;
        if !lp.is_infeasible() {
            return Err(Error::ProofRejected {
                node: Some(c),
                message: "certificate term is not LP-infeasible after the split".into(),
            });
        }
        out.leaf(c, LeafReason::LpInfeasible);
    }
    Ok(())
}

/// Relabels a copied leaf from its (possibly tighter) relaxation.
fn relabel(out: &mut ProofTree, id: NodeId, original: LeafReason) -> Result<()> {
    let lp = solve_lp(&out.relaxation(id), &out.instance.objective)?;
    let reason = leaf_reason(&out.instance, &lp)?.ok_or_else(|| Error::ProofRejected {
        node: Some(id),
        message: format!("leaf ({}) no longer certifies the goal", original.name()),
    })?;
    out.leaf(id, reason);
    Ok(())
}

/// Pure branch-and-bound proof from a (branch-and-)cut proof whose cuts are
/// all certified. CG certificates are first re-expressed over their split.
///
/// Output size is the input size plus, per cut, one node for the `>=` side
/// and `k` more when that side needs the certificate disjunction. The output
/// is an unrestricted proof.
pub fn cp_proof_to_bb(tree: &ProofTree) -> Result<ProofTree> {
    ensure_valid(tree)?;
    let src = normalize_cuts(tree);
    let mut out = ProofTree::new(src.instance.clone(), Mode::Unrestricted);
    let mut stack = vec![(src.root, out.root)];
    while let Some((s, d)) = stack.pop() {
        match &src.nodes[s].kind {
            NodeKind::Open => {
                return Err(Error::Precondition(format!("node {s} is open")));
            }
            NodeKind::Leaf { reason } => relabel(&mut out, d, *reason)?,
            NodeKind::Branch { disjunction, children } => {
                let new = out.branch(d, disjunction.clone());
                stack.extend(children.iter().copied().zip(new));
            }
            NodeKind::Cut { cut, child } => {
                let (split, _) = cut_split(&src, s, cut)?;
                let certified = cut.with_split_certificate(&src.relaxation(s))?;
                let d_cert = match &certified.certificate {
                    Certificate::Disjunctive { disjunction, .. } => disjunction.clone(),
                    Certificate::Cg { .. } => unreachable!(),
                };
                let new = out.branch(d, split);
                stack.push((*child, new[0]));
                close_ge_side(&mut out, new[1], Some(&d_cert))?;
            }
        }
    }
    let out = out.renumbered();
    ensure_valid(&out)?;
    Ok(out)
}

/// Pure branch-and-bound proof from a branch-and-cut proof of a pure integer
/// instance, given an oracle that proves each cut valid on its relaxation by
/// branch-and-bound. The oracle receives the relaxation and the cut and must
/// return a pure branch-and-bound proof of `<a,x> <= delta` over it.
///
/// Output size is the input size plus the sizes of the oracle proofs.
pub fn bc_proof_to_bb<F>(tree: &ProofTree, mut oracle: F) -> Result<ProofTree>
where
    F: FnMut(&crate::polyhedron::Polyhedron, &CuttingPlane) -> Result<ProofTree>,
{
    if tree.instance.n_cont() != 0 {
        return Err(Error::Precondition("instance has continuous variables".into()));
    }
    ensure_valid(tree)?;
    let src = normalize_cuts(tree);
    let mut out = ProofTree::new(src.instance.clone(), Mode::Unrestricted);
    let mut stack = vec![(src.root, out.root)];
    while let Some((s, d)) = stack.pop() {
        match &src.nodes[s].kind {
            NodeKind::Open => return Err(Error::Precondition(format!("node {s} is open"))),
            NodeKind::Leaf { reason } => relabel(&mut out, d, *reason)?,
            NodeKind::Branch { disjunction, children } => {
                let new = out.branch(d, disjunction.clone());
                stack.extend(children.iter().copied().zip(new));
            }
            NodeKind::Cut { cut, child } => {
                let relaxation = src.relaxation(s);
                let proof = oracle(&relaxation, cut)?;
                check_oracle_proof(&proof, &relaxation, cut)?;
                let (split, _) = cut_split(&src, s, cut)?;
                let new = out.branch(d, split);
                stack.push((*child, new[0]));
                transplant(&mut out, new[1], &proof)?;
            }
        }
    }
    let out = out.renumbered();
    ensure_valid(&out)?;
    Ok(out)
}

fn check_oracle_proof(
    proof: &ProofTree,
    relaxation: &crate::polyhedron::Polyhedron,
    cut: &CuttingPlane,
) -> Result<()> {
    if !proof.is_pure_branch_and_bound() {
        return Err(Error::ProofRejected {
            node: None,
            message: "oracle proof contains cuts".into(),
        });
    }
    let inst = &proof.instance;
    if inst.polyhedron != *relaxation
        || inst.objective != cut.halfspace.coeffs
        || inst.bound > cut.halfspace.rhs
    {
        return Err(Error::ProofRejected {
            node: None,
            message: "oracle proof is for a different relaxation or inequality".into(),
        });
    }
    ensure_valid(proof).map_err(|e| match e {
        Error::ProofRejected { node, message } => Error::ProofRejected {
            node,
            message: format!("oracle proof rejected: {message}"),
        },
        e => e,
    })
}

/// Copies the branching structure of `proof` below `at`; the copied leaves
/// sit inside `<a,x> >= floor(delta) + 1` and are LP-infeasible there.
fn transplant(out: &mut ProofTree, at: NodeId, proof: &ProofTree) -> Result<()> {
    let mut stack = vec![(proof.root, at)];
    while let Some((s, d)) = stack.pop() {
        match &proof.nodes[s].kind {
            NodeKind::Branch { disjunction, children } => {
                let new = out.branch(d, disjunction.clone());
                stack.extend(children.iter().copied().zip(new));
            }
            _ => {
                close_leaf(out, d)?;
                if !matches!(out.nodes[d].kind, NodeKind::Leaf { reason: LeafReason::LpInfeasible }) {
                    return Err(Error::ProofRejected {
                        node: Some(d),
                        message: "transplanted leaf is not LP-infeasible".into(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// The oracle used when cuts carry certificates: a one-cut proof of the cut
/// over its own relaxation, turned into branch-and-bound.
pub fn certificate_oracle(
    relaxation: &crate::polyhedron::Polyhedron,
    cut: &CuttingPlane,
) -> Result<ProofTree> {
    let inst = crate::polyhedron::Instance::new(
        relaxation.clone(),
        cut.halfspace.coeffs.clone(),
        cut.halfspace.rhs.clone(),
        crate::polyhedron::Goal::ProveBound,
    )?;
    let mut single = ProofTree::new(inst, Mode::Unrestricted);
    let child = single.cut(single.root, cut.clone());
    close_leaf(&mut single, child)?;
    cp_proof_to_bb(&single)
}
