//! Explicit proof constructions.

use crate::cuts::generate_cg_cut;
use crate::disjunction::make_variable;
use crate::error::{Error, Result};
use crate::lp::solve_lp;
use crate::polyhedron::Instance;
use crate::rational::Rational;
use crate::zoo::jeroslow_partial_objective;

use super::driver::leaf_reason;
use super::tree::{Mode, NodeId, ProofTree};

/// Closes an open node as a leaf using the LP; errors when the LP does not
/// certify anything.
pub fn close_leaf(tree: &mut ProofTree, id: NodeId) -> Result<()> {
    let lp = solve_lp(&tree.relaxation(id), &tree.instance.objective)?;
    let reason = leaf_reason(&tree.instance, &lp)?.ok_or_else(|| Error::Strategy {
        node: id,
        message: "node was expected to be a leaf".into(),
    })?;
    tree.leaf(id, reason);
    Ok(())
}

/// Branch on `x_1` and keep branching on `x_{j+1}` below the `x_j >= 1`
/// child. Every `<= 0` child is bound-certified (at most `floor(n/2)`
/// objective coordinates remain free) and the last `>= 1` child fixes
/// `ceil(n/2)` coordinates to one, which is LP-infeasible. `n + 2` nodes.
///
/// The root LP optimum may already be integral in `x_1`, so the tree is only
/// claimed in unrestricted mode.
pub fn build_theorem4_tree(n: usize) -> Result<ProofTree> {
    let inst = jeroslow_partial_objective(n)?;
    let mut tree = ProofTree::new(inst, Mode::Unrestricted);
    let mut cur = tree.root;
    for j in 0..n.div_ceil(2) {
        let d = make_variable(j, 0.into(), n, 0)?;
        let children = tree.branch(cur, d);
        close_leaf(&mut tree, children[0])?;
        cur = children[1];
    }
    close_leaf(&mut tree, cur)?;
    Ok(tree)
}

/// A single CG cut at the root followed by one leaf.
pub fn build_single_cut_proof(inst: &Instance, lambda: &[Rational]) -> Result<ProofTree> {
    let mut tree = ProofTree::new(inst.clone(), Mode::Restricted);
    let cut = generate_cg_cut(&inst.polyhedron, lambda)?;
    let child = tree.cut(tree.root, cut);
    close_leaf(&mut tree, child)?;
    Ok(tree)
}
