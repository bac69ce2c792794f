//! Branch-and-cut proof trees, their verifier and a driver that builds them.

mod builders;
mod driver;
mod tree;
mod verify;

pub use builders::{build_single_cut_proof, build_theorem4_tree, close_leaf};
pub use driver::{
    expand, leaf_reason, run_branch_and_cut, ActionRule, CutRule, DisjunctionRule, NodeSelection,
    Strategy, DEFAULT_NODE_BUDGET,
};
pub use tree::{LeafReason, Mode, NodeId, NodeKind, ProofNode, ProofTree, TreeStats};
pub use verify::{ensure_valid, verify_proof, Failure, VerifyReport};

#[cfg(test)]
mod tests;
