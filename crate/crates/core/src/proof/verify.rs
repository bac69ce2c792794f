//! Proof checking. Structural conditions are checked first; the node-local
//! conditions (one LP solve per node) then run in parallel.

use std::fmt;

use rayon::prelude::*;

use crate::cuts::verify_cut;
use crate::lp::{check_dual_certificate, check_farkas_ray, solve_lp, LpResult};
use crate::polyhedron::Goal;
use crate::rational;

use super::tree::{LeafReason, Mode, NodeId, NodeKind, ProofTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub node: NodeId,
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: {}: {}", self.node, self.code, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub failures: Vec<Failure>,
    pub checked_nodes: usize,
}

impl VerifyReport {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

fn fail(node: NodeId, code: &'static str, message: impl Into<String>) -> Failure {
    Failure {
        node,
        code,
        message: message.into(),
    }
}

fn check_structure(tree: &ProofTree) -> Vec<Failure> {
    let mut out = Vec::new();
    if tree.nodes.is_empty() {
        out.push(fail(0, "structure", "tree has no nodes"));
        return out;
    }
    if tree.root >= tree.nodes.len() || tree.nodes[tree.root].parent.is_some() {
        out.push(fail(tree.root, "structure", "root is missing or has a parent"));
        return out;
    }
    if !tree.nodes[tree.root].added.is_empty() {
        out.push(fail(tree.root, "structure", "root must not add constraints"));
    }
    for (i, node) in tree.nodes.iter().enumerate() {
        if node.id != i {
            out.push(fail(i, "structure", format!("node stored at {i} has id {}", node.id)));
        }
    }
    let dim = tree.instance.dim();
    let mut seen = vec![false; tree.nodes.len()];
    let mut stack = vec![tree.root];
    seen[tree.root] = true;
    while let Some(id) = stack.pop() {
        let node = &tree.nodes[id];
        if let Some(c) = node.added.iter().find(|c| c.dim() != dim) {
            out.push(fail(id, "structure", format!("added constraint has dimension {}", c.dim())));
        }
        for c in tree.children(id) {
            if c >= tree.nodes.len() {
                out.push(fail(id, "structure", format!("child {c} does not exist")));
                continue;
            }
            if tree.nodes[c].parent != Some(id) {
                out.push(fail(c, "structure", format!("parent pointer does not name {id}")));
            }
            if seen[c] {
                out.push(fail(c, "structure", "node reached twice"));
                continue;
            }
            seen[c] = true;
            stack.push(c);
        }
    }
    for (i, s) in seen.iter().enumerate() {
        if !s {
            out.push(fail(i, "structure", "node is not reachable from the root"));
        }
    }
    out
}

fn check_node(tree: &ProofTree, id: NodeId) -> Option<Failure> {
    let inst = &tree.instance;
    let node = &tree.nodes[id];
    let relaxation = tree.relaxation(id);
    let lp = match solve_lp(&relaxation, &inst.objective) {
        Ok(lp) => lp,
        Err(e) => return Some(fail(id, "lp-error", e.to_string())),
    };
    let optimum_point = lp.point().map(|p| p.to_vec());

    match &node.kind {
        NodeKind::Open => Some(fail(id, "open-node", "node was never processed")),
        NodeKind::Leaf { reason } => {
            if inst.goal == Goal::ProveInfeasible && *reason != LeafReason::LpInfeasible {
                return Some(fail(
                    id,
                    "goal-mismatch",
                    "infeasibility proofs need lp-infeasible leaves only",
                ));
            }
            match (reason, &lp) {
                (LeafReason::LpInfeasible, LpResult::Infeasible(ray)) => {
                    if check_farkas_ray(&relaxation, ray) {
                        None
                    } else {
                        Some(fail(id, "certificate", "Farkas ray does not verify"))
                    }
                }
                (LeafReason::LpInfeasible, _) => {
                    Some(fail(id, "leaf-not-infeasible", "relaxation is feasible"))
                }
                (_, LpResult::Infeasible(_)) => None,
                (_, LpResult::Unbounded) => {
                    Some(fail(id, "unbounded", "relaxation is unbounded in the objective"))
                }
                (reason, LpResult::Optimal(opt)) => {
                    if !check_dual_certificate(&relaxation, &inst.objective, opt) {
                        return Some(fail(id, "certificate", "LP dual certificate does not verify"));
                    }
                    let integral = opt.point[..inst.n_int()].iter().all(|v| v.is_integer());
                    if opt.value > inst.bound {
                        if integral {
                            return Some(fail(
                                id,
                                "instance-invalid",
                                format!(
                                    "integral LP optimum with value {} exceeds the bound {}",
                                    rational::format(&opt.value),
                                    rational::format(&inst.bound)
                                ),
                            ));
                        }
                        return Some(fail(
                            id,
                            "leaf-bound-exceeded",
                            format!(
                                "LP value {} exceeds the bound {}",
                                rational::format(&opt.value),
                                rational::format(&inst.bound)
                            ),
                        ));
                    }
                    if *reason == LeafReason::IntegralOptimum && !integral {
                        return Some(fail(id, "leaf-not-integral", "LP optimum is fractional"));
                    }
                    None
                }
            }
        }
        NodeKind::Branch { disjunction, children } => {
            if disjunction.n_int != inst.n_int() || disjunction.n_cont != inst.n_cont() {
                return Some(fail(id, "bad-disjunction", "disjunction dimension mismatch"));
            }
            if let Err(m) = disjunction.check() {
                return Some(fail(id, "bad-disjunction", m));
            }
            if children.len() != disjunction.arity() {
                return Some(fail(
                    id,
                    "branch-children",
                    format!("{} children for {} terms", children.len(), disjunction.arity()),
                ));
            }
            for (t, &c) in children.iter().enumerate() {
                if tree.nodes[c].added != disjunction.terms[t] {
                    return Some(fail(
                        c,
                        "branch-children",
                        format!("child does not add term {t} of its parent's disjunction"),
                    ));
                }
            }
            if tree.mode == Mode::Restricted {
                match &optimum_point {
                    None => return Some(fail(id, "no-lp-optimum", "restricted node has no LP optimum")),
                    Some(x) if disjunction.contains(x) => {
                        return Some(fail(id, "not-separating", "disjunction keeps the LP optimum"))
                    }
                    _ => {}
                }
            }
            None
        }
        NodeKind::Cut { cut, child } => {
            if let Err(r) = verify_cut(&relaxation, cut) {
                return Some(fail(id, r.code(), r.to_string()));
            }
            if tree.nodes[*child].added != [cut.halfspace.clone()] {
                return Some(fail(*child, "cut-child", "child does not add exactly the cut"));
            }
            if tree.mode == Mode::Restricted {
                match &optimum_point {
                    None => return Some(fail(id, "no-lp-optimum", "restricted node has no LP optimum")),
                    Some(x) if !cut.separates(x) => {
                        return Some(fail(id, "not-separating", "cut keeps the LP optimum"))
                    }
                    _ => {}
                }
            }
            None
        }
    }
}

/// Checks every proof condition; failures are ordered by node id.
pub fn verify_proof(tree: &ProofTree) -> VerifyReport {
    let structural = check_structure(tree);
    if !structural.is_empty() {
        return VerifyReport {
            failures: structural,
            checked_nodes: 0,
        };
    }
    let failures: Vec<Failure> = (0..tree.nodes.len())
        .into_par_iter()
        .filter_map(|id| check_node(tree, id))
        .collect();
    VerifyReport {
        failures,
        checked_nodes: tree.nodes.len(),
    }
}

/// Convenience wrapper turning a rejection into an error.
pub fn ensure_valid(tree: &ProofTree) -> crate::Result<()> {
    let report = verify_proof(tree);
    match report.first_failure() {
        None => Ok(()),
        Some(f) => Err(crate::Error::ProofRejected {
            node: Some(f.node),
            message: format!("{}: {}", f.code, f.message),
        }),
    }
}
