use crate::cuts::CuttingPlane;
use crate::disjunction::Disjunction;
use crate::lp::LpResult;
use crate::polyhedron::{Instance, LinearConstraint, Polyhedron};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LeafReason {
    LpInfeasible,
    BoundCertified,
    IntegralOptimum,
}

impl LeafReason {
    pub fn name(self) -> &'static str {
        match self {
            LeafReason::LpInfeasible => "lp-infeasible",
            LeafReason::BoundCertified => "bound-certified",
            LeafReason::IntegralOptimum => "integral-optimum",
        }
    }

    pub fn from_name(s: &str) -> Option<LeafReason> {
        match s {
            "lp-infeasible" => Some(LeafReason::LpInfeasible),
            "bound-certified" => Some(LeafReason::BoundCertified),
            "integral-optimum" => Some(LeafReason::IntegralOptimum),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    /// Not processed yet. Only partial trees (budget exhaustion) carry these.
    Open,
    Branch {
        disjunction: Disjunction,
        children: Vec<NodeId>,
    },
    Cut {
        cut: CuttingPlane,
        child: NodeId,
    },
    Leaf {
        reason: LeafReason,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Every branch or cut must exclude the node's LP optimum.
    Restricted,
    Unrestricted,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Restricted => "restricted",
            Mode::Unrestricted => "unrestricted",
        }
    }

    pub fn from_name(s: &str) -> Option<Mode> {
        match s {
            "restricted" => Some(Mode::Restricted),
            "unrestricted" => Some(Mode::Unrestricted),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    /// Constraints added on top of the parent's relaxation.
    pub added: Vec<LinearConstraint>,
    pub kind: NodeKind,
    pub cached_lp: Option<LpResult>,
}

/// A branch-and-cut proof. Node ids are indices into `nodes`; the root is
/// node 0 and its relaxation is the instance polyhedron itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub instance: Instance,
    pub nodes: Vec<ProofNode>,
    pub root: NodeId,
    pub mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct TreeStats {
    pub size: usize,
    pub depth: usize,
    pub leaf_count: usize,
    pub max_sparsity: usize,
    pub cut_count: usize,
    pub branch_count: usize,
}

impl ProofTree {
    pub fn new(instance: Instance, mode: Mode) -> ProofTree {
        ProofTree {
            instance,
            nodes: vec![ProofNode {
                id: 0,
                parent: None,
                added: Vec::new(),
                kind: NodeKind::Open,
                cached_lp: None,
            }],
            root: 0,
            mode,
        }
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> &ProofNode {
        &self.nodes[id]
    }

    fn push(&mut self, parent: NodeId, added: Vec<LinearConstraint>) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(ProofNode {
            id,
            parent: Some(parent),
            added,
            kind: NodeKind::Open,
            cached_lp: None,
        });
        id
    }

    /// Turns an open node into a branch node with one open child per term.
    pub fn branch(&mut self, id: NodeId, disjunction: Disjunction) -> Vec<NodeId> {
        let children: Vec<NodeId> = disjunction
            .terms
            .iter()
            .map(|term| self.push(id, term.clone()))
            .collect();
        self.nodes[id].kind = NodeKind::Branch {
            disjunction,
            children: children.clone(),
        };
        children
    }

    /// Turns an open node into a cut node with one open child.
    pub fn cut(&mut self, id: NodeId, cut: CuttingPlane) -> NodeId {
        let child = self.push(id, vec![cut.halfspace.clone()]);
        self.nodes[id].kind = NodeKind::Cut { cut, child };
        child
    }

    pub fn leaf(&mut self, id: NodeId, reason: LeafReason) {
        self.nodes[id].kind = NodeKind::Leaf { reason };
    }

    pub fn children(&self, id: NodeId) -> Vec<NodeId> {
        match &self.nodes[id].kind {
            NodeKind::Branch { children, .. } => children.clone(),
            NodeKind::Cut { child, .. } => vec![*child],
            _ => Vec::new(),
        }
    }

    /// Root-to-node path, root first.
    pub fn path(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn depth_of(&self, id: NodeId) -> usize {
        self.path(id).len() - 1
    }

    /// The relaxation at a node: the instance constraints followed by every
    /// delta on the path, in root-to-node order.
    pub fn relaxation(&self, id: NodeId) -> Polyhedron {
        let path = self.path(id);
        self.instance
            .polyhedron
            .with_constraints(path.iter().flat_map(|&p| self.nodes[p].added.iter()))
    }

    /// Number of `<=`-oriented rows contributed by the path deltas.
    pub fn oriented_delta_len(&self, id: NodeId) -> usize {
        self.path(id)
            .iter()
            .flat_map(|&p| self.nodes[p].added.iter())
            .map(|c| c.oriented_len())
            .sum()
    }

    pub fn open_nodes(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Open))
            .map(|n| n.id)
            .collect()
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Leaf { .. }))
            .map(|n| n.id)
            .collect()
    }

    pub fn is_pure_branch_and_bound(&self) -> bool {
        !self
            .nodes
            .iter()
            .any(|n| matches!(n.kind, NodeKind::Cut { .. }))
    }

    pub fn is_pure_cutting_plane(&self) -> bool {
        !self
            .nodes
            .iter()
            .any(|n| matches!(n.kind, NodeKind::Branch { .. }))
    }

    pub fn stats(&self) -> TreeStats {
        let mut stats = TreeStats {
            size: self.size(),
            ..TreeStats::default()
        };
        for node in &self.nodes {
            stats.depth = stats.depth.max(self.depth_of(node.id));
            match &node.kind {
                NodeKind::Leaf { .. } => stats.leaf_count += 1,
                NodeKind::Branch { disjunction, .. } => {
                    stats.branch_count += 1;
                    stats.max_sparsity = stats.max_sparsity.max(disjunction.sparsity());
                }
                NodeKind::Cut { cut, .. } => {
                    stats.cut_count += 1;
                    stats.max_sparsity =
                        stats.max_sparsity.max(cut.halfspace.primitive().sparsity());
                }
                NodeKind::Open => {}
            }
        }
        stats
    }

    /// Copies the subtree of `other` rooted at `from` below the open node
    /// `at` of `self`; `at` takes over the kind of `from`. Deltas are copied
    /// verbatim, so certificates stay valid only if the relaxation at `at`
    /// matches the one at `from` row for row.
    pub fn graft(&mut self, at: NodeId, other: &ProofTree, from: NodeId) {
        let mut stack = vec![(at, from)];
        while let Some((dst, src)) = stack.pop() {
            match &other.nodes[src].kind {
                NodeKind::Branch { disjunction, children } => {
                    let mut new_children = Vec::with_capacity(children.len());
                    for &c in children {
                        let id = self.push(dst, other.nodes[c].added.clone());
                        new_children.push(id);
                        stack.push((id, c));
                    }
                    self.nodes[dst].kind = NodeKind::Branch {
                        disjunction: disjunction.clone(),
                        children: new_children,
                    };
                }
                NodeKind::Cut { cut, child } => {
                    let id = self.push(dst, other.nodes[*child].added.clone());
                    stack.push((id, *child));
                    self.nodes[dst].kind = NodeKind::Cut {
                        cut: cut.clone(),
                        child: id,
                    };
                }
                kind => self.nodes[dst].kind = kind.clone(),
            }
        }
    }

    /// Renumbers nodes in depth-first preorder (children in order). Proofs
    /// built by transforms are normalized this way before they are returned.
    pub fn renumbered(&self) -> ProofTree {
        let mut order = Vec::with_capacity(self.size());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            order.push(id);
            let mut ch = self.children(id);
            ch.reverse();
            stack.extend(ch);
        }
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        for (i, &old) in order.iter().enumerate() {
            new_id[old] = i;
        }
        let nodes = order
            .iter()
            .enumerate()
            .map(|(i, &old)| {
                let n = &self.nodes[old];
                let kind = match &n.kind {
                    NodeKind::Branch { disjunction, children } => NodeKind::Branch {
                        disjunction: disjunction.clone(),
                        children: children.iter().map(|&c| new_id[c]).collect(),
                    },
                    NodeKind::Cut { cut, child } => NodeKind::Cut {
                        cut: cut.clone(),
                        child: new_id[*child],
                    },
                    k => k.clone(),
                };
                ProofNode {
                    id: i,
                    parent: n.parent.map(|p| new_id[p]),
                    added: n.added.clone(),
                    kind,
                    cached_lp: n.cached_lp.clone(),
                }
            })
            .collect();
        ProofTree {
            instance: self.instance.clone(),
            nodes,
            root: 0,
            mode: self.mode,
        }
    }
}
