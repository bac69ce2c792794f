//! A deterministic branch-and-cut driver. Each open relaxation is solved; it
//! becomes a leaf when the LP certifies the goal, otherwise the strategy
//! decides between cutting and branching.
//!
//! Leaves carry only statically checkable reasons. The running lower bound
//! of the textbook algorithm starts at the target bound, and an incumbent
//! above it would make the instance invalid, so pruning by incumbent adds
//! nothing beyond the `LP value <= bound` test.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use num_traits::Zero;

use crate::cuts::{cg_cut_along, generate_disjunctive_cut, CuttingPlane};
use crate::disjunction::{make_variable, Disjunction};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpResult};
use crate::polyhedron::{Goal, Instance, Polyhedron};
use crate::rational::{self, Rational};

use super::tree::{LeafReason, Mode, NodeId, NodeKind, ProofTree};

pub const DEFAULT_NODE_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeSelection {
    Dfs,
    Bfs,
    BestBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionRule {
    Branch,
    Cut,
    /// Cut while fewer than this many cuts sit on the path, then branch.
    CutRounds(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DisjunctionRule {
    /// Variable disjunction on the lowest-index fractional coordinate.
    FirstFractional,
    /// First disjunction of the list that excludes the LP optimum.
    Family(Vec<Disjunction>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutRule {
    /// Chvátal-Gomory cut along the objective, multipliers from the LP dual.
    CgObjective,
    /// Most violated disjunctive cut over the first separating disjunction.
    Disjunctive(Vec<Disjunction>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub node_selection: NodeSelection,
    pub action: ActionRule,
    pub disjunction: DisjunctionRule,
    pub cut: CutRule,
    pub budget: usize,
    pub mode: Mode,
}

impl Strategy {
    pub fn variable_branching() -> Strategy {
        Strategy {
            node_selection: NodeSelection::Dfs,
            action: ActionRule::Branch,
            disjunction: DisjunctionRule::FirstFractional,
            cut: CutRule::CgObjective,
            budget: DEFAULT_NODE_BUDGET,
            mode: Mode::Restricted,
        }
    }

    pub fn cg_objective() -> Strategy {
        Strategy {
            action: ActionRule::Cut,
            ..Strategy::variable_branching()
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Strategy {
        self.budget = budget;
        self
    }

    pub fn with_selection(mut self, selection: NodeSelection) -> Strategy {
        self.node_selection = selection;
        self
    }
}

/// Leaf status of a relaxation, if it has one. Integral optima above the
/// bound (or any integer point of an infeasibility instance) are reported as
/// an invalid instance.
pub fn leaf_reason(inst: &Instance, lp: &LpResult) -> Result<Option<LeafReason>> {
    match lp {
        LpResult::Infeasible(_) => Ok(Some(LeafReason::LpInfeasible)),
        LpResult::Unbounded => Ok(None),
        LpResult::Optimal(opt) => {
            let integral = opt.point[..inst.n_int()].iter().all(|v| v.is_integer());
            match inst.goal {
                Goal::ProveBound if opt.value <= inst.bound => Ok(Some(if integral {
                    LeafReason::IntegralOptimum
                } else {
                    LeafReason::BoundCertified
                })),
                _ if integral => Err(Error::InstanceInvalid(format!(
                    "integer point {:?} violates the goal",
                    opt.point.iter().map(rational::format).collect::<Vec<_>>()
                ))),
                _ => Ok(None),
            }
        }
    }
}

enum Frontier {
    Stack(Vec<NodeId>),
    Queue(VecDeque<NodeId>),
    Heap(BinaryHeap<(Rational, Reverse<NodeId>)>),
}

impl Frontier {
    fn new(selection: NodeSelection) -> Frontier {
        match selection {
            NodeSelection::Dfs => Frontier::Stack(Vec::new()),
            NodeSelection::Bfs => Frontier::Queue(VecDeque::new()),
            NodeSelection::BestBound => Frontier::Heap(BinaryHeap::new()),
        }
    }

    /// `children` in term order; DFS visits them in that order too.
    fn push_all(&mut self, children: &[NodeId], bound: &Rational) {
        match self {
            Frontier::Stack(s) => s.extend(children.iter().rev()),
            Frontier::Queue(q) => q.extend(children),
            Frontier::Heap(h) => h.extend(children.iter().map(|&c| (bound.clone(), Reverse(c)))),
        }
    }

    fn pop(&mut self) -> Option<NodeId> {
        match self {
            Frontier::Stack(s) => s.pop(),
            Frontier::Queue(q) => q.pop_front(),
            Frontier::Heap(h) => h.pop().map(|(_, Reverse(id))| id),
        }
    }
}

fn first_fractional(inst: &Instance, x: &[Rational]) -> Option<Disjunction> {
    let i = (0..inst.n_int()).find(|&i| !x[i].is_integer())?;
    make_variable(i, x[i].floor().to_integer(), inst.n_int(), inst.n_cont()).ok()
}

fn choose_disjunction(
    strategy: &Strategy,
    inst: &Instance,
    x: &[Rational],
) -> Option<Disjunction> {
    match &strategy.disjunction {
        DisjunctionRule::FirstFractional => first_fractional(inst, x),
        DisjunctionRule::Family(family) => family.iter().find(|d| !d.contains(x)).cloned(),
    }
}

fn choose_cut(
    strategy: &Strategy,
    inst: &Instance,
    relaxation: &Polyhedron,
    x: &[Rational],
) -> Result<Option<CuttingPlane>> {
    match &strategy.cut {
        CutRule::CgObjective => {
            let c = &inst.objective;
            if c[inst.n_int()..].iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
            let scale = rational::primitive_scale(c);
            let dir: Vec<Rational> = c.iter().map(|v| v * &scale).collect();
            cg_cut_along(relaxation, &dir)
        }
        CutRule::Disjunctive(family) => {
            for d in family.iter().filter(|d| !d.contains(x)) {
                if let Some(cut) = generate_disjunctive_cut(relaxation, d, x)? {
                    return Ok(Some(cut));
                }
            }
            Ok(None)
        }
    }
}

fn cuts_on_path(tree: &ProofTree, id: NodeId) -> usize {
    let path = tree.path(id);
    path[..path.len() - 1]
        .iter()
        .filter(|&&p| matches!(tree.nodes[p].kind, NodeKind::Cut { .. }))
        .count()
}

/// Processes every open node in the subtree of `start` until none is left.
pub fn expand(tree: &mut ProofTree, start: NodeId, strategy: &Strategy) -> Result<()> {
    let inst = tree.instance.clone();
    let mut frontier = Frontier::new(strategy.node_selection);
    frontier.push_all(&[start], &Rational::zero());
    while let Some(id) = frontier.pop() {
        if tree.size() > strategy.budget {
            return Err(Error::NodeBudget {
                budget: strategy.budget,
                partial: Box::new(tree.clone()),
            });
        }
        let relaxation = tree.relaxation(id);
        let lp = solve_lp(&relaxation, &inst.objective)?;
        tree.nodes[id].cached_lp = Some(lp.clone());
        if let Some(reason) = leaf_reason(&inst, &lp)? {
            tree.leaf(id, reason);
            continue;
        }
        let opt = match &lp {
            LpResult::Optimal(opt) => opt,
            _ => {
                return Err(Error::Strategy {
                    node: id,
                    message: "relaxation is unbounded in the objective".into(),
                })
            }
        };
        let want_cut = match strategy.action {
            ActionRule::Branch => false,
            ActionRule::Cut => true,
            ActionRule::CutRounds(k) => cuts_on_path(tree, id) < k,
        };
        let mut acted = false;
        if want_cut {
            let cut = choose_cut(strategy, &inst, &relaxation, &opt.point)?;
            match cut {
                Some(cut) if cut.separates(&opt.point) || strategy.mode == Mode::Unrestricted => {
                    let child = tree.cut(id, cut);
                    frontier.push_all(&[child], &opt.value);
                    acted = true;
                }
                _ if strategy.action == ActionRule::Cut => {
                    return Err(Error::Strategy {
                        node: id,
                        message: "cut rule produced no separating cut".into(),
                    })
                }
                _ => {}
            }
        }
        if !acted {
            let d = choose_disjunction(strategy, &inst, &opt.point).ok_or_else(|| Error::Strategy {
                node: id,
                message: "no disjunction excludes the LP optimum".into(),
            })?;
            let children = tree.branch(id, d);
            frontier.push_all(&children, &opt.value);
        }
    }
    Ok(())
}

/// Runs the driver from scratch; the tree's mode is the strategy's.
pub fn run_branch_and_cut(instance: &Instance, strategy: &Strategy) -> Result<ProofTree> {
    let mut tree = ProofTree::new(instance.clone(), strategy.mode);
    expand(&mut tree, 0, strategy)?;
    Ok(tree)
}
