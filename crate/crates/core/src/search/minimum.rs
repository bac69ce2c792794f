//! Minimum branch-and-bound trees by iterative deepening on size.
//!
//! A search node is the set of split terms added to the root relaxation
//! (in restricted mode the ordered path, since the verifier's LP optimum
//! depends on row order). `best(node, cap)` returns the exact minimum when it
//! is at most `cap`, otherwise a lower bound above `cap`; both are memoized.
//! Splits one of whose terms already holds on the node are never branched
//! on: that child has the node's own feasible region, so such a branch cannot
//! be minimal.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::disjunction::{split_i64, Disjunction};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpResult};
use crate::polyhedron::{Instance, LinearConstraint, Polyhedron};
use crate::proof::{leaf_reason, LeafReason, Mode, NodeId, ProofTree};
use crate::rational::{self, Rational};

use super::space::{enumerate_split_data, SearchSpace};
use super::symmetry::{automorphisms, orbit_representatives};

/// `(split index, side)`; side 0 is `<= pi0`, side 1 is `>= pi0 + 1`.
type Term = (u32, u8);
type Key = Vec<Term>;

#[derive(Clone, Debug)]
enum Info {
    Leaf(LeafReason),
    Open(Vec<Rational>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bound {
    Unknown,
    AtLeast(usize),
    /// Minimum size and the split chosen at this node (`None` for a leaf).
    Exact(usize, Option<u32>),
}

#[derive(Clone, Debug)]
struct Entry {
    info: Arc<Info>,
    bound: Bound,
}

enum Outcome {
    Found(usize),
    Fail(usize),
}

/// Minimum found within the space.
#[derive(Clone, Debug)]
pub struct Minimum {
    pub size: usize,
    pub witness: ProofTree,
    /// Distinct relaxations solved.
    pub evaluated: usize,
}

/// What is known when the search stops early.
#[derive(Clone, Debug)]
pub struct Bracket {
    /// No tree in the space has fewer nodes.
    pub lower: usize,
    /// Size of the best tree found, if any.
    pub upper: Option<usize>,
    pub witness: Option<ProofTree>,
    pub evaluated: usize,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Exact(Minimum),
    Bracket(Bracket),
}

impl SearchOutcome {
    pub fn exact_size(&self) -> Option<usize> {
        match self {
            SearchOutcome::Exact(m) => Some(m.size),
            SearchOutcome::Bracket(_) => None,
        }
    }

    pub fn lower(&self) -> usize {
        match self {
            SearchOutcome::Exact(m) => m.size,
            SearchOutcome::Bracket(b) => b.lower,
        }
    }

    pub fn upper(&self) -> Option<usize> {
        match self {
            SearchOutcome::Exact(m) => Some(m.size),
            SearchOutcome::Bracket(b) => b.upper,
        }
    }

    pub fn witness(&self) -> Option<&ProofTree> {
        match self {
            SearchOutcome::Exact(m) => Some(&m.witness),
            SearchOutcome::Bracket(b) => b.witness.as_ref(),
        }
    }
}

struct Search<'a> {
    inst: &'a Instance,
    splits: Vec<Disjunction>,
    data: Vec<(Vec<i64>, i64)>,
    memo: Mutex<HashMap<Key, Entry>>,
    evaluated: AtomicUsize,
    budget: usize,
    depth_budget: Option<usize>,
    mode: Mode,
}

fn odd_at_least(v: usize) -> usize {
    if v.is_multiple_of(2) {
        v.saturating_add(1)
    } else {
        v
    }
}

fn variable_bounds(inst: &Instance) -> Result<Vec<(Rational, Rational)>> {
    let n = inst.dim();
    (0..n)
        .map(|j| {
            let mut dir = rational::zeros(n);
            dir[j] = Rational::from_integer(1.into());
            let max = solve_lp(&inst.polyhedron, &dir)?;
            dir[j] = Rational::from_integer((-1).into());
            let min = solve_lp(&inst.polyhedron, &dir)?;
            match (max, min) {
                (LpResult::Optimal(hi), LpResult::Optimal(lo)) => Ok((-lo.value, hi.value)),
                (LpResult::Infeasible(_), _) | (_, LpResult::Infeasible(_)) => {
                    Ok((Rational::from_integer(0.into()), Rational::from_integer(0.into())))
                }
                _ => Err(Error::Precondition(format!("variable {j} is unbounded"))),
            }
        })
        .collect()
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, space: &SearchSpace) -> Result<Search<'a>> {
        if inst.n_cont() != 0 {
            return Err(Error::Precondition("search needs a pure integer instance".into()));
        }
        let bounds = variable_bounds(inst)?;
        let data = enumerate_split_data(inst.n_int(), space, &bounds)?;
        let splits = data
            .iter()
            .map(|(pi, pi0)| split_i64(pi, *pi0, inst.n_int(), 0))
            .collect::<Result<Vec<_>>>()?;
        Ok(Search {
            inst,
            splits,
            data,
            memo: Mutex::new(HashMap::new()),
            evaluated: AtomicUsize::new(0),
            budget: space.node_budget,
            depth_budget: space.depth_budget,
            mode: space.mode,
        })
    }

    fn term(&self, (i, side): Term) -> &LinearConstraint {
        &self.splits[i as usize].terms[side as usize][0]
    }

    fn relaxation(&self, key: &[Term]) -> Polyhedron {
        self.inst.polyhedron.with_constraints(key.iter().map(|&t| self.term(t)))
    }

    fn child(&self, key: &[Term], term: Term) -> Key {
        let mut k = key.to_vec();
        match self.mode {
            Mode::Restricted => k.push(term),
            Mode::Unrestricted => {
                if let Err(pos) = k.binary_search(&term) {
                    k.insert(pos, term);
                }
            }
        }
        k
    }

    fn entry(&self, key: &Key) -> Result<Entry> {
        if let Some(e) = self.memo.lock().unwrap().get(key) {
            return Ok(e.clone());
        }
        if self.evaluated.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded(format!(
                "search evaluated {} relaxations",
                self.budget
            )));
        }
        let lp = solve_lp(&self.relaxation(key), &self.inst.objective)?;
        let info = match leaf_reason(self.inst, &lp)? {
            Some(reason) => Info::Leaf(reason),
            None => match lp {
                LpResult::Optimal(opt) => Info::Open(opt.point),
                _ => return Err(Error::Precondition("relaxation is unbounded".into())),
            },
        };
        let bound = match info {
            Info::Leaf(_) => Bound::Exact(1, None),
            Info::Open(_) => Bound::Unknown,
        };
        let e = Entry {
            info: Arc::new(info),
            bound,
        };
        Ok(self.memo.lock().unwrap().entry(key.clone()).or_insert(e).clone())
    }

    fn record(&self, key: &Key, bound: Bound) {
        let mut memo = self.memo.lock().unwrap();
        if let Some(e) = memo.get_mut(key) {
            e.bound = match (e.bound, bound) {
                (Bound::Exact(..), _) => e.bound,
                (_, Bound::Exact(..)) => bound,
                (Bound::AtLeast(a), Bound::AtLeast(b)) => Bound::AtLeast(a.max(b)),
                _ => bound,
            };
        }
    }

    /// Splits allowed at a node with LP optimum `point`.
    fn candidates(&self, key: &[Term], point: &[Rational]) -> Vec<u32> {
        (0..self.splits.len() as u32)
            .filter(|&i| {
                // Already on the path: one side would repeat the node.
                key.iter().all(|&(j, _)| j != i)
                    && (self.mode == Mode::Unrestricted || !self.splits[i as usize].contains(point))
            })
            .collect()
    }

    fn is_infeasible(&self, key: &Key) -> Result<bool> {
        Ok(matches!(*self.entry(key)?.info, Info::Leaf(LeafReason::LpInfeasible)))
    }

    /// Whether term `side` of split `i` already holds on the node's
    /// relaxation, so that branching reproduces the node.
    fn implied(&self, key: &Key, i: u32, side: u8) -> Result<bool> {
        let term = self.term((i, side));
        let dir: Vec<Rational> = match term.relation {
            crate::polyhedron::Relation::Ge => term.coeffs.iter().map(|v| -v).collect(),
            _ => term.coeffs.clone(),
        };
        let rhs = match term.relation {
            crate::polyhedron::Relation::Ge => -&term.rhs,
            _ => term.rhs.clone(),
        };
        Ok(match solve_lp(&self.relaxation(key), &dir)? {
            LpResult::Optimal(opt) => opt.value <= rhs,
            LpResult::Infeasible(_) => true,
            LpResult::Unbounded => false,
        })
    }

    /// Smallest tree rooted at `key` that branches on split `i`, if at most
    /// `limit`; otherwise a lower bound above `limit` (`None` if `i` is
    /// useless here).
    fn try_split(&self, key: &Key, i: u32, limit: usize) -> Result<Option<Outcome>> {
        let (k0, k1) = (self.child(key, (i, 0)), self.child(key, (i, 1)));
        if (self.is_infeasible(&k1)? && self.implied(key, i, 0)?)
            || (self.is_infeasible(&k0)? && self.implied(key, i, 1)?)
        {
            return Ok(None);
        }
        if limit < 3 {
            return Ok(Some(Outcome::Fail(3)));
        }
        let s0 = match self.best(&k0, limit - 2)? {
            Outcome::Found(s) => s,
            Outcome::Fail(l) => return Ok(Some(Outcome::Fail(l.saturating_add(2)))),
        };
        Ok(Some(match self.best(&k1, limit - 1 - s0)? {
            Outcome::Found(s1) => Outcome::Found(1 + s0 + s1),
            Outcome::Fail(l) => Outcome::Fail(l.saturating_add(1 + s0)),
        }))
    }

    fn best(&self, key: &Key, cap: usize) -> Result<Outcome> {
        let e = self.entry(key)?;
        let point = match (&*e.info, e.bound) {
            (_, Bound::Exact(s, _)) => {
                return Ok(if s <= cap { Outcome::Found(s) } else { Outcome::Fail(s) });
            }
            (_, Bound::AtLeast(l)) if l > cap => return Ok(Outcome::Fail(l)),
            (Info::Open(p), _) => p.clone(),
            (Info::Leaf(_), _) => unreachable!("leaves are exact"),
        };
        if cap < 3 || self.depth_budget.is_some_and(|d| key.len() >= d) {
            let lb = if cap < 3 { 3 } else { usize::MAX };
            self.record(key, Bound::AtLeast(lb));
            return Ok(Outcome::Fail(lb));
        }
        let mut found: Option<(usize, u32)> = None;
        let mut lower = usize::MAX;
        for i in self.candidates(key, &point) {
            let limit = found.map_or(cap, |(s, _)| s - 2);
            if limit < 3 {
                break;
            }
            match self.try_split(key, i, limit)? {
                Some(Outcome::Found(s)) => found = Some((s, i)),
                Some(Outcome::Fail(l)) => lower = lower.min(l),
                None => {}
            }
        }
        Ok(match found {
            Some((s, i)) => {
                self.record(key, Bound::Exact(s, Some(i)));
                Outcome::Found(s)
            }
            None => {
                let lb = odd_at_least(lower);
                self.record(key, Bound::AtLeast(lb));
                Outcome::Fail(lb)
            }
        })
    }

    /// Root level: splits tried in parallel, one orbit representative each.
    fn best_root(&self, roots: &[u32], cap: usize) -> Result<Outcome> {
        let key: Key = Vec::new();
        let e = self.entry(&key)?;
        match (&*e.info, e.bound) {
            (_, Bound::Exact(s, _)) if s <= cap => return Ok(Outcome::Found(s)),
            (_, Bound::AtLeast(l)) if l > cap => return Ok(Outcome::Fail(l)),
            _ => {}
        }
        if cap < 3 {
            self.record(&key, Bound::AtLeast(3));
            return Ok(Outcome::Fail(3));
        }
        let results: Vec<(u32, Option<Outcome>)> = roots
            .par_iter()
            .map(|&i| self.try_split(&key, i, cap).map(|o| (i, o)))
            .collect::<Result<_>>()?;
        let mut found: Option<(usize, u32)> = None;
        let mut lower = usize::MAX;
        for (i, o) in results {
            match o {
                Some(Outcome::Found(s)) if found.is_none_or(|(b, _)| s < b) => found = Some((s, i)),
                Some(Outcome::Fail(l)) => lower = lower.min(l),
                _ => {}
            }
        }
        Ok(match found {
            Some((s, i)) => {
                self.record(&key, Bound::Exact(s, Some(i)));
                Outcome::Found(s)
            }
            None => {
                let lb = odd_at_least(lower);
                self.record(&key, Bound::AtLeast(lb));
                Outcome::Fail(lb)
            }
        })
    }

    fn root_choices(&self, symmetry: bool) -> Result<Vec<u32>> {
        let e = self.entry(&Vec::new())?;
        let Info::Open(point) = &*e.info else {
            return Ok(Vec::new());
        };
        let all = self.candidates(&[], point);
        if !symmetry || self.mode == Mode::Restricted {
            return Ok(all);
        }
        let reps = orbit_representatives(&self.data, &automorphisms(self.inst));
        Ok(all.into_iter().filter(|i| reps.binary_search(&(*i as usize)).is_ok()).collect())
    }

    fn witness(&self) -> Result<ProofTree> {
        let mut tree = ProofTree::new(self.inst.clone(), self.mode);
        let memo = self.memo.lock().unwrap();
        let mut stack: Vec<(Key, NodeId)> = vec![(Vec::new(), tree.root)];
        while let Some((key, id)) = stack.pop() {
            let e = &memo[&key];
            match (&*e.info, e.bound) {
                (Info::Leaf(reason), _) => tree.leaf(id, *reason),
                (_, Bound::Exact(_, Some(i))) => {
                    let kids = tree.branch(id, self.splits[i as usize].clone());
                    stack.push((self.child(&key, (i, 0)), kids[0]));
                    stack.push((self.child(&key, (i, 1)), kids[1]));
                }
                _ => unreachable!("witness path is exact"),
            }
        }
        Ok(tree)
    }

    /// Greedy tree: first separating split at every node, for an upper bound.
    fn greedy(&self, node_limit: usize) -> Option<ProofTree> {
        let mut tree = ProofTree::new(self.inst.clone(), self.mode);
        let mut stack: Vec<(Key, NodeId)> = vec![(Vec::new(), tree.root)];
        while let Some((key, id)) = stack.pop() {
            if tree.size() > node_limit {
                return None;
            }
            let lp = solve_lp(&self.relaxation(&key), &self.inst.objective).ok()?;
            if let Some(reason) = leaf_reason(self.inst, &lp).ok()? {
                tree.leaf(id, reason);
                continue;
            }
            let point = lp.point()?.to_vec();
            let i = (0..self.splits.len() as u32).find(|&i| {
                key.iter().all(|&(j, _)| j != i) && !self.splits[i as usize].contains(&point)
            })?;
            let kids = tree.branch(id, self.splits[i as usize].clone());
            stack.push((self.child(&key, (i, 0)), kids[0]));
            stack.push((self.child(&key, (i, 1)), kids[1]));
        }
        Some(tree)
    }

    fn evaluated(&self) -> usize {
        self.evaluated.load(Ordering::Relaxed).min(self.budget)
    }

    fn run(&self, symmetry: bool, max_cap: Option<usize>) -> Result<SearchOutcome> {
        let roots = match self.root_choices(symmetry) {
            Ok(r) => r,
            Err(Error::BudgetExceeded(_)) => return Ok(self.bracket(1)),
            Err(e) => return Err(e),
        };
        let mut cap = 1;
        loop {
            if max_cap.is_some_and(|m| cap > m) {
                return Ok(self.bracket(cap));
            }
            match self.best_root(&roots, cap) {
                Ok(Outcome::Found(size)) => {
                    return Ok(SearchOutcome::Exact(Minimum {
                        size,
                        witness: self.witness()?,
                        evaluated: self.evaluated(),
                    }))
                }
                Ok(Outcome::Fail(usize::MAX)) => {
                    return Err(Error::Precondition(
                        "no branch-and-bound proof exists within the search space".into(),
                    ))
                }
                Ok(Outcome::Fail(lb)) => cap = odd_at_least(lb.max(cap + 2)),
                Err(Error::BudgetExceeded(_)) => return Ok(self.bracket(cap)),
                Err(e) => return Err(e),
            }
        }
    }

    /// Everything below `lower` has been excluded by exhaustion.
    fn bracket(&self, lower: usize) -> SearchOutcome {
        let witness = self.greedy(self.budget);
        SearchOutcome::Bracket(Bracket {
            lower,
            upper: witness.as_ref().map(|t| t.size()),
            witness,
            evaluated: self.evaluated(),
        })
    }
}

fn check_instance(inst: &Instance) -> Result<()> {
    if inst.n_cont() != 0 {
        return Err(Error::Precondition("search needs a pure integer instance".into()));
    }
    Ok(())
}

/// Exact minimum branch-and-bound proof size over the split family of
/// `space`, or a bracket when the budget runs out.
pub fn min_bb_tree_size(inst: &Instance, space: &SearchSpace) -> Result<SearchOutcome> {
    check_instance(inst)?;
    Search::new(inst, space)?.run(space.symmetry, None)
}

/// Exhausts all sizes up to `cap`; exact if the minimum is at most `cap`.
pub fn min_proof_bracket(inst: &Instance, space: &SearchSpace, cap: usize) -> Result<SearchOutcome> {
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    check_instance(inst)?;
    Search::new(inst, space)?.run(space.symmetry, Some(cap))
}
