//! The counting arguments behind the Jeroslow lower bounds, made exact.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::disjunction::Disjunction;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpResult};
use crate::polyhedron::{LinearConstraint, Polyhedron};
use crate::proof::{NodeId, NodeKind, ProofTree};
use crate::rational::{self, Rational};
use crate::search::SearchSpace;

/// Largest dimension for which 0/1 point sets are enumerated.
pub const MAX_POINT_DIM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitTag {
    /// Both sides keep integer points of the parent.
    True,
    False,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeClass {
    /// 0/1 points of the node's relaxation.
    pub integer_points: usize,
    /// Tags of the disjunctions on the root-to-node path, in order.
    pub tags: Vec<SplitTag>,
    /// Union of the supports of the true splits on the path, sorted.
    pub generation_set: Vec<usize>,
}

impl NodeClass {
    pub fn true_splits(&self) -> usize {
        self.tags.iter().filter(|t| **t == SplitTag::True).count()
    }

    /// Generation of a node that still holds an integer point.
    pub fn generation(&self) -> Option<usize> {
        (self.integer_points > 0).then(|| self.true_splits())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitClassification {
    /// Indexed by node id.
    pub nodes: Vec<NodeClass>,
}

fn bit_point(mask: u32, n: usize) -> Vec<Rational> {
    (0..n).map(|j| Rational::from_integer(((mask >> j) & 1).into())).collect()
}

fn satisfies_all(cons: &[LinearConstraint], mask: u32, n: usize) -> bool {
    let p = bit_point(mask, n);
    cons.iter().all(|c| c.is_satisfied_by(&p))
}

/// Errors unless every integer point of `p` is a 0/1 point.
fn check_binary(p: &Polyhedron) -> Result<()> {
    let n = p.dim();
    if p.n_cont != 0 {
        return Err(Error::Precondition("instance has continuous variables".into()));
    }
    if n > MAX_POINT_DIM {
        return Err(Error::BudgetExceeded(format!("2^{n} points exceeds the enumeration guard")));
    }
    for j in 0..n {
        for sign in [1, -1] {
            let mut dir = rational::zeros(n);
            dir[j] = Rational::from_integer(sign.into());
            let limit = Rational::from_integer(if sign == 1 { 2 } else { 1 }.into());
            match solve_lp(p, &dir)? {
                LpResult::Optimal(opt) if opt.value < limit => {}
                LpResult::Infeasible(_) => return Ok(()),
                _ => {
                    return Err(Error::Precondition(format!(
                        "variable {j} is not bounded by the 0/1 box"
                    )))
                }
            }
        }
    }
    Ok(())
}

fn split_support(d: &Disjunction, node: NodeId) -> Result<Vec<usize>> {
    let (pi, _) = d.split_data().ok_or_else(|| {
        Error::Precondition(format!("node {node} branches on a non-split disjunction"))
    })?;
    Ok((0..pi.len()).filter(|&j| !pi[j].is_zero()).collect())
}

/// Tags every path disjunction as a true or false split and builds the
/// generation variable sets, from explicit 0/1 point sets.
pub fn classify_splits(tree: &ProofTree) -> Result<SplitClassification> {
    let root = &tree.instance.polyhedron;
    check_binary(root)?;
    let n = root.dim();
    let points: Vec<u32> = (0..1u32 << n)
        .into_par_iter()
        .filter(|&m| satisfies_all(&root.constraints, m, n))
        .collect();
    let mut nodes = vec![
        NodeClass {
            integer_points: 0,
            tags: Vec::new(),
            generation_set: Vec::new(),
        };
        tree.nodes.len()
    ];
    let mut stack = vec![(tree.root, points)];
    while let Some((id, pts)) = stack.pop() {
        nodes[id].integer_points = pts.len();
        match &tree.nodes[id].kind {
            NodeKind::Branch { disjunction, children } => {
                let support = split_support(disjunction, id)?;
                let parts: Vec<Vec<u32>> = disjunction
                    .terms
                    .iter()
                    .map(|t| pts.iter().copied().filter(|&m| satisfies_all(t, m, n)).collect())
                    .collect();
                let tag = if parts.iter().all(|p| !p.is_empty()) {
                    SplitTag::True
                } else {
                    SplitTag::False
                };
                for (&c, part) in children.iter().zip(parts) {
                    let mut class = nodes[id].clone();
                    class.tags.push(tag);
                    if tag == SplitTag::True {
                        class.generation_set.extend(&support);
                        class.generation_set.sort_unstable();
                        class.generation_set.dedup();
                    }
                    nodes[c] = class;
                    stack.push((c, part));
                }
            }
            NodeKind::Cut { .. } => {
                return Err(Error::Precondition(format!("node {id} is a cut node")));
            }
            NodeKind::Leaf { .. } | NodeKind::Open => {}
        }
    }
    Ok(SplitClassification { nodes })
}

/// Nodes holding an integer point and derived by exactly `m` true splits.
pub fn count_generation_nodes(class: &SplitClassification, m: usize) -> usize {
    class.nodes.iter().filter(|c| c.generation() == Some(m)).count()
}

/// Nodes with an integer point and `|I| <= floor(n/2) - s` whose LP value
/// differs from the root's. Empty on every proof of the Jeroslow instance
/// built from splits of sparsity at most `s`.
pub fn lp_value_lemma_violations(
    tree: &ProofTree,
    class: &SplitClassification,
    s: usize,
) -> Result<Vec<NodeId>> {
    let n = tree.instance.n_int();
    let Some(limit) = (n / 2).checked_sub(s) else {
        return Ok(Vec::new());
    };
    let root_value = solve_lp(&tree.instance.polyhedron, &tree.instance.objective)?
        .value()
        .cloned();
    let mut out = Vec::new();
    for (id, c) in class.nodes.iter().enumerate() {
        if c.integer_points == 0 || c.generation_set.len() > limit {
            continue;
        }
        let v = solve_lp(&tree.relaxation(id), &tree.instance.objective)?;
        if v.value().cloned() != root_value {
            out.push(id);
        }
    }
    Ok(out)
}

/// Optimal LP vertices of the Jeroslow polytope: `floor(n/2)` ones, one
/// coordinate at 1/2, zeros elsewhere. Each is `(half, ones)`.
fn optimal_vertices(n: usize) -> impl Iterator<Item = (usize, Vec<usize>)> {
    let k = n / 2;
    (0..n).flat_map(move |half| {
        let rest: Vec<usize> = (0..n).filter(|&j| j != half).collect();
        crate::search::combinations_of(&rest, k).into_iter().map(move |ones| (half, ones))
    })
}

/// `n * C(n-1, floor(n/2))`.
pub fn optimal_vertex_count(n: usize) -> BigInt {
    BigInt::from(n) * rational::binomial(n as u64 - 1, n as u64 / 2)
}

/// `|V(D)|`: optimal LP vertices of the Jeroslow polytope lying strictly
/// between the two sides of the split, i.e. with `<a,x> = b + 1/2`.
pub fn count_vertices_in_split(n: usize, d: &Disjunction) -> Result<usize> {
    let (a, b) = d
        .split_data()
        .ok_or_else(|| Error::InvalidArgument("not a split disjunction".into()))?;
    if a.len() != n || d.n_cont != 0 {
        return Err(Error::Dimension(format!("split is not over {n} integer coordinates")));
    }
    let target = 2 * b + 1;
    Ok(optimal_vertices(n)
        .filter(|(half, ones)| {
            let twice: BigInt = ones.iter().map(|&j| &a[j] * 2).sum::<BigInt>() + &a[*half];
            twice == target
        })
        .count())
}

/// `p(t) = t C(t-1, floor(t/2)) C(n-t, floor(n/2) - floor(t/2))`.
pub fn p_bound(n: usize, t: usize) -> Result<BigInt> {
    if t == 0 || t > n / 2 {
        return Err(Error::InvalidArgument(format!("t = {t} outside 1..={}", n / 2)));
    }
    let (n, t) = (n as u64, t as u64);
    Ok(BigInt::from(t)
        * rational::binomial(t - 1, t / 2)
        * rational::binomial(n - t, n / 2 - t / 2))
}

/// Number of 0/1 solutions of `sum w_j x_j = target`.
pub fn sperner_count(w: &[i64], target: i64) -> Result<u64> {
    if w.contains(&0) {
        return Err(Error::InvalidArgument("weights must be nonzero".into()));
    }
    if w.len() > 30 {
        return Err(Error::BudgetExceeded(format!("2^{} assignments", w.len())));
    }
    Ok((0..1u64 << w.len())
        .filter(|m| {
            (0..w.len()).filter(|j| (m >> j) & 1 == 1).map(|j| w[j]).sum::<i64>() == target
        })
        .count() as u64)
}

/// Whether a cut valid for the Jeroslow polytope's 0/1 points is valid for
/// all of `{0,1}^n`. Checks the `2^|S|` patterns on the support `S`.
pub fn sparse_cut_is_trivial(n: usize, cut: &LinearConstraint) -> Result<bool> {
    if cut.dim() != n {
        return Err(Error::Dimension(format!("cut is not over {n} coordinates")));
    }
    let support = cut.support();
    if n > MAX_POINT_DIM || support.len() > MAX_POINT_DIM {
        return Err(Error::BudgetExceeded("too many points to enumerate".into()));
    }
    let k = n / 2;
    let valid_on_polytope = (0..1u32 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .all(|m| cut.is_satisfied_by(&bit_point(m, n)));
    if !valid_on_polytope {
        return Err(Error::InvalidArgument(
            "cut is not valid for the Jeroslow polytope's integer points".into(),
        ));
    }
    Ok((0..1u32 << support.len()).all(|pattern| {
        let mut p = rational::zeros(n);
        for (bit, &j) in support.iter().enumerate() {
            if (pattern >> bit) & 1 == 1 {
                p[j] = Rational::from_integer(1.into());
            }
        }
        cut.is_satisfied_by(&p)
    }))
}

/// One row of the Sperner sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpernerRow {
    pub k: usize,
    pub vectors: usize,
    pub max_count: u64,
    pub bound: u64,
    pub pass: bool,
}

fn weight_vectors(k: usize, c: i64) -> Vec<Vec<i64>> {
    let values: Vec<i64> = (-c..=c).filter(|&v| v != 0).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                values.iter().map(move |&v| {
                    let mut w = w.clone();
                    w.push(v);
                    w
                })
            })
            .collect();
    }
    out
}

/// Max over `w in ({-c..c}\{0})^k` and every reachable `W` of the number of
/// 0/1 solutions, against `C(k, floor(k/2))`.
pub fn sperner_sweep(k: usize, c: i64) -> Result<SpernerRow> {
    let vectors = weight_vectors(k, c);
    let max_count = vectors
        .par_iter()
        .map(|w| {
            let mut counts = std::collections::HashMap::new();
            for m in 0..1u64 << k {
                let s: i64 = (0..k).filter(|j| (m >> j) & 1 == 1).map(|j| w[j]).sum();
                *counts.entry(s).or_insert(0u64) += 1;
            }
            counts.into_values().max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    let bound = rational::binomial(k as u64, k as u64 / 2)
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("k too large".into()))?;
    Ok(SpernerRow {
        k,
        vectors: vectors.len(),
        max_count,
        bound,
        pass: max_count <= bound,
    })
}

/// One row of the `V(D)` sweep: splits of support size `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSplitRow {
    pub n: usize,
    pub t: usize,
    pub splits: usize,
    pub max_observed: usize,
    pub p_bound: BigInt,
    pub pass: bool,
}

/// `max |V(D)|` over splits with `t` nonzeros, `|a_i| <= c` and `b` in
/// `rhs`, for each `1 <= t <= floor(n/2)`.
pub fn vertex_split_sweep(n: usize, c: u64, rhs: (i64, i64)) -> Result<Vec<VertexSplitRow>> {
    let vertices: Vec<(usize, Vec<usize>)> = optimal_vertices(n).collect();
    (1..=n / 2)
        .map(|t| {
            let space = SearchSpace::new(t, c).with_rhs_range(rhs.0, rhs.1);
            let data = crate::search::split_data(n, &space)?;
            let data: Vec<_> = data
                .into_iter()
                .filter(|(pi, _)| pi.iter().filter(|&&v| v != 0).count() == t)
                .collect();
            let max_observed = data
                .par_iter()
                .map(|(a, b)| {
                    vertices
                        .iter()
                        .filter(|(half, ones)| {
                            2 * ones.iter().map(|&j| a[j]).sum::<i64>() + a[*half] == 2 * b + 1
                        })
                        .count()
                })
                .max()
                .unwrap_or(0);
            let bound = p_bound(n, t)?;
            Ok(VertexSplitRow {
                n,
                t,
                splits: data.len(),
                max_observed,
                pass: BigInt::from(max_observed) <= bound,
                p_bound: bound,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialitySweep {
    pub n: usize,
    pub candidates: usize,
    pub valid: usize,
    pub trivial: usize,
}

impl TrivialitySweep {
    pub fn pass(&self) -> bool {
        self.valid == self.trivial
    }
}

/// Every cut `<a,x> <= r` with support at most `max_support`, nonzero
/// `|a_i| <= c` and `r` in `rhs` that is valid for the Jeroslow polytope's
/// 0/1 points, tested for validity on the whole cube.
pub fn sparse_cut_sweep(n: usize, max_support: usize, c: i64, rhs: (i64, i64)) -> Result<TrivialitySweep> {
    if n > MAX_POINT_DIM {
        return Err(Error::BudgetExceeded(format!("2^{n} points")));
    }
    let k = n / 2;
    let mut patterns: Vec<(Vec<usize>, Vec<i64>)> = Vec::new();
    for size in 1..=max_support.min(n) {
        for support in crate::search::combinations_of(&(0..n).collect::<Vec<_>>(), size) {
            for w in weight_vectors(size, c) {
                patterns.push((support.clone(), w));
            }
        }
    }
    let counts: Vec<(usize, usize, usize)> = patterns
        .par_iter()
        .map(|(support, w)| {
            // Integer pre-filter: valid iff r is at least the max of <a,x> over
            // 0/1 points with at most floor(n/2) ones on the support.
            let max_poly = (0..1u32 << support.len())
                .filter(|m| m.count_ones() as usize <= k)
                .map(|m| (0..support.len()).filter(|b| (m >> b) & 1 == 1).map(|b| w[b]).sum::<i64>())
                .max()
                .unwrap_or(0);
            let total = (rhs.1 - rhs.0 + 1).max(0) as usize;
            let mut valid = 0;
            let mut trivial = 0;
            for r in max_poly.max(rhs.0)..=rhs.1 {
                valid += 1;
                if sparse_cut_is_trivial(n, &sparse_cut(n, support, w, r))? {
                    trivial += 1;
                }
            }
            Ok((total, valid, trivial))
        })
        .collect::<Result<_>>()?;
    Ok(TrivialitySweep {
        n,
        candidates: counts.iter().map(|c| c.0).sum(),
        valid: counts.iter().map(|c| c.1).sum(),
        trivial: counts.iter().map(|c| c.2).sum(),
    })
}

/// `sum_{j in support} w_j x_j <= r` in dimension `n`.
pub fn sparse_cut(n: usize, support: &[usize], w: &[i64], r: i64) -> LinearConstraint {
    let mut coeffs = rational::zeros(n);
    for (&j, &v) in support.iter().zip(w) {
        coeffs[j] = Rational::from_integer(v.into());
    }
    LinearConstraint::le(coeffs, Rational::from_integer(r.into()))
}
