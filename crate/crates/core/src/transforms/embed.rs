//! Moving instances and proofs between spaces: zero-fixed extra coordinates
//! and an explicit objective variable.
//!
//! Both lifts append rows after the instance's own constraints, so lifting a
//! proof inserts zero multipliers at that offset in every certificate and
//! remaps every constraint; projecting undoes it.

use num_traits::Zero;

use crate::cuts::{Certificate, CuttingPlane};
use crate::error::{Error, Result};
use crate::polyhedron::{Instance, LinearConstraint, Polyhedron};
use crate::proof::{NodeKind, ProofTree};
use crate::rational::{self, int};

/// Old coordinate `i` of an `(n, d)` space goes to `map[i]` in the
/// `(n + extra_int, d + extra_cont)` space.
fn embedding_map(n: usize, d: usize, extra_int: usize) -> Vec<usize> {
    (0..n).chain((0..d).map(|j| n + extra_int + j)).collect()
}

/// Appends `extra_int` integer and `extra_cont` continuous coordinates fixed
/// to zero by equality rows placed after the original constraints.
pub fn embed_instance(inst: &Instance, extra_int: usize, extra_cont: usize) -> Instance {
    let (n, d) = (inst.n_int(), inst.n_cont());
    let (n2, d2) = (n + extra_int, d + extra_cont);
    let dim = n2 + d2;
    let map = embedding_map(n, d, extra_int);
    let mut cons: Vec<LinearConstraint> =
        inst.polyhedron.constraints.iter().map(|c| c.remap(&map, dim)).collect();
    let fresh = (n..n2).chain(n2 + d..dim);
    for j in fresh {
        cons.push(LinearConstraint::unit(dim, j, crate::polyhedron::Relation::Eq, int(0)));
    }
    let mut objective = rational::zeros(dim);
    for (i, &j) in map.iter().enumerate() {
        objective[j] = inst.objective[i].clone();
    }
    Instance {
        polyhedron: Polyhedron {
            n_int: n2,
            n_cont: d2,
            constraints: cons,
        },
        objective,
        bound: inst.bound.clone(),
        goal: inst.goal,
    }
}

/// `X = {(x, t) : x in C, t = <c, x>}` with objective `t` and target
/// `t <= gamma`; `t` is a new continuous coordinate placed last.
pub fn add_objective_variable(inst: &Instance) -> Instance {
    let dim = inst.dim() + 1;
    let map: Vec<usize> = (0..inst.dim()).collect();
    let mut cons: Vec<LinearConstraint> =
        inst.polyhedron.constraints.iter().map(|c| c.remap(&map, dim)).collect();
    let mut row: Vec<_> = inst.objective.iter().map(|v| -v).collect();
    row.push(int(1));
    cons.push(LinearConstraint::eq(row, int(0)));
    let mut objective = rational::zeros(dim);
    objective[dim - 1] = int(1);
    Instance {
        polyhedron: Polyhedron {
            n_int: inst.n_int(),
            n_cont: inst.n_cont() + 1,
            constraints: cons,
        },
        objective,
        bound: inst.bound.clone(),
        goal: inst.goal,
    }
}

/// Rewrites every constraint, disjunction and certificate of `tree` for a
/// new instance.
fn rewrite(
    tree: &ProofTree,
    instance: Instance,
    constraint: impl Fn(&LinearConstraint) -> LinearConstraint,
    disjunction: impl Fn(&crate::disjunction::Disjunction) -> crate::disjunction::Disjunction,
    certificate: impl Fn(&mut CuttingPlane) -> Result<()>,
) -> Result<ProofTree> {
    let mut out = tree.clone();
    out.instance = instance;
    for node in &mut out.nodes {
        node.cached_lp = None;
        node.added = node.added.iter().map(&constraint).collect();
        match &mut node.kind {
            NodeKind::Branch { disjunction: d, .. } => *d = disjunction(d),
            NodeKind::Cut { cut, .. } => {
                cut.halfspace = constraint(&cut.halfspace);
                if let Certificate::Disjunctive { disjunction: d, .. } = &mut cut.certificate {
                    *d = disjunction(d);
                }
                certificate(cut)?;
            }
            _ => {}
        }
    }
    Ok(out)
}

fn drop_rows(cut: &mut CuttingPlane, at: usize, count: usize) -> Result<()> {
    let zero = |v: &Vec<crate::Rational>| v[at..at + count].iter().all(|m| m.is_zero());
    let ok = match &cut.certificate {
        Certificate::Cg { multipliers } => zero(multipliers),
        Certificate::Disjunctive { witnesses, .. } => {
            witnesses.iter().all(|w| zero(&w.multipliers))
        }
    };
    if !ok {
        return Err(Error::Precondition(
            "a certificate uses the rows that fix the embedded coordinates".into(),
        ));
    }
    cut.remove_rows(at, count);
    Ok(())
}

/// Carries a proof of `tree.instance` over to `embed_instance(..)` verbatim.
pub fn lift_embedded(tree: &ProofTree, extra_int: usize, extra_cont: usize) -> Result<ProofTree> {
    let inst = &tree.instance;
    let (n, d) = (inst.n_int(), inst.n_cont());
    let target = embed_instance(inst, extra_int, extra_cont);
    let dim = target.dim();
    let map = embedding_map(n, d, extra_int);
    let at = inst.polyhedron.oriented_len();
    let count = 2 * (extra_int + extra_cont);
    rewrite(
        tree,
        target,
        |c| c.remap(&map, dim),
        |dj| dj.remap(&map, n + extra_int, d + extra_cont),
        |cut| {
            cut.insert_zero_rows(at, count);
            Ok(())
        },
    )
}

/// Errors unless every constraint in the proof vanishes outside `keep`.
fn check_support(tree: &ProofTree, keep: &[usize]) -> Result<()> {
    let outside = |c: &LinearConstraint| {
        c.coeffs
            .iter()
            .enumerate()
            .any(|(j, v)| !v.is_zero() && !keep.contains(&j))
    };
    for node in &tree.nodes {
        let mut cons: Vec<&LinearConstraint> = node.added.iter().collect();
        match &node.kind {
            NodeKind::Branch { disjunction, .. } => cons.extend(disjunction.terms.iter().flatten()),
            NodeKind::Cut { cut, .. } => {
                cons.push(&cut.halfspace);
                if let Certificate::Disjunctive { disjunction, .. } = &cut.certificate {
                    cons.extend(disjunction.terms.iter().flatten());
                }
            }
            _ => {}
        }
        if cons.into_iter().any(outside) {
            return Err(Error::Precondition(format!(
                "node {} uses a coordinate that the projection drops",
                node.id
            )));
        }
    }
    Ok(())
}

/// Inverse of [`lift_embedded`] for proofs that never use the new
/// coordinates' fixing rows.
pub fn project_embedded(tree: &ProofTree, original: &Instance) -> Result<ProofTree> {
    let (n, d) = (original.n_int(), original.n_cont());
    let extra_int = tree.instance.n_int().checked_sub(n);
    let extra_cont = tree.instance.n_cont().checked_sub(d);
    let (Some(extra_int), Some(_extra_cont)) = (extra_int, extra_cont) else {
        return Err(Error::Dimension("proof lives in a smaller space".into()));
    };
    let keep = embedding_map(n, d, extra_int);
    check_support(tree, &keep)?;
    let at = original.polyhedron.oriented_len();
    let count = tree.instance.polyhedron.oriented_len() - at;
    rewrite(
        tree,
        original.clone(),
        |c| c.project(&keep),
        |dj| dj.project(&keep, n, d),
        |cut| drop_rows(cut, at, count),
    )
}

/// Carries a proof of `tree.instance` over to `add_objective_variable(..)`.
pub fn lift_objective_variable(tree: &ProofTree) -> Result<ProofTree> {
    let inst = &tree.instance;
    let target = add_objective_variable(inst);
    let dim = target.dim();
    let map: Vec<usize> = (0..inst.dim()).collect();
    let at = inst.polyhedron.oriented_len();
    rewrite(
        tree,
        target,
        |c| c.remap(&map, dim),
        |dj| dj.remap(&map, inst.n_int(), inst.n_cont() + 1),
        |cut| {
            cut.insert_zero_rows(at, 2);
            Ok(())
        },
    )
}

/// Inverse of [`lift_objective_variable`].
pub fn project_objective_variable(tree: &ProofTree, original: &Instance) -> Result<ProofTree> {
    if tree.instance.dim() != original.dim() + 1 {
        return Err(Error::Dimension("proof is not over the lifted space".into()));
    }
    let keep: Vec<usize> = (0..original.dim()).collect();
    check_support(tree, &keep)?;
    let at = original.polyhedron.oriented_len();
    rewrite(
        tree,
        original.clone(),
        |c| c.project(&keep),
        |dj| dj.project(&keep, original.n_int(), original.n_cont()),
        |cut| drop_rows(cut, at, 2),
    )
}
