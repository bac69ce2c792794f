//! Coordinate permutations that fix an instance.

use std::collections::HashMap;

use crate::polyhedron::{Instance, LinearConstraint};

/// Largest integer dimension for which the permutation group is enumerated.
pub const MAX_SYMMETRY_DIM: usize = 7;

fn constraint_key(c: &LinearConstraint, perm: &[usize]) -> String {
    let mut coeffs = c.coeffs.clone();
    for (i, &j) in perm.iter().enumerate() {
        coeffs[j] = c.coeffs[i].clone();
    }
    LinearConstraint::new(coeffs, c.relation, c.rhs.clone()).to_string()
}

fn instance_key(inst: &Instance, perm: &[usize]) -> (Vec<String>, Vec<String>) {
    let mut rows: Vec<String> =
        inst.polyhedron.constraints.iter().map(|c| constraint_key(c, perm)).collect();
    rows.sort();
    let mut obj = inst.objective.clone();
    for (i, &j) in perm.iter().enumerate() {
        obj[j] = inst.objective[i].clone();
    }
    (rows, obj.iter().map(|v| v.to_string()).collect())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Permutations `perm` of the integer coordinates (old `i` goes to
/// `perm[i]`, continuous coordinates fixed) under which the constraint
/// multiset and the objective are unchanged. Only the identity above
/// [`MAX_SYMMETRY_DIM`].
pub fn automorphisms(inst: &Instance) -> Vec<Vec<usize>> {
    let (n, dim) = (inst.n_int(), inst.dim());
    let identity: Vec<usize> = (0..dim).collect();
    if n > MAX_SYMMETRY_DIM {
        return vec![identity];
    }
    let base = instance_key(inst, &identity);
    permutations(n)
        .into_iter()
        .map(|p| p.into_iter().chain(n..dim).collect::<Vec<_>>())
        .filter(|p| instance_key(inst, p) == base)
        .collect()
}

/// Indices of `splits` that are the first of their orbit.
pub(crate) fn orbit_representatives(splits: &[(Vec<i64>, i64)], group: &[Vec<usize>]) -> Vec<usize> {
    let index: HashMap<&(Vec<i64>, i64), usize> =
        splits.iter().enumerate().map(|(i, s)| (s, i)).collect();
    (0..splits.len())
        .filter(|&i| {
            let (pi, pi0) = &splits[i];
            group.iter().all(|perm| {
                let mut img = vec![0; pi.len()];
                for (k, &j) in perm.iter().enumerate().take(pi.len()) {
                    img[j] = pi[k];
                }
                let mut key = (img, *pi0);
                if key.0.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                    key = (key.0.iter().map(|c| -c).collect(), -key.1 - 1);
                }
                index.get(&key).is_none_or(|&j| j >= i)
            })
        })
        .collect()
}
