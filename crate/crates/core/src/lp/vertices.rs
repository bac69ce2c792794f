use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::polyhedron::Polyhedron;
use crate::rational::{self, Rational};

use super::linalg::solve_square;
use super::simplex::{solve_lp, LpResult};

/// Largest number of constraint subsets `enumerate_vertices` will try.
pub const DEFAULT_VERTEX_BUDGET: u64 = 2_000_000;

pub fn enumerate_vertices(p: &Polyhedron) -> Result<Vec<Vec<Rational>>> {
    enumerate_vertices_with_budget(p, DEFAULT_VERTEX_BUDGET)
}

/// Vertex set of a bounded polyhedron by brute force over every subset of
/// `dim` constraints. Returned sorted and deduplicated.
pub fn enumerate_vertices_with_budget(p: &Polyhedron, budget: u64) -> Result<Vec<Vec<Rational>>> {
    let dim = p.dim();
    let m = p.constraints.len();
    let subsets = rational::binomial(m as u64, dim as u64);
    if subsets > BigInt::from(budget) {
        return Err(Error::BudgetExceeded(format!(
            "C({m}, {dim}) = {subsets} constraint subsets exceeds budget {budget}"
        )));
    }
    for j in 0..dim {
        for sign in [1, -1] {
            let mut dir = rational::zeros(dim);
            dir[j] = rational::int(sign);
            match solve_lp(p, &dir)? {
                LpResult::Infeasible(_) => return Ok(Vec::new()),
                LpResult::Unbounded => return Err(Error::Unbounded),
                LpResult::Optimal(_) => {}
            }
        }
    }
    if dim == 0 {
        return Ok(vec![Vec::new()]);
    }
    let mut found = BTreeSet::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    if m < dim {
        return Ok(Vec::new());
    }
    loop {
        let a: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&i| p.constraints[i].coeffs.clone())
            .collect();
        let b: Vec<Rational> = subset.iter().map(|&i| p.constraints[i].rhs.clone()).collect();
        if let Some(x) = solve_square(&a, &b) {
            if p.contains(&x) {
                found.insert(x);
            }
        }
        if !next_combination(&mut subset, m) {
            break;
        }
    }
    Ok(found.into_iter().collect())
}

fn next_combination(subset: &mut [usize], m: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < m - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::LinearConstraint;
    use crate::rational::{frac, int, ints};

    #[test]
    fn unit_square() {
        let v = enumerate_vertices(&Polyhedron::unit_box(2)).unwrap();
        assert_eq!(
            v,
            vec![ints(&[0, 0]), ints(&[0, 1]), ints(&[1, 0]), ints(&[1, 1])]
        );
    }

    #[test]
    fn skinny_triangle_from_facets() {
        // conv{(0,0),(1,0),(1/2,4)}: x2 >= 0, 8 x1 - x2 >= 0, 8 x1 + x2 <= 8.
        let p = Polyhedron::new(
            2,
            0,
            vec![
                LinearConstraint::ge(ints(&[0, 1]), int(0)),
                LinearConstraint::ge(ints(&[8, -1]), int(0)),
                LinearConstraint::le(ints(&[8, 1]), int(8)),
            ],
        )
        .unwrap();
        let v = enumerate_vertices(&p).unwrap();
        assert_eq!(
            v,
            vec![ints(&[0, 0]), vec![frac(1, 2), int(4)], ints(&[1, 0])]
        );
        // Containment cross-check: midpoints are inside, a point past a vertex is not.
        assert!(p.contains(&[frac(1, 2), int(2)]));
        assert!(!p.contains(&[frac(1, 2), frac(9, 2)]));
    }

    #[test]
    fn errors() {
        let half = Polyhedron::new(1, 0, vec![LinearConstraint::ge(ints(&[1]), int(0))]).unwrap();
        assert!(matches!(enumerate_vertices(&half), Err(Error::Unbounded)));
        assert!(matches!(
            enumerate_vertices_with_budget(&Polyhedron::unit_box(4), 10),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn empty_polyhedron_has_no_vertices() {
        let p = Polyhedron::unit_box(2).with_constraints(&[LinearConstraint::ge(ints(&[1, 1]), int(3))]);
        assert!(enumerate_vertices(&p).unwrap().is_empty());
    }
}
