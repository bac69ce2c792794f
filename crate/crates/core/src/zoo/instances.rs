//! Instance families.

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polyhedron::{Goal, Instance, LinearConstraint, Polyhedron};
use crate::rational::{self, frac, int, ints, Rational};

fn require_odd(n: usize) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("n must be odd and at least 3, got {n}")));
    }
    Ok(())
}

fn jeroslow_polytope(n: usize, relation: crate::polyhedron::Relation) -> Polyhedron {
    let mut cons = vec![LinearConstraint::new(vec![int(2); n], relation, int(n as i64))];
    cons.extend(Polyhedron::unit_box(n).constraints);
    Polyhedron {
        n_int: n,
        n_cont: 0,
        constraints: cons,
    }
}

/// `2 sum x <= n` over `[0,1]^n`, target `sum x <= floor(n/2)`.
pub fn jeroslow_inequality(n: usize) -> Result<Instance> {
    require_odd(n)?;
    Instance::new(
        jeroslow_polytope(n, crate::polyhedron::Relation::Le),
        vec![int(1); n],
        int((n / 2) as i64),
        Goal::ProveBound,
    )
}

/// `2 sum x = n` over `[0,1]^n`; has LP solutions but no integer point.
pub fn jeroslow_equality(n: usize) -> Result<Instance> {
    require_odd(n)?;
    Instance::new(
        jeroslow_polytope(n, crate::polyhedron::Relation::Eq),
        rational::zeros(n),
        int(0),
        Goal::ProveInfeasible,
    )
}

/// Jeroslow polytope with the objective on the first `ceil(n/2)` coordinates.
pub fn jeroslow_partial_objective(n: usize) -> Result<Instance> {
    require_odd(n)?;
    let half_up = n.div_ceil(2);
    let objective = (0..n).map(|i| int((i < half_up) as i64)).collect();
    Instance::new(
        jeroslow_polytope(n, crate::polyhedron::Relation::Le),
        objective,
        int((n / 2) as i64),
        Goal::ProveBound,
    )
}

fn cross(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    vec![
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn sub(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

/// Facets of a full-dimensional polytope in `R^3` given by its vertices,
/// as primitive `<=` constraints in sorted order.
pub fn facets_from_vertices_3d(points: &[Vec<Rational>]) -> Result<Vec<LinearConstraint>> {
    if points.iter().any(|p| p.len() != 3) {
        return Err(Error::Dimension("points must lie in R^3".into()));
    }
    let m = points.len();
    let mut facets = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let normal = cross(&sub(&points[j], &points[i]), &sub(&points[k], &points[i]));
                if normal.iter().all(|v| v.is_zero()) {
                    continue;
                }
                let rhs = rational::dot(&normal, &points[i]);
                let sides: Vec<Rational> = points
                    .iter()
                    .map(|p| rational::dot(&normal, p) - &rhs)
                    .collect();
                let (neg, pos) = (
                    sides.iter().any(|s| s.is_negative()),
                    sides.iter().any(|s| s.is_positive()),
                );
                let c = match (neg, pos) {
                    (_, false) => LinearConstraint::le(normal, rhs),
                    (false, true) => {
                        LinearConstraint::le(normal.iter().map(|v| -v).collect(), -rhs)
                    }
                    (true, true) => continue,
                };
                let c = c.primitive();
                if !facets.contains(&c) {
                    facets.push(c);
                }
            }
        }
    }
    facets.sort_by(|a: &LinearConstraint, b| (&a.coeffs, &a.rhs).cmp(&(&b.coeffs, &b.rhs)));
    Ok(facets)
}

pub fn cks_vertices(h: i64) -> Vec<Vec<Rational>> {
    vec![
        ints(&[0, 0, 0]),
        ints(&[2, 0, 0]),
        ints(&[0, 2, 0]),
        vec![frac(1, 2), frac(1, 2), int(h)],
    ]
}

/// Tetrahedron `conv{(0,0,0),(2,0,0),(0,2,0),(1/2,1/2,h)}` with target
/// `x_3 <= 0`. `height_integer` decides whether `x_3` is an integer variable.
pub fn cks_tetrahedron_with(h: i64, height_integer: bool) -> Result<Instance> {
    if h < 1 {
        return Err(Error::InvalidArgument(format!("h must be at least 1, got {h}")));
    }
    let facets = facets_from_vertices_3d(&cks_vertices(h))?;
    let (n_int, n_cont) = if height_integer { (3, 0) } else { (2, 1) };
    Instance::new(
        Polyhedron::new(n_int, n_cont, facets)?,
        ints(&[0, 0, 1]),
        int(0),
        Goal::ProveBound,
    )
}

pub fn cks_tetrahedron(h: i64) -> Result<Instance> {
    cks_tetrahedron_with(h, true)
}

/// `T = conv{(0,0),(1,0),(1/2,h)}` with target `x_2 <= 0`.
pub fn triangle_t(h: i64) -> Result<Instance> {
    if h < 1 {
        return Err(Error::InvalidArgument(format!("h must be at least 1, got {h}")));
    }
    let cons = vec![
        LinearConstraint::ge(ints(&[0, 1]), int(0)),
        LinearConstraint::ge(ints(&[2 * h, -1]), int(0)),
        LinearConstraint::le(ints(&[2 * h, 1]), int(2 * h)),
    ];
    Instance::new(Polyhedron::new(2, 0, cons)?, ints(&[0, 1]), int(0), Goal::ProveBound)
}

/// Seeded random bounded instance: box `0 <= x_i <= u_i` plus `extra` rows
/// with coefficients in `[-coef, coef]`, each made feasible at a random box
/// point. The bound is a placeholder (0) and the goal is prove-bound; the
/// corpus is meant for LP-level tests.
pub fn random_bounded(seed: u64, n_int: usize, n_cont: usize, extra: usize, coef: i64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = n_int + n_cont;
    let mut cons = Vec::new();
    let mut anchor = Vec::with_capacity(dim);
    for i in 0..dim {
        let upper = rng.gen_range(1..=5);
        cons.push(LinearConstraint::unit(dim, i, crate::polyhedron::Relation::Ge, int(0)));
        cons.push(LinearConstraint::unit(dim, i, crate::polyhedron::Relation::Le, int(upper)));
        anchor.push(frac(rng.gen_range(0..=2 * upper), 2));
    }
    for _ in 0..extra {
        let coeffs: Vec<Rational> = (0..dim).map(|_| int(rng.gen_range(-coef..=coef))).collect();
        let rhs = rational::dot(&coeffs, &anchor) + int(rng.gen_range(0..=coef));
        cons.push(LinearConstraint::le(coeffs, rhs.ceil()));
    }
    let objective = (0..dim).map(|_| int(rng.gen_range(-coef..=coef))).collect();
    Instance {
        polyhedron: Polyhedron {
            n_int,
            n_cont,
            constraints: cons,
        },
        objective,
        bound: int(0),
        goal: Goal::ProveBound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{enumerate_vertices, solve_lp};

    fn zero_one_points(n: usize) -> Vec<Vec<Rational>> {
        (0..1u32 << n)
            .map(|mask| (0..n).map(|i| int(((mask >> i) & 1) as i64)).collect())
            .collect()
    }

    #[test]
    fn jeroslow_values() {
        let inst = jeroslow_inequality(5).unwrap();
        let lp = solve_lp(&inst.polyhedron, &inst.objective).unwrap();
        assert_eq!(lp.value(), Some(&frac(5, 2)));
        assert_eq!(inst.bound, int(2));
        let feasible: Vec<_> = zero_one_points(3)
            .into_iter()
            .filter(|p| jeroslow_inequality(3).unwrap().polyhedron.contains(p))
            .collect();
        assert_eq!(feasible.len(), 4);
        assert!(jeroslow_inequality(4).is_err());
    }

    #[test]
    fn jeroslow_equality_parity() {
        let inst = jeroslow_equality(3).unwrap();
        assert!(inst.polyhedron.contains(&[frac(1, 2), frac(1, 2), frac(1, 2)]));
        assert!(zero_one_points(3).iter().all(|p| !inst.polyhedron.contains(p)));
    }

    #[test]
    fn partial_objective_values() {
        let inst = jeroslow_partial_objective(5).unwrap();
        let lp = solve_lp(&inst.polyhedron, &inst.objective).unwrap();
        assert_eq!(lp.value(), Some(&frac(5, 2)));
        let fixed = inst
            .polyhedron
            .with_constraints(&[LinearConstraint::le(ints(&[1, 0, 0, 0, 0]), int(0))]);
        assert_eq!(solve_lp(&fixed, &inst.objective).unwrap().value(), Some(&int(2)));
    }

    #[test]
    fn cks_facets() {
        let h = 4;
        let inst = cks_tetrahedron(h).unwrap();
        assert_eq!(inst.polyhedron.constraints.len(), 4);
        let expected = [
            LinearConstraint::le(ints(&[0, 0, -1]), int(0)),
            LinearConstraint::le(ints(&[-2 * h, 0, 1]), int(0)),
            LinearConstraint::le(ints(&[0, -2 * h, 1]), int(0)),
            LinearConstraint::le(ints(&[h, h, 1]), int(2 * h)),
        ];
        for c in &expected {
            assert!(inst.polyhedron.constraints.contains(c), "missing {c}");
        }
        // Every vertex is tight on exactly three facets.
        for v in cks_vertices(h) {
            let tight = inst
                .polyhedron
                .constraints
                .iter()
                .filter(|c| c.lhs(&v) == c.rhs)
                .count();
            assert_eq!(tight, 3);
            assert!(inst.polyhedron.contains(&v));
        }
        let mut verts = enumerate_vertices(&inst.polyhedron).unwrap();
        verts.sort();
        let mut want = cks_vertices(h);
        want.sort();
        assert_eq!(verts, want);
    }

    #[test]
    fn cks_integer_points_lie_in_the_base() {
        let inst = cks_tetrahedron(3).unwrap();
        for x in -1..=3 {
            for y in -1..=3 {
                for z in -1..=4 {
                    let p = ints(&[x, y, z]);
                    if inst.polyhedron.contains(&p) {
                        assert_eq!(z, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_vertices() {
        let inst = triangle_t(4).unwrap();
        let v = enumerate_vertices(&inst.polyhedron).unwrap();
        assert_eq!(v, vec![ints(&[0, 0]), vec![frac(1, 2), int(4)], ints(&[1, 0])]);
    }

    #[test]
    fn random_corpus_is_feasible_and_deterministic() {
        for seed in 0..20 {
            let a = random_bounded(seed, 2, 1, 3, 5);
            assert_eq!(a, random_bounded(seed, 2, 1, 3, 5));
            let lp = solve_lp(&a.polyhedron, &a.objective).unwrap();
            assert!(lp.optimum().is_some());
        }
    }
}
