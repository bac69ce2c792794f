//! Exact checks for LP duality and Farkas certificates.

use num_traits::{Signed, Zero};

use crate::polyhedron::{OrientedRow, Polyhedron, Relation};
use crate::rational::{self, Rational};

use super::simplex::{FarkasRay, LpOptimum};

fn sign_ok(relation: Relation, y: &Rational) -> bool {
    match relation {
        Relation::Le => !y.is_negative(),
        Relation::Ge => !y.is_positive(),
        Relation::Eq => true,
    }
}

/// `sum_i y_i * (a_i, b_i)` over the constraints of `p`.
pub fn combine_constraints(p: &Polyhedron, y: &[Rational]) -> (Vec<Rational>, Rational) {
    let mut coeffs = rational::zeros(p.dim());
    let mut rhs = Rational::zero();
    for (c, m) in p.constraints.iter().zip(y) {
        if m.is_zero() {
            continue;
        }
        for (acc, a) in coeffs.iter_mut().zip(&c.coeffs) {
            if !a.is_zero() {
                *acc += m * a;
            }
        }
        rhs += m * &c.rhs;
    }
    (coeffs, rhs)
}

/// `sum_i lambda_i * row_i` over `<=`-oriented rows.
pub fn combine_rows(rows: &[OrientedRow], lambda: &[Rational], dim: usize) -> (Vec<Rational>, Rational) {
    let mut coeffs = rational::zeros(dim);
    let mut rhs = Rational::zero();
    for (row, m) in rows.iter().zip(lambda) {
        if m.is_zero() {
            continue;
        }
        for (acc, a) in coeffs.iter_mut().zip(&row.coeffs) {
            if !a.is_zero() {
                *acc += m * a;
            }
        }
        rhs += m * &row.rhs;
    }
    (coeffs, rhs)
}

/// Recomputes strong duality for an optimal solve: sign-feasible duals whose
/// combination reproduces the objective and whose rhs equals the value, and a
/// primal point that satisfies every constraint at that value.
pub fn check_dual_certificate(p: &Polyhedron, objective: &[Rational], opt: &LpOptimum) -> bool {
    if opt.duals.len() != p.constraints.len() || opt.point.len() != p.dim() {
        return false;
    }
    if !p
        .constraints
        .iter()
        .zip(&opt.duals)
        .all(|(c, y)| sign_ok(c.relation, y))
    {
        return false;
    }
    let (coeffs, rhs) = combine_constraints(p, &opt.duals);
    coeffs == objective
        && rhs == opt.value
        && p.contains(&opt.point)
        && rational::dot(objective, &opt.point) == opt.value
}

/// True iff `ray` combines the constraints into `0 <= negative`.
pub fn check_farkas_ray(p: &Polyhedron, ray: &FarkasRay) -> bool {
    if ray.multipliers.len() != p.constraints.len() {
        return false;
    }
    if !p
        .constraints
        .iter()
        .zip(&ray.multipliers)
        .all(|(c, y)| sign_ok(c.relation, y))
    {
        return false;
    }
    let (coeffs, rhs) = combine_constraints(p, &ray.multipliers);
    coeffs.iter().all(|c| c.is_zero()) && rhs.is_negative()
}

/// Converts per-constraint multipliers (LP sign convention) into nonnegative
/// multipliers over `p.oriented_rows()`.
pub fn to_oriented_multipliers(p: &Polyhedron, y: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(p.oriented_len());
    for (c, m) in p.constraints.iter().zip(y) {
        match c.relation {
            Relation::Le => out.push(m.clone()),
            Relation::Ge => out.push(-m),
            Relation::Eq => {
                if m.is_negative() {
                    out.push(Rational::zero());
                    out.push(-m);
                } else {
                    out.push(m.clone());
                    out.push(Rational::zero());
                }
            }
        }
    }
    out
}
