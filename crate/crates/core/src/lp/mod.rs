//! Exact linear programming: the simplex solver, its certificates, and a
//! brute-force vertex enumerator used as an independent oracle.

mod certificate;
mod linalg;
mod simplex;
mod vertices;

pub use certificate::{
    check_dual_certificate, check_farkas_ray, combine_constraints, combine_rows,
    to_oriented_multipliers,
};
pub use linalg::solve_square;
pub use simplex::{solve_lp, FarkasRay, LpOptimum, LpResult, LpStatus};
pub use vertices::{enumerate_vertices, enumerate_vertices_with_budget, DEFAULT_VERTEX_BUDGET};
