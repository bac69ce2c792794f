//! Exact-arithmetic laboratory for branch-and-bound, cutting-plane and
//! branch-and-cut proofs of linear integer programs.
//!
//! Everything is computed over arbitrary-precision rationals. Proofs are
//! trees of branch, cut and leaf nodes that [`proof::verify_proof`] checks
//! from their certificates alone.

pub mod cuts;
pub mod disjunction;
pub mod error;
pub mod experiments;
pub mod family;
pub mod io;
pub mod lp;
pub mod polyhedron;
pub mod proof;
pub mod rational;
pub mod search;
pub mod transforms;
pub mod zoo;

pub use cuts::{
    cg_cut_along, generate_cg_cut, generate_disjunctive_cut, verify_cut, Certificate,
    CutRejection, CuttingPlane, FarkasWitness,
};
pub use disjunction::{make_split, make_variable, Disjunction, Template};
pub use error::{Error, Result};
pub use lp::{enumerate_vertices, solve_lp, LpResult};
pub use polyhedron::{is_integral, Goal, Instance, LinearConstraint, Polyhedron, Relation};
pub use proof::{verify_proof, Mode, ProofTree, Strategy};
pub use rational::Rational;
