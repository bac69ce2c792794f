//! Composing two instances behind a binary selector `y`.
//!
//! Both instances are first given an objective variable `t` and embedded in
//! a common space `z = (x, u, t)` with `max(n_a, n_b)` integer and
//! `max(d_a, d_b)` continuous coordinates. The hull of `X_a x {0}` and
//! `X_b x {1}` is written with a continuous copy `w` of `z`:
//!
//! ```text
//!     A_a w       <= b_a (1 - y)
//!     A_b (z - w) <= b_b y
//!     0 <= y <= 1
//! ```
//!
//! which is exact because both polyhedra are bounded. The target
//! `t - gamma_a (1 - y) - gamma_b y <= 0` is stored as objective
//! `t + (gamma_a - gamma_b) y` with bound `gamma_a`.

use num_traits::Zero;

use crate::cuts::cg_cut_along;
use crate::disjunction::make_variable;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpResult};
use crate::polyhedron::{Goal, Instance, LinearConstraint, Polyhedron, Relation};
use crate::proof::{close_leaf, expand, Mode, ProofTree, Strategy};
use crate::rational::{self, int, Rational};

use super::embed::{add_objective_variable, embed_instance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionGadget {
    pub instance_a: Instance,
    pub instance_b: Instance,
    pub composed: Instance,
    pub y_index: usize,
    pub t_index: usize,
    /// Integer coordinates of the common `x` block.
    pub n_common: usize,
    /// Continuous coordinates of the common `u` block (before `t`).
    pub d_common: usize,
}

fn check_bounded(inst: &Instance, name: &str) -> Result<()> {
    for j in 0..inst.dim() {
        for s in [1, -1] {
            let mut dir = rational::zeros(inst.dim());
            dir[j] = int(s);
            if let LpResult::Unbounded = solve_lp(&inst.polyhedron, &dir)? {
                return Err(Error::Precondition(format!("instance {name} is unbounded")));
            }
        }
    }
    Ok(())
}

/// Lifts `inst` to the common `(x, u, t)` space.
fn common_form(inst: &Instance, n: usize, d: usize) -> Instance {
    let embedded = embed_instance(inst, n - inst.n_int(), d - inst.n_cont());
    add_objective_variable(&embedded)
}

pub fn compose_complementary(a: &Instance, b: &Instance) -> Result<CompositionGadget> {
    if a.goal != Goal::ProveBound || b.goal != Goal::ProveBound {
        return Err(Error::Precondition("both instances must be bound instances".into()));
    }
    check_bounded(a, "a")?;
    check_bounded(b, "b")?;
    let n = a.n_int().max(b.n_int());
    let d = a.n_cont().max(b.n_cont());
    let za = common_form(a, n, d);
    let zb = common_form(b, n, d);
    let zdim = n + d + 1;

    // Layout: [x (n, int), y (int), u (d), t, w (zdim)].
    let y = n;
    let n_int = n + 1;
    let dim = n_int + d + 1 + zdim;
    let z_pos = |j: usize| if j < n { j } else { j + 1 };
    let w_pos = |j: usize| n_int + d + 1 + j;

    let mut cons = Vec::new();
    for c in &za.polyhedron.constraints {
        let mut row = rational::zeros(dim);
        for (j, v) in c.coeffs.iter().enumerate() {
            row[w_pos(j)] = v.clone();
        }
        row[y] = c.rhs.clone();
        cons.push(LinearConstraint::new(row, c.relation, c.rhs.clone()));
    }
    for c in &zb.polyhedron.constraints {
        let mut row = rational::zeros(dim);
        for (j, v) in c.coeffs.iter().enumerate() {
            row[z_pos(j)] = v.clone();
            row[w_pos(j)] = -v;
        }
        row[y] = -&c.rhs;
        cons.push(LinearConstraint::new(row, c.relation, Rational::zero()));
    }
    cons.push(LinearConstraint::unit(dim, y, Relation::Ge, int(0)));
    cons.push(LinearConstraint::unit(dim, y, Relation::Le, int(1)));

    let t = z_pos(zdim - 1);
    let mut objective = rational::zeros(dim);
    objective[t] = int(1);
    objective[y] = &a.bound - &b.bound;
    let composed = Instance::new(
        Polyhedron::new(n_int, dim - n_int, cons)?,
        objective,
        a.bound.clone(),
        Goal::ProveBound,
    )?;
    Ok(CompositionGadget {
        instance_a: a.clone(),
        instance_b: b.clone(),
        composed,
        y_index: y,
        t_index: t,
        n_common: n,
        d_common: d,
    })
}

impl CompositionGadget {
    /// The composed polyhedron with `y` fixed to `side`.
    pub fn fiber(&self, side: i64) -> Polyhedron {
        let dim = self.composed.dim();
        self.composed
            .polyhedron
            .with_constraints(&[LinearConstraint::unit(dim, self.y_index, Relation::Eq, int(side))])
    }

    /// LP maximum of `t` over a fiber.
    pub fn fiber_lp_value(&self, side: i64) -> Result<LpResult> {
        let mut obj = rational::zeros(self.composed.dim());
        obj[self.t_index] = int(1);
        solve_lp(&self.fiber(side), &obj)
    }

    /// Instance `a`'s objective moved onto the common `x` block.
    fn a_direction(&self) -> Vec<Rational> {
        let mut dir = rational::zeros(self.composed.dim());
        for (j, v) in self.instance_a.objective[..self.instance_a.n_int()].iter().enumerate() {
            dir[j] = v.clone();
        }
        dir
    }

    /// Branch on `y`; on the `y = 0` side cut once with the CG cut along
    /// `a`'s objective, on the `y = 1` side branch on fractional variables.
    /// `a`'s objective must live on its integer coordinates.
    pub fn composed_proof(&self) -> Result<ProofTree> {
        let a = &self.instance_a;
        if a.objective[a.n_int()..].iter().any(|v| !v.is_zero())
            || !rational::is_integer_vec(&a.objective)
        {
            return Err(Error::Precondition(
                "the CG side needs an integral objective on integer coordinates".into(),
            ));
        }
        let inst = &self.composed;
        let mut tree = ProofTree::new(inst.clone(), Mode::Unrestricted);
        let sides = tree.branch(
            tree.root,
            make_variable(self.y_index, 0.into(), inst.n_int(), inst.n_cont())?,
        );

        let cut = cg_cut_along(&tree.relaxation(sides[0]), &self.a_direction())?
            .ok_or_else(|| Error::Precondition("y = 0 fiber has no LP optimum".into()))?;
        let child = tree.cut(sides[0], cut);
        close_leaf(&mut tree, child)?;

        let strategy = Strategy {
            mode: Mode::Unrestricted,
            ..Strategy::variable_branching()
        };
        expand(&mut tree, sides[1], &strategy)?;
        Ok(tree.renumbered())
    }
}
