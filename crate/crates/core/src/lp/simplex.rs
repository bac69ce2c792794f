//! Two-phase primal simplex on a dense exact tableau with Bland's rule.
//!
//! Variables of the input polyhedron are free; each one is split into a
//! positive and a negative part. Every row owns a column that starts out as
//! the unit vector of that row (its slack for `<=` rows, its artificial
//! otherwise), which is where the dual values are read from at the end.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedron::{Polyhedron, Relation};
use crate::rational::{self, Rational};

/// An optimal vertex together with its dual certificate.
///
/// `duals[i]` belongs to constraint `i` of the polyhedron and follows the
/// relation's sign: nonnegative for `<=`, nonpositive for `>=`, free for `=`.
/// With that convention `sum_i duals[i] * a_i = c` and
/// `sum_i duals[i] * b_i = value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOptimum {
    pub value: Rational,
    pub point: Vec<Rational>,
    pub duals: Vec<Rational>,
}

/// Multipliers (same sign convention as `LpOptimum::duals`) whose combination
/// of the constraints reads `0 <= negative`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasRay {
    pub multipliers: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal(LpOptimum),
    Infeasible(FarkasRay),
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal(_) => LpStatus::Optimal,
            LpResult::Infeasible(_) => LpStatus::Infeasible,
            LpResult::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn optimum(&self) -> Option<&LpOptimum> {
        match self {
            LpResult::Optimal(opt) => Some(opt),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        self.optimum().map(|o| &o.value)
    }

    pub fn point(&self) -> Option<&[Rational]> {
        self.optimum().map(|o| o.point.as_slice())
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpResult::Infeasible(_))
    }
}

/// Maximizes `<objective, x>` over `polyhedron`.
pub fn solve_lp(polyhedron: &Polyhedron, objective: &[Rational]) -> Result<LpResult> {
    if objective.len() != polyhedron.dim() {
        return Err(Error::Dimension(format!(
            "objective has length {}, polyhedron dimension is {}",
            objective.len(),
            polyhedron.dim()
        )));
    }
    Ok(Tableau::build(polyhedron).solve(objective))
}

struct Tableau {
    /// Each row holds `ncols` entries followed by the rhs.
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    nvars: usize,
    /// Column that equals `e_i` in the initial tableau.
    unit_col: Vec<usize>,
    is_artificial: Vec<bool>,
    /// `-1` when the row was negated to make its rhs nonnegative.
    flip: Vec<bool>,
}

impl Tableau {
    fn build(p: &Polyhedron) -> Tableau {
        let nvars = p.dim();
        let m = p.constraints.len();
        // Normalized relation of each row after making the rhs nonnegative.
        let mut norm = Vec::with_capacity(m);
        let mut flip = Vec::with_capacity(m);
        for c in &p.constraints {
            let negate = c.rhs.is_negative();
            flip.push(negate);
            norm.push(match (c.relation, negate) {
                (Relation::Eq, _) => Relation::Eq,
                (Relation::Le, false) | (Relation::Ge, true) => Relation::Le,
                (Relation::Ge, false) | (Relation::Le, true) => Relation::Ge,
            });
        }
        let n_slack = norm.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = norm.iter().filter(|r| **r != Relation::Le).count();
        let ncols = 2 * nvars + n_slack + n_art;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut unit_col = Vec::with_capacity(m);
        let mut is_artificial = vec![false; ncols];
        let mut next_slack = 2 * nvars;
        let mut next_art = 2 * nvars + n_slack;
        for (i, c) in p.constraints.iter().enumerate() {
            let sign = if flip[i] {
                -Rational::one()
            } else {
                Rational::one()
            };
            let mut row = rational::zeros(ncols + 1);
            for (j, a) in c.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    row[j] = a * &sign;
                    row[nvars + j] = -(a * &sign);
                }
            }
            row[ncols] = &c.rhs * &sign;
            match norm[i] {
                Relation::Le => {
                    row[next_slack] = Rational::one();
                    basis.push(next_slack);
                    unit_col.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                    row[next_art] = Rational::one();
                    is_artificial[next_art] = true;
                    basis.push(next_art);
                    unit_col.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = Rational::one();
                    is_artificial[next_art] = true;
                    basis.push(next_art);
                    unit_col.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            obj: rational::zeros(ncols + 1),
            basis,
            ncols,
            nvars,
            unit_col,
            is_artificial,
            flip,
        }
    }

    fn solve(mut self, objective: &[Rational]) -> LpResult {
        // Phase 1: maximize -(sum of artificials).
        let phase1_cost: Vec<Rational> = (0..self.ncols)
            .map(|j| {
                if self.is_artificial[j] {
                    -Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        self.price(&phase1_cost);
        let all_columns = vec![true; self.ncols];
        let bounded = self.run(&all_columns);
        debug_assert!(bounded, "phase 1 is bounded above by zero");
        if self.obj[self.ncols].is_negative() {
            let multipliers = (0..self.rows.len())
                .map(|i| {
                    let col = self.unit_col[i];
                    let y = &self.obj[col] + &phase1_cost[col];
                    self.unflip(i, y)
                })
                .collect();
            return LpResult::Infeasible(FarkasRay { multipliers });
        }
        self.drive_out_artificials();

        // Phase 2 on the original objective.
        let mut cost = rational::zeros(self.ncols);
        for (j, c) in objective.iter().enumerate() {
            cost[j] = c.clone();
            cost[self.nvars + j] = -c;
        }
        self.price(&cost);
        let allowed: Vec<bool> = self.is_artificial.iter().map(|a| !a).collect();
        if !self.run(&allowed) {
            return LpResult::Unbounded;
        }
        let mut values = rational::zeros(self.ncols);
        for (i, &b) in self.basis.iter().enumerate() {
            values[b] = self.rows[i][self.ncols].clone();
        }
        let point = (0..self.nvars)
            .map(|j| &values[j] - &values[self.nvars + j])
            .collect();
        let duals = (0..self.rows.len())
            .map(|i| self.unflip(i, self.obj[self.unit_col[i]].clone()))
            .collect();
        LpResult::Optimal(LpOptimum {
            value: self.obj[self.ncols].clone(),
            point,
            duals,
        })
    }

    fn unflip(&self, row: usize, y: Rational) -> Rational {
        if self.flip[row] {
            -y
        } else {
            y
        }
    }

    /// Recomputes the objective row `z_j = c_B B^-1 A_j - c_j` for `cost`.
    fn price(&mut self, cost: &[Rational]) {
        let mut obj = rational::zeros(self.ncols + 1);
        for (j, c) in cost.iter().enumerate() {
            if !c.is_zero() {
                obj[j] = -c;
            }
        }
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    obj[j] += cb * v;
                }
            }
        }
        self.obj = obj;
    }

    /// Bland's rule iterations. Returns false when the objective is unbounded.
    fn run(&mut self, allowed: &[bool]) -> bool {
        loop {
            let Some(enter) = (0..self.ncols).find(|&j| allowed[j] && self.obj[j].is_negative())
            else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / a;
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, enter);
        }
    }

    fn drive_out_artificials(&mut self) {
        for i in 0..self.rows.len() {
            if !self.is_artificial[self.basis[i]] {
                continue;
            }
            let col = (0..self.ncols)
                .find(|&j| !self.is_artificial[j] && !self.rows[i][j].is_zero());
            // No candidate means the row is redundant; its artificial stays
            // basic at zero and no later pivot can touch it.
            if let Some(col) = col {
                self.pivot(i, col);
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        let support: Vec<usize> = (0..=self.ncols)
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &support {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &support {
                self.obj[j] -= &f * &pivot_row[j];
            }
        }
        self.basis[r] = c;
    }
}
