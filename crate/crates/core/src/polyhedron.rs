//! H-represented polyhedra over `Z^n x R^d` and the instance tuple built on
//! top of them.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Relation> {
        match s {
            "<=" => Some(Relation::Le),
            "=" | "==" => Some(Relation::Eq),
            ">=" => Some(Relation::Ge),
            _ => None,
        }
    }
}

/// A single row `<a, x> (rel) b` in the ambient space of its polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// One row of the `<=`-oriented view of a constraint system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        LinearConstraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Relation::Ge, rhs)
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    /// `x_index (rel) rhs` in a space of dimension `dim`.
    pub fn unit(dim: usize, index: usize, relation: Relation, rhs: Rational) -> Self {
        let mut coeffs = rational::zeros(dim);
        coeffs[index] = rational::int(1);
        Self::new(coeffs, relation, rhs)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Number of nonzero coefficients.
    pub fn sparsity(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .collect()
    }

    pub fn lhs(&self, point: &[Rational]) -> Rational {
        rational::dot(&self.coeffs, point)
    }

    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }

    /// The constraint as `<=` rows: one row for `<=`/`>=`, two for `=`.
    pub fn oriented(&self) -> Vec<OrientedRow> {
        let le = || OrientedRow {
            coeffs: self.coeffs.clone(),
            rhs: self.rhs.clone(),
        };
        let ge = || OrientedRow {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            rhs: -&self.rhs,
        };
        match self.relation {
            Relation::Le => vec![le()],
            Relation::Ge => vec![ge()],
            Relation::Eq => vec![le(), ge()],
        }
    }

    pub fn oriented_len(&self) -> usize {
        match self.relation {
            Relation::Eq => 2,
            _ => 1,
        }
    }

    /// Same halfspace (or hyperplane) scaled by a positive factor so that the
    /// coefficients are coprime integers. The rhs is scaled alongside and may
    /// stay fractional.
    pub fn primitive(&self) -> LinearConstraint {
        let scale = rational::primitive_scale(&self.coeffs);
        LinearConstraint {
            coeffs: self.coeffs.iter().map(|c| c * &scale).collect(),
            relation: self.relation,
            rhs: &self.rhs * &scale,
        }
    }

    pub fn is_primitive_integral(&self) -> bool {
        rational::is_integer_vec(&self.coeffs) && self.primitive().coeffs == self.coeffs
    }

    /// Inserts zero coefficients so that old coordinate `i` lands at
    /// `map[i]` in a space of dimension `new_dim`.
    pub fn remap(&self, map: &[usize], new_dim: usize) -> LinearConstraint {
        let mut coeffs = rational::zeros(new_dim);
        for (old, &new) in map.iter().enumerate() {
            coeffs[new] = self.coeffs[old].clone();
        }
        LinearConstraint::new(coeffs, self.relation, self.rhs.clone())
    }

    /// Keeps only the coordinates in `keep`, in order.
    pub fn project(&self, keep: &[usize]) -> LinearConstraint {
        LinearConstraint::new(
            keep.iter().map(|&i| self.coeffs[i].clone()).collect(),
            self.relation,
            self.rhs.clone(),
        )
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            if mag != rational::int(1) {
                write!(f, "{}*", rational::format(&mag))?;
            }
            write!(f, "x{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(
            f,
            " {} {}",
            self.relation.symbol(),
            rational::format(&self.rhs)
        )
    }
}

/// `{x in R^(n+d) : every constraint holds}`; the first `n_int` coordinates
/// are the integer-constrained ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    pub n_int: usize,
    pub n_cont: usize,
    pub constraints: Vec<LinearConstraint>,
}

impl Polyhedron {
    pub fn new(n_int: usize, n_cont: usize, constraints: Vec<LinearConstraint>) -> Result<Self> {
        let dim = n_int + n_cont;
        if let Some((i, c)) = constraints.iter().enumerate().find(|(_, c)| c.dim() != dim) {
            return Err(Error::Dimension(format!(
                "constraint {i} has {} coefficients, ambient dimension is {dim}",
                c.dim()
            )));
        }
        Ok(Polyhedron {
            n_int,
            n_cont,
            constraints,
        })
    }

    pub fn dim(&self) -> usize {
        self.n_int + self.n_cont
    }

    /// `[0,1]^n` with `n` integer coordinates.
    pub fn unit_box(n: usize) -> Polyhedron {
        let mut constraints = Vec::with_capacity(2 * n);
        for i in 0..n {
            constraints.push(LinearConstraint::unit(n, i, Relation::Ge, rational::int(0)));
            constraints.push(LinearConstraint::unit(n, i, Relation::Le, rational::int(1)));
        }
        Polyhedron {
            n_int: n,
            n_cont: 0,
            constraints,
        }
    }

    pub fn with_constraints<'a>(
        &self,
        extra: impl IntoIterator<Item = &'a LinearConstraint>,
    ) -> Polyhedron {
        let mut constraints = self.constraints.clone();
        constraints.extend(extra.into_iter().cloned());
        Polyhedron {
            n_int: self.n_int,
            n_cont: self.n_cont,
            constraints,
        }
    }

    pub fn oriented_rows(&self) -> Vec<OrientedRow> {
        self.constraints.iter().flat_map(|c| c.oriented()).collect()
    }

    pub fn oriented_len(&self) -> usize {
        self.constraints.iter().map(|c| c.oriented_len()).sum()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.dim() && self.constraints.iter().all(|c| c.is_satisfied_by(point))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    ProveBound,
    ProveInfeasible,
}

impl Goal {
    pub fn name(self) -> &'static str {
        match self {
            Goal::ProveBound => "prove-bound",
            Goal::ProveInfeasible => "prove-infeasible",
        }
    }

    pub fn from_name(s: &str) -> Option<Goal> {
        match s {
            "prove-bound" => Some(Goal::ProveBound),
            "prove-infeasible" => Some(Goal::ProveInfeasible),
            _ => None,
        }
    }
}

/// The tuple `(C, c, gamma)` together with what is to be proved about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub polyhedron: Polyhedron,
    pub objective: Vec<Rational>,
    pub bound: Rational,
    pub goal: Goal,
}

impl Instance {
    pub fn new(
        polyhedron: Polyhedron,
        objective: Vec<Rational>,
        bound: Rational,
        goal: Goal,
    ) -> Result<Self> {
        if objective.len() != polyhedron.dim() {
            return Err(Error::Dimension(format!(
                "objective has length {}, ambient dimension is {}",
                objective.len(),
                polyhedron.dim()
            )));
        }
        Ok(Instance {
            polyhedron,
            objective,
            bound,
            goal,
        })
    }

    pub fn n_int(&self) -> usize {
        self.polyhedron.n_int
    }

    pub fn n_cont(&self) -> usize {
        self.polyhedron.n_cont
    }

    pub fn dim(&self) -> usize {
        self.polyhedron.dim()
    }

    /// The target inequality `<c, x> <= gamma`.
    pub fn target(&self) -> LinearConstraint {
        LinearConstraint::le(self.objective.clone(), self.bound.clone())
    }
}

/// True iff the first `n` coordinates of `point` are integers.
pub fn is_integral(point: &[Rational], n: usize) -> Result<bool> {
    if point.len() < n {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, need at least {n}",
            point.len()
        )));
    }
    Ok(point[..n].iter().all(|v| v.is_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, ints};

    #[test]
    fn integrality() {
        assert!(is_integral(&[int(1), int(2), frac(1, 2)], 2).unwrap());
        assert!(!is_integral(&[int(1), frac(1, 2), int(0)], 2).unwrap());
        assert!(is_integral(&[frac(3, 3), frac(4, 2)], 2).unwrap());
        assert!(is_integral(&[int(1)], 2).is_err());
    }

    #[test]
    fn oriented_rows_follow_relations() {
        let p = Polyhedron::new(
            2,
            0,
            vec![
                LinearConstraint::le(ints(&[1, 1]), int(3)),
                LinearConstraint::ge(ints(&[1, 0]), int(1)),
                LinearConstraint::eq(ints(&[0, 1]), int(2)),
            ],
        )
        .unwrap();
        let rows = p.oriented_rows();
        assert_eq!(rows.len(), 4);
        assert_eq!(p.oriented_len(), 4);
        assert_eq!(rows[1].coeffs, ints(&[-1, 0]));
        assert_eq!(rows[1].rhs, int(-1));
        assert_eq!(rows[3].coeffs, ints(&[0, -1]));
    }

    #[test]
    fn rejects_bad_dimensions() {
        let err = Polyhedron::new(2, 1, vec![LinearConstraint::le(ints(&[1, 1]), int(1))]);
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn sparsity_and_primitive_form() {
        let c = LinearConstraint::le(vec![frac(1, 2), int(0), frac(3, 2)], frac(5, 4));
        assert_eq!(c.sparsity(), 2);
        let p = c.primitive();
        assert_eq!(p.coeffs, ints(&[1, 0, 3]));
        assert_eq!(p.rhs, frac(5, 2));
        assert!(p.is_primitive_integral());
        assert!(!LinearConstraint::le(ints(&[2, 2]), int(1)).is_primitive_integral());
    }

    #[test]
    fn display() {
        let c = LinearConstraint::le(ints(&[2, 0, -1]), int(5));
        assert_eq!(c.to_string(), "2*x1 - x3 <= 5");
    }
}
