//! Disjunctions: finite unions of polyhedra that cover `Z^n x R^d`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyhedron::{LinearConstraint, Relation};
use crate::rational::{self, Rational};

/// An interval `[lower, upper]` of integers; `None` is unbounded on that side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lower: Option<BigInt>,
    pub upper: Option<BigInt>,
}

/// Partition of `Z` into consecutive intervals along one integer coordinate.
/// This is the only generic (non-split) shape whose coverage we accept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalPartition {
    pub index: usize,
    pub intervals: Vec<Interval>,
}

impl IntervalPartition {
    /// Checks that the intervals tile `Z`.
    pub fn check(&self) -> std::result::Result<(), String> {
        let Some(first) = self.intervals.first() else {
            return Err("empty partition".into());
        };
        if first.lower.is_some() {
            return Err("first interval must be unbounded below".into());
        }
        if self.intervals.last().unwrap().upper.is_some() {
            return Err("last interval must be unbounded above".into());
        }
        for (i, w) in self.intervals.windows(2).enumerate() {
            match (&w[0].upper, &w[1].lower) {
                (Some(u), Some(l)) if *l == u + 1 => {}
                _ => return Err(format!("gap or overlap between intervals {i} and {}", i + 1)),
            }
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if let (Some(l), Some(u)) = (&iv.lower, &iv.upper) {
                if l > u {
                    return Err(format!("interval {i} is empty"));
                }
            }
        }
        Ok(())
    }

    fn terms(&self, dim: usize) -> Vec<Vec<LinearConstraint>> {
        self.intervals
            .iter()
            .map(|iv| {
                let mut term = Vec::new();
                if let Some(l) = &iv.lower {
                    term.push(LinearConstraint::unit(
                        dim,
                        self.index,
                        Relation::Ge,
                        rational::from_bigint(l.clone()),
                    ));
                }
                if let Some(u) = &iv.upper {
                    term.push(LinearConstraint::unit(
                        dim,
                        self.index,
                        Relation::Le,
                        rational::from_bigint(u.clone()),
                    ));
                }
                term
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Template {
    /// `{<pi, x> <= pi0} u {<pi, x> >= pi0 + 1}`.
    Split { pi: Vec<BigInt>, pi0: BigInt },
    /// `{x_index <= pi0} u {x_index >= pi0 + 1}`.
    Variable { index: usize, pi0: BigInt },
    Generic(IntervalPartition),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Disjunction {
    pub n_int: usize,
    pub n_cont: usize,
    pub template: Template,
    pub terms: Vec<Vec<LinearConstraint>>,
}

fn split_terms(pi: &[BigInt], pi0: &BigInt) -> Vec<Vec<LinearConstraint>> {
    let coeffs: Vec<Rational> = pi.iter().cloned().map(rational::from_bigint).collect();
    vec![
        vec![LinearConstraint::le(
            coeffs.clone(),
            rational::from_bigint(pi0.clone()),
        )],
        vec![LinearConstraint::ge(
            coeffs,
            rational::from_bigint(pi0 + BigInt::one()),
        )],
    ]
}

fn unit_vector(dim: usize, index: usize) -> Vec<BigInt> {
    let mut pi = vec![BigInt::zero(); dim];
    pi[index] = BigInt::one();
    pi
}

/// Split disjunction from integral data. A standard unit vector yields the
/// variable template.
pub fn make_split(pi: &[Rational], pi0: &Rational, n_int: usize, n_cont: usize) -> Result<Disjunction> {
    if pi.len() != n_int + n_cont {
        return Err(Error::Dimension(format!(
            "split vector has length {}, ambient dimension is {}",
            pi.len(),
            n_int + n_cont
        )));
    }
    if pi[n_int..].iter().any(|v| !v.is_zero()) {
        return Err(Error::InvalidArgument(
            "split vector is nonzero on a continuous coordinate".into(),
        ));
    }
    let pi: Vec<BigInt> = pi
        .iter()
        .map(rational::to_bigint)
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidArgument("split vector is not integral".into()))?;
    let pi0 = rational::to_bigint(pi0)
        .ok_or_else(|| Error::InvalidArgument("split rhs is not integral".into()))?;
    Ok(split_from_bigints(pi, pi0, n_int, n_cont))
}

pub(crate) fn split_from_bigints(pi: Vec<BigInt>, pi0: BigInt, n_int: usize, n_cont: usize) -> Disjunction {
    let nonzero: Vec<usize> = (0..pi.len()).filter(|&i| !pi[i].is_zero()).collect();
    let template = if nonzero.len() == 1 && pi[nonzero[0]].is_one() {
        Template::Variable {
            index: nonzero[0],
            pi0: pi0.clone(),
        }
    } else {
        Template::Split {
            pi: pi.clone(),
            pi0: pi0.clone(),
        }
    };
    Disjunction {
        n_int,
        n_cont,
        terms: split_terms(&pi, &pi0),
        template,
    }
}

/// Convenience for small integer data.
pub fn split_i64(pi: &[i64], pi0: i64, n_int: usize, n_cont: usize) -> Result<Disjunction> {
    make_split(&rational::ints(pi), &rational::int(pi0), n_int, n_cont)
}

pub fn make_variable(index: usize, pi0: BigInt, n_int: usize, n_cont: usize) -> Result<Disjunction> {
    if index >= n_int {
        return Err(Error::InvalidArgument(format!(
            "variable {index} is not an integer coordinate (n = {n_int})"
        )));
    }
    Ok(split_from_bigints(
        unit_vector(n_int + n_cont, index),
        pi0,
        n_int,
        n_cont,
    ))
}

pub fn make_interval_partition(partition: IntervalPartition, n_int: usize, n_cont: usize) -> Result<Disjunction> {
    if partition.index >= n_int {
        return Err(Error::InvalidArgument(format!(
            "partition coordinate {} is not an integer coordinate",
            partition.index
        )));
    }
    partition.check().map_err(Error::InvalidArgument)?;
    let terms = partition.terms(n_int + n_cont);
    Ok(Disjunction {
        n_int,
        n_cont,
        template: Template::Generic(partition),
        terms,
    })
}

impl Disjunction {
    pub fn dim(&self) -> usize {
        self.n_int + self.n_cont
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    /// Largest number of nonzeros over every inequality of every term.
    pub fn sparsity(&self) -> usize {
        self.terms
            .iter()
            .flatten()
            .map(|c| c.sparsity())
            .max()
            .unwrap_or(0)
    }

    /// `(pi, pi0)` for split and variable templates.
    pub fn split_data(&self) -> Option<(Vec<BigInt>, BigInt)> {
        match &self.template {
            Template::Split { pi, pi0 } => Some((pi.clone(), pi0.clone())),
            Template::Variable { index, pi0 } => {
                Some((unit_vector(self.dim(), *index), pi0.clone()))
            }
            Template::Generic(_) => None,
        }
    }

    pub fn is_split(&self) -> bool {
        self.split_data().is_some()
    }

    pub fn term_contains(&self, term: usize, point: &[Rational]) -> bool {
        self.terms[term].iter().all(|c| c.is_satisfied_by(point))
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        (0..self.terms.len()).any(|t| self.term_contains(t, point))
    }

    /// Re-derives the terms from the template and checks the coverage
    /// argument: integral split data supported on integer coordinates, or a
    /// tiling interval partition.
    pub fn check(&self) -> std::result::Result<(), String> {
        let dim = self.dim();
        let expected = match &self.template {
            Template::Split { pi, pi0 } => {
                if pi.len() != dim {
                    return Err("split vector has the wrong length".into());
                }
                if pi[self.n_int..].iter().any(|v| !v.is_zero()) {
                    return Err("split vector touches a continuous coordinate".into());
                }
                split_terms(pi, pi0)
            }
            Template::Variable { index, pi0 } => {
                if *index >= self.n_int {
                    return Err("variable disjunction on a continuous coordinate".into());
                }
                split_terms(&unit_vector(dim, *index), pi0)
            }
            Template::Generic(partition) => {
                if partition.index >= self.n_int {
                    return Err("interval partition on a continuous coordinate".into());
                }
                partition.check()?;
                partition.terms(dim)
            }
        };
        if expected != self.terms {
            return Err("terms do not match the template".into());
        }
        Ok(())
    }

    /// Restriction to the coordinates in `keep` (the others are fixed to 0).
    pub fn project(&self, keep: &[usize], n_int: usize, n_cont: usize) -> Disjunction {
        match &self.template {
            Template::Generic(p) => {
                let index = keep.iter().position(|&k| k == p.index).unwrap_or(0);
                Disjunction {
                    n_int,
                    n_cont,
                    template: Template::Generic(IntervalPartition {
                        index,
                        intervals: p.intervals.clone(),
                    }),
                    terms: self
                        .terms
                        .iter()
                        .map(|t| t.iter().map(|c| c.project(keep)).collect())
                        .collect(),
                }
            }
            _ => {
                let (pi, pi0) = self.split_data().unwrap();
                let pi: Vec<BigInt> = keep.iter().map(|&i| pi[i].clone()).collect();
                split_from_bigints(pi, pi0, n_int, n_cont)
            }
        }
    }

    /// Embedding into a larger space; old coordinate `i` becomes `map[i]`.
    pub fn remap(&self, map: &[usize], n_int: usize, n_cont: usize) -> Disjunction {
        let dim = n_int + n_cont;
        match &self.template {
            Template::Generic(p) => Disjunction {
                n_int,
                n_cont,
                template: Template::Generic(IntervalPartition {
                    index: map[p.index],
                    intervals: p.intervals.clone(),
                }),
                terms: self
                    .terms
                    .iter()
                    .map(|t| t.iter().map(|c| c.remap(map, dim)).collect())
                    .collect(),
            },
            _ => {
                let (pi, pi0) = self.split_data().unwrap();
                let mut new_pi = vec![BigInt::zero(); dim];
                for (old, &new) in map.iter().enumerate() {
                    new_pi[new] = pi[old].clone();
                }
                split_from_bigints(new_pi, pi0, n_int, n_cont)
            }
        }
    }
}
