//! Sparsity-restricted families of disjunctions and cuts.
//!
//! A split family is kept in canonical form: integral, primitive `pi`. With
//! `s = 1` that leaves exactly `+-e_i`, i.e. the variable disjunctions.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cuts::CuttingPlane;
use crate::disjunction::{Disjunction, Template};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Splits,
    Cuts,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    pub kind: FamilyKind,
    pub n_int: usize,
    pub n_cont: usize,
    pub sparsity_limit: usize,
}

impl FamilyParams {
    pub fn splits(n_int: usize, n_cont: usize) -> FamilyParams {
        FamilyParams {
            kind: FamilyKind::Splits,
            n_int,
            n_cont,
            sparsity_limit: n_int + n_cont,
        }
    }

    pub fn cuts(n_int: usize, n_cont: usize) -> FamilyParams {
        FamilyParams {
            kind: FamilyKind::Cuts,
            ..FamilyParams::splits(n_int, n_cont)
        }
    }

    pub fn dim(&self) -> usize {
        self.n_int + self.n_cont
    }

    pub fn is_unrestricted(&self) -> bool {
        self.sparsity_limit >= self.dim()
    }

    /// Split disjunctions with primitive `pi` of at most `s` nonzeros.
    pub fn admits_disjunction(&self, d: &Disjunction) -> bool {
        if self.kind != FamilyKind::Splits || d.n_int != self.n_int || d.n_cont != self.n_cont {
            return false;
        }
        match &d.template {
            Template::Variable { .. } => self.sparsity_limit >= 1,
            Template::Split { pi, .. } => {
                let g = pi.iter().fold(num_bigint::BigInt::zero(), |g, v| g.gcd(v));
                g.is_one() && pi.iter().filter(|v| !v.is_zero()).count() <= self.sparsity_limit
            }
            Template::Generic(_) => false,
        }
    }

    /// Cuts whose primitive form has at most `s` nonzeros.
    pub fn admits_cut(&self, cut: &CuttingPlane) -> bool {
        self.kind == FamilyKind::Cuts
            && cut.halfspace.dim() == self.dim()
            && cut.sparsity() <= self.sparsity_limit
    }
}

/// Restricts a family to inequalities with at most `s` nonzeros.
pub fn sparsity_filter(params: &FamilyParams, s: usize) -> Result<FamilyParams> {
    if s == 0 || s > params.dim() {
        return Err(Error::InvalidArgument(format!(
            "sparsity {s} outside 1..={}",
            params.dim()
        )));
    }
    Ok(FamilyParams {
        sparsity_limit: s.min(params.sparsity_limit),
        ..params.clone()
    })
}

/// True when every `pi` entry is within `bound` in absolute value.
pub fn within_coefficient_bound(d: &Disjunction, bound: u64) -> bool {
    d.split_data()
        .is_some_and(|(pi, _)| pi.iter().all(|v| v.abs() <= num_bigint::BigInt::from(bound)))
}
