//! Cutting planes with machine-checkable validity certificates.
//!
//! Two certificate shapes exist. A Chvátal-Gomory certificate is the vector of
//! nonnegative multipliers over the `<=`-oriented rows of the relaxation. A
//! disjunctive certificate names a disjunction and, for every term, Farkas
//! multipliers over the oriented rows of `relaxation ∩ term` (relaxation rows
//! first, then the term's rows) that either imply the cut or prove the term
//! empty.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::disjunction::{split_from_bigints, Disjunction};
use crate::error::{Error, Result};
use crate::lp::{combine_rows, solve_lp, to_oriented_multipliers, LpResult};
use crate::polyhedron::{LinearConstraint, OrientedRow, Polyhedron, Relation};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FarkasWitness {
    pub multipliers: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    Cg {
        multipliers: Vec<Rational>,
    },
    Disjunctive {
        disjunction: Disjunction,
        witnesses: Vec<FarkasWitness>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CuttingPlane {
    /// Always a `<=` constraint.
    pub halfspace: LinearConstraint,
    pub certificate: Certificate,
}

impl CuttingPlane {
    pub fn sparsity(&self) -> usize {
        self.halfspace.sparsity()
    }

    /// Sparsity of the cut and, for disjunctive certificates, of the
    /// disjunction behind it.
    pub fn certificate_sparsity(&self) -> usize {
        match &self.certificate {
            Certificate::Cg { .. } => self.sparsity(),
            Certificate::Disjunctive { disjunction, .. } => {
                self.sparsity().max(disjunction.sparsity())
            }
        }
    }

    pub fn separates(&self, point: &[Rational]) -> bool {
        !self.halfspace.is_satisfied_by(point)
    }

    /// Inserts `count` zero multipliers at oriented row `at` of every
    /// certificate vector (the relaxation grew rows there).
    pub fn insert_zero_rows(&mut self, at: usize, count: usize) {
        let pad = |v: &mut Vec<Rational>| {
            let at = at.min(v.len());
            v.splice(at..at, std::iter::repeat_n(Rational::zero(), count));
        };
        match &mut self.certificate {
            Certificate::Cg { multipliers } => pad(multipliers),
            Certificate::Disjunctive { witnesses, .. } => {
                for w in witnesses {
                    pad(&mut w.multipliers);
                }
            }
        }
    }

    /// Drops oriented rows `at..at + count` from every certificate vector.
    pub fn remove_rows(&mut self, at: usize, count: usize) {
        let cut = |v: &mut Vec<Rational>| {
            v.drain(at..at + count);
        };
        match &mut self.certificate {
            Certificate::Cg { multipliers } => cut(multipliers),
            Certificate::Disjunctive { witnesses, .. } => {
                for w in witnesses {
                    cut(&mut w.multipliers);
                }
            }
        }
    }

    /// Re-expresses a CG cut as a split cut: with `alpha = lambda A` and
    /// `beta = floor(lambda b)` the cut is valid for both sides of
    /// `{<alpha,x> <= beta} u {<alpha,x> >= beta + 1}`. Disjunctive cuts are
    /// returned unchanged.
    pub fn with_split_certificate(&self, relaxation: &Polyhedron) -> Result<CuttingPlane> {
        let multipliers = match &self.certificate {
            Certificate::Disjunctive { .. } => return Ok(self.clone()),
            Certificate::Cg { multipliers } => multipliers,
        };
        let rows = relaxation.oriented_rows();
        if multipliers.len() != rows.len() {
            return Err(Error::Dimension("CG multipliers do not match the relaxation".into()));
        }
        let (alpha, rhs) = combine_rows(&rows, multipliers, relaxation.dim());
        let alpha_int: Vec<BigInt> = alpha
            .iter()
            .map(rational::to_bigint)
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidArgument("CG combination is not integral".into()))?;
        let beta = rhs.floor().to_integer();
        let disjunction =
            split_from_bigints(alpha_int, beta, relaxation.n_int, relaxation.n_cont);
        let m = rows.len();
        let mut le_side = rational::zeros(m + 1);
        le_side[m] = rational::int(1);
        let mut ge_side = multipliers.clone();
        ge_side.push(rational::int(1));
        Ok(CuttingPlane {
            halfspace: self.halfspace.clone(),
            certificate: Certificate::Disjunctive {
                disjunction,
                witnesses: vec![
                    FarkasWitness { multipliers: le_side },
                    FarkasWitness { multipliers: ge_side },
                ],
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutRejection {
    NotLessEqual,
    Dimension(String),
    NegativeMultiplier(usize),
    ContinuousCoefficient(usize),
    NonIntegralCoefficient(usize),
    CoefficientMismatch,
    RhsTooStrong,
    BadDisjunction(String),
    WitnessCount { expected: usize, found: usize },
    TermNotCovered(usize),
}

impl fmt::Display for CutRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutRejection::NotLessEqual => write!(f, "cut is not a <= halfspace"),
            CutRejection::Dimension(m) => write!(f, "dimension mismatch: {m}"),
            CutRejection::NegativeMultiplier(i) => write!(f, "multiplier {i} is negative"),
            CutRejection::ContinuousCoefficient(j) => {
                write!(f, "combination is nonzero on continuous coordinate {j}")
            }
            CutRejection::NonIntegralCoefficient(j) => {
                write!(f, "combination is fractional on integer coordinate {j}")
            }
            CutRejection::CoefficientMismatch => {
                write!(f, "combination is not a positive multiple of the cut")
            }
            CutRejection::RhsTooStrong => write!(f, "cut rhs is below the certified rhs"),
            CutRejection::BadDisjunction(m) => write!(f, "disjunction rejected: {m}"),
            CutRejection::WitnessCount { expected, found } => {
                write!(f, "expected {expected} term witnesses, found {found}")
            }
            CutRejection::TermNotCovered(t) => {
                write!(f, "witness for term {t} neither implies the cut nor empties the term")
            }
        }
    }
}

impl CutRejection {
    pub fn code(&self) -> &'static str {
        match self {
            CutRejection::NotLessEqual => "cut-relation",
            CutRejection::Dimension(_) => "cut-dimension",
            CutRejection::NegativeMultiplier(_) => "negative-multiplier",
            CutRejection::ContinuousCoefficient(_) => "continuous-coefficient",
            CutRejection::NonIntegralCoefficient(_) => "non-integral-combination",
            CutRejection::CoefficientMismatch => "coefficient-mismatch",
            CutRejection::RhsTooStrong => "rhs-too-strong",
            CutRejection::BadDisjunction(_) => "bad-disjunction",
            CutRejection::WitnessCount { .. } => "witness-count",
            CutRejection::TermNotCovered(_) => "term-not-covered",
        }
    }
}

/// Positive `mu` with `coeffs = mu * cut.coeffs`, if one exists.
fn positive_ratio(coeffs: &[Rational], cut: &[Rational]) -> Option<Option<Rational>> {
    let mut mu: Option<Rational> = None;
    for (c, a) in coeffs.iter().zip(cut) {
        match (c.is_zero(), a.is_zero()) {
            (true, true) => {}
            (false, false) => {
                let r = c / a;
                if !r.is_positive() {
                    return None;
                }
                match &mu {
                    Some(m) if *m != r => return None,
                    Some(_) => {}
                    None => mu = Some(r),
                }
            }
            _ => return None,
        }
    }
    // Inner `None`: both vectors are zero.
    Some(mu)
}

/// True iff `<coeffs, x> <= rhs` implies `cut` (by positive scaling).
fn implies(coeffs: &[Rational], rhs: &Rational, cut: &LinearConstraint) -> bool {
    match positive_ratio(coeffs, &cut.coeffs) {
        None => false,
        Some(Some(mu)) => rhs <= &(&mu * &cut.rhs),
        // 0 <= rhs implies 0 <= cut.rhs only when it is at least as weak.
        Some(None) => rhs <= &cut.rhs || !cut.rhs.is_negative(),
    }
}

fn check_nonnegative(v: &[Rational]) -> std::result::Result<(), CutRejection> {
    match v.iter().position(|x| x.is_negative()) {
        Some(i) => Err(CutRejection::NegativeMultiplier(i)),
        None => Ok(()),
    }
}

fn term_rows(relaxation_rows: &[OrientedRow], term: &[LinearConstraint]) -> Vec<OrientedRow> {
    let mut rows = relaxation_rows.to_vec();
    rows.extend(term.iter().flat_map(|c| c.oriented()));
    rows
}

/// Checks a cut's certificate against the relaxation it was derived for.
pub fn verify_cut(relaxation: &Polyhedron, cut: &CuttingPlane) -> std::result::Result<(), CutRejection> {
    let dim = relaxation.dim();
    if cut.halfspace.relation != Relation::Le {
        return Err(CutRejection::NotLessEqual);
    }
    if cut.halfspace.dim() != dim {
        return Err(CutRejection::Dimension(format!(
            "cut has {} coefficients, relaxation dimension is {dim}",
            cut.halfspace.dim()
        )));
    }
    let rows = relaxation.oriented_rows();
    match &cut.certificate {
        Certificate::Cg { multipliers } => {
            if multipliers.len() != rows.len() {
                return Err(CutRejection::Dimension(format!(
                    "{} multipliers for {} oriented rows",
                    multipliers.len(),
                    rows.len()
                )));
            }
            check_nonnegative(multipliers)?;
            let (coeffs, rhs) = combine_rows(&rows, multipliers, dim);
            for (j, c) in coeffs.iter().enumerate() {
                if j >= relaxation.n_int && !c.is_zero() {
                    return Err(CutRejection::ContinuousCoefficient(j));
                }
                if j < relaxation.n_int && !c.is_integer() {
                    return Err(CutRejection::NonIntegralCoefficient(j));
                }
            }
            let floor = rhs.floor();
            if positive_ratio(&coeffs, &cut.halfspace.coeffs).is_none() {
                return Err(CutRejection::CoefficientMismatch);
            }
            if !implies(&coeffs, &floor, &cut.halfspace) {
                return Err(CutRejection::RhsTooStrong);
            }
            Ok(())
        }
        Certificate::Disjunctive {
            disjunction,
            witnesses,
        } => {
            if disjunction.n_int != relaxation.n_int || disjunction.n_cont != relaxation.n_cont {
                return Err(CutRejection::Dimension(
                    "disjunction lives in a different space".into(),
                ));
            }
            disjunction.check().map_err(CutRejection::BadDisjunction)?;
            if witnesses.len() != disjunction.arity() {
                return Err(CutRejection::WitnessCount {
                    expected: disjunction.arity(),
                    found: witnesses.len(),
                });
            }
            for (t, (term, w)) in disjunction.terms.iter().zip(witnesses).enumerate() {
                let trows = term_rows(&rows, term);
                if w.multipliers.len() != trows.len() {
                    return Err(CutRejection::Dimension(format!(
                        "witness {t} has {} multipliers for {} rows",
                        w.multipliers.len(),
                        trows.len()
                    )));
                }
                check_nonnegative(&w.multipliers)?;
                let (coeffs, rhs) = combine_rows(&trows, &w.multipliers, dim);
                let empties = coeffs.iter().all(|c| c.is_zero()) && rhs.is_negative();
                if !empties && !implies(&coeffs, &rhs, &cut.halfspace) {
                    return Err(CutRejection::TermNotCovered(t));
                }
            }
            Ok(())
        }
    }
}

/// Chvátal-Gomory cut `<lambda A, x> <= floor(lambda b)` from caller-supplied
/// multipliers over `p.oriented_rows()`, stored in primitive integer form.
pub fn generate_cg_cut(p: &Polyhedron, lambda: &[Rational]) -> Result<CuttingPlane> {
    let rows = p.oriented_rows();
    if lambda.len() != rows.len() {
        return Err(Error::Dimension(format!(
            "{} multipliers for {} oriented rows",
            lambda.len(),
            rows.len()
        )));
    }
    if let Some(i) = lambda.iter().position(|l| l.is_negative()) {
        return Err(Error::InvalidArgument(format!("multiplier {i} is negative")));
    }
    let (coeffs, rhs) = combine_rows(&rows, lambda, p.dim());
    for (j, c) in coeffs.iter().enumerate() {
        if j < p.n_int && !c.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "combined coefficient {j} is not integral"
            )));
        }
        if j >= p.n_int && !c.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "combined coefficient on continuous coordinate {j} is nonzero"
            )));
        }
    }
    let halfspace = LinearConstraint::le(coeffs, rhs.floor()).primitive();
    Ok(CuttingPlane {
        halfspace,
        certificate: Certificate::Cg {
            multipliers: lambda.to_vec(),
        },
    })
}

/// CG cut along an integral direction: the LP dual of `max <direction, x>`
/// supplies the multipliers, so the cut reads
/// `<direction, x> <= floor(LP value)`. `None` when the LP has no optimum.
pub fn cg_cut_along(p: &Polyhedron, direction: &[Rational]) -> Result<Option<CuttingPlane>> {
    if direction.len() != p.dim() {
        return Err(Error::Dimension("direction length differs from dimension".into()));
    }
    if direction[..p.n_int].iter().any(|c| !c.is_integer())
        || direction[p.n_int..].iter().any(|c| !c.is_zero())
    {
        return Err(Error::InvalidArgument(
            "CG direction must be integral on integer coordinates and zero elsewhere".into(),
        ));
    }
    match solve_lp(p, direction)? {
        LpResult::Optimal(opt) => {
            let lambda = to_oriented_multipliers(p, &opt.duals);
            generate_cg_cut(p, &lambda).map(Some)
        }
        _ => Ok(None),
    }
}

/// Most violated disjunctive cut from the cut-generating LP with the
/// multiplier-sum normalization. `Ok(None)` when no cut separates `point`.
pub fn generate_disjunctive_cut(
    p: &Polyhedron,
    disjunction: &Disjunction,
    point: &[Rational],
) -> Result<Option<CuttingPlane>> {
    let dim = p.dim();
    if disjunction.dim() != dim || point.len() != dim {
        return Err(Error::Dimension("disjunction, point and relaxation disagree".into()));
    }
    if let Some(t) = (0..disjunction.arity()).find(|&t| disjunction.term_contains(t, point)) {
        return Err(Error::Precondition(format!(
            "point lies in term {t} of the disjunction"
        )));
    }
    let base_rows = p.oriented_rows();
    let per_term: Vec<Vec<OrientedRow>> = disjunction
        .terms
        .iter()
        .map(|t| term_rows(&base_rows, t))
        .collect();

    // Variables: alpha (dim), beta, then one multiplier block per term.
    let mut offsets = Vec::with_capacity(per_term.len());
    let mut nvars = dim + 1;
    for rows in &per_term {
        offsets.push(nvars);
        nvars += rows.len();
    }
    let beta = dim;
    let mut cons = Vec::new();
    let unit = |i: usize, v: Rational| {
        let mut c = rational::zeros(nvars);
        c[i] = v;
        c
    };
    for (t, rows) in per_term.iter().enumerate() {
        for j in 0..dim {
            let mut c = rational::zeros(nvars);
            c[j] = rational::int(-1);
            for (r, row) in rows.iter().enumerate() {
                if !row.coeffs[j].is_zero() {
                    c[offsets[t] + r] = row.coeffs[j].clone();
                }
            }
            cons.push(LinearConstraint::eq(c, Rational::zero()));
        }
        let mut c = rational::zeros(nvars);
        c[beta] = rational::int(-1);
        for (r, row) in rows.iter().enumerate() {
            c[offsets[t] + r] = row.rhs.clone();
        }
        cons.push(LinearConstraint::le(c, Rational::zero()));
        for r in 0..rows.len() {
            cons.push(LinearConstraint::ge(unit(offsets[t] + r, rational::int(1)), Rational::zero()));
        }
    }
    let mut norm = rational::zeros(nvars);
    for v in norm.iter_mut().skip(dim + 1) {
        *v = rational::int(1);
    }
    cons.push(LinearConstraint::eq(norm, rational::int(1)));
    let cglp = Polyhedron::new(0, nvars, cons)?;
    let mut objective = rational::zeros(nvars);
    objective[..dim].clone_from_slice(point);
    objective[beta] = rational::int(-1);

    let opt = match solve_lp(&cglp, &objective)? {
        LpResult::Optimal(opt) => opt,
        _ => return Ok(None),
    };
    if !opt.value.is_positive() {
        return Ok(None);
    }
    let alpha = &opt.point[..dim];
    let scale = rational::primitive_scale(alpha);
    let halfspace = LinearConstraint::le(
        alpha.iter().map(|a| a * &scale).collect(),
        &opt.point[beta] * &scale,
    );
    let witnesses = per_term
        .iter()
        .enumerate()
        .map(|(t, rows)| FarkasWitness {
            multipliers: opt.point[offsets[t]..offsets[t] + rows.len()]
                .iter()
                .map(|m| m * &scale)
                .collect(),
        })
        .collect();
    Ok(Some(CuttingPlane {
        halfspace,
        certificate: Certificate::Disjunctive {
            disjunction: disjunction.clone(),
            witnesses,
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjunction::split_i64;
    use crate::rational::{frac, int, ints};

    fn jeroslow(n: usize) -> Polyhedron {
        let mut cons = vec![LinearConstraint::le(
            vec![int(2); n],
            int(n as i64),
        )];
        cons.extend(Polyhedron::unit_box(n).constraints);
        Polyhedron::new(n, 0, cons).unwrap()
    }

    fn half_on_first(p: &Polyhedron) -> Vec<Rational> {
        let mut lambda = rational::zeros(p.oriented_len());
        lambda[0] = frac(1, 2);
        lambda
    }

    #[test]
    fn jeroslow_cg_cut() {
        let p = jeroslow(5);
        let cut = generate_cg_cut(&p, &half_on_first(&p)).unwrap();
        assert_eq!(cut.halfspace, LinearConstraint::le(ints(&[1; 5]), int(2)));
        assert_eq!(verify_cut(&p, &cut), Ok(()));
        let mut weaker_claim = cut.clone();
        weaker_claim.halfspace.rhs = int(1);
        assert_eq!(verify_cut(&p, &weaker_claim), Err(CutRejection::RhsTooStrong));
    }

    #[test]
    fn zero_multipliers_give_trivial_cut() {
        let p = jeroslow(3);
        let cut = generate_cg_cut(&p, &rational::zeros(p.oriented_len())).unwrap();
        assert_eq!(cut.halfspace, LinearConstraint::le(rational::zeros(3), int(0)));
        assert_eq!(verify_cut(&p, &cut), Ok(()));
    }

    #[test]
    fn cg_rejects_bad_multipliers() {
        let p = jeroslow(3);
        let mut lambda = rational::zeros(p.oriented_len());
        lambda[0] = frac(1, 4);
        assert!(generate_cg_cut(&p, &lambda).is_err());
        lambda[0] = int(-1);
        assert!(generate_cg_cut(&p, &lambda).is_err());
        assert!(generate_cg_cut(&p, &[int(1)]).is_err());
    }

    #[test]
    fn cg_idempotent_on_integral_data() {
        // lambda b integral: no strengthening happens.
        let p = jeroslow(4);
        let cut = generate_cg_cut(&p, &half_on_first(&p)).unwrap();
        assert_eq!(cut.halfspace, LinearConstraint::le(ints(&[1; 4]), int(2)));
    }

    #[test]
    fn cg_along_objective_matches_half_multiplier() {
        let p = jeroslow(5);
        let cut = cg_cut_along(&p, &ints(&[1; 5])).unwrap().unwrap();
        assert_eq!(cut.halfspace, LinearConstraint::le(ints(&[1; 5]), int(2)));
        assert_eq!(verify_cut(&p, &cut), Ok(()));
    }

    #[test]
    fn split_certificate_from_cg() {
        let p = jeroslow(5);
        let cut = generate_cg_cut(&p, &half_on_first(&p)).unwrap();
        let split = cut.with_split_certificate(&p).unwrap();
        assert_eq!(verify_cut(&p, &split), Ok(()));
        match &split.certificate {
            Certificate::Disjunctive { disjunction, .. } => {
                assert_eq!(disjunction, &split_i64(&[1; 5], 2, 5, 0).unwrap());
            }
            _ => panic!("expected a disjunctive certificate"),
        }
    }

    #[test]
    fn disjunctive_cut_on_jeroslow() {
        let p = jeroslow(3);
        let d = split_i64(&[1, 1, 1], 1, 3, 0).unwrap();
        let x = solve_lp(&p, &ints(&[1, 1, 1])).unwrap().point().unwrap().to_vec();
        let cut = generate_disjunctive_cut(&p, &d, &x).unwrap().unwrap();
        assert!(cut.separates(&x));
        assert_eq!(verify_cut(&p, &cut), Ok(()));
        assert!(cut.halfspace.is_primitive_integral());
    }

    #[test]
    fn disjunctive_cut_on_square() {
        // The faces x1 = 0 and x1 = 1 span the whole square: nothing separates.
        let p = Polyhedron::unit_box(2);
        let d = split_i64(&[1, 0], 0, 2, 0).unwrap();
        let x = vec![frac(1, 2), int(1)];
        assert!(generate_disjunctive_cut(&p, &d, &x).unwrap().is_none());

        // With the corner (1,1) cut away the hull of the faces shrinks.
        let p = p.with_constraints(&[LinearConstraint::le(ints(&[2, 2]), int(3))]);
        let cut = generate_disjunctive_cut(&p, &d, &x).unwrap().unwrap();
        assert!(cut.separates(&x));
        assert_eq!(verify_cut(&p, &cut), Ok(()));
        for face in [0, 1] {
            let term = p.with_constraints(&[LinearConstraint::eq(ints(&[1, 0]), int(face))]);
            let best = solve_lp(&term, &cut.halfspace.coeffs).unwrap();
            assert!(best.value().unwrap() <= &cut.halfspace.rhs);
        }
    }

    #[test]
    fn disjunctive_cut_precondition() {
        let p = Polyhedron::unit_box(2);
        let d = split_i64(&[1, 0], 0, 2, 0).unwrap();
        let inside = vec![int(0), frac(1, 2)];
        assert!(matches!(
            generate_disjunctive_cut(&p, &d, &inside),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let p = Polyhedron::unit_box(2)
            .with_constraints(&[LinearConstraint::le(ints(&[2, 2]), int(3))]);
        let d = split_i64(&[1, 0], 0, 2, 0).unwrap();
        let mut cut = generate_disjunctive_cut(&p, &d, &[frac(1, 2), int(1)])
            .unwrap()
            .unwrap();
        cut.halfspace.rhs -= int(1);
        assert!(verify_cut(&p, &cut).is_err());
    }
}
