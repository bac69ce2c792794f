//! Exhaustive one-round Chvátal–Gomory search on the triangle `T(h)`.
//!
//! `T` in `<=` form has rows `-x2 <= 0`, `-2h x1 + x2 <= 0` and
//! `2h x1 + x2 <= 2h`. Multipliers may be reduced mod 1 (the integer part
//! only adds a combination of valid rows), so `lambda_1, lambda_2` range over
//! fractions in `[0, 1)` and `lambda_0` is forced to `frac(lambda_1 +
//! lambda_2)` by integrality of the `x2` coefficient. The `x1` coefficient
//! `2h (lambda_2 - lambda_1)` must be integral too.

use num_traits::{One, Zero};

use crate::cuts::{cg_cut_along, generate_cg_cut, CuttingPlane};
use crate::error::{Error, Result};
use crate::lp::solve_lp;
use crate::rational::{self, frac, int, Rational};

use super::triangle_t;

#[derive(Clone, Debug)]
pub struct CgSearchReport {
    pub h: i64,
    pub multipliers_checked: usize,
    /// Cuts with `max x2` over `T` and the cut at most 0.
    pub proving_cuts: Vec<CuttingPlane>,
    /// Smallest `max x2` over `T` intersected with a single cut.
    pub best_value: Rational,
}

impl CgSearchReport {
    pub fn proves_target(&self) -> bool {
        !self.proving_cuts.is_empty()
    }
}

/// Fractions `p/q` in `[0, 1)` with `q <= max_den`, deduplicated.
pub fn fractions_below_one(max_den: i64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=max_den)
        .flat_map(|q| (0..q).map(move |p| frac(p, q)))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn one_round_cg_search(h: i64) -> Result<CgSearchReport> {
    if h < 1 {
        return Err(Error::InvalidArgument(format!("h must be at least 1, got {h}")));
    }
    let inst = triangle_t(h)?;
    let p = &inst.polyhedron;
    let two_h = int(2 * h);
    let fracs = fractions_below_one(2 * h);
    let mut checked = 0;
    let mut proving = Vec::new();
    let mut best: Option<Rational> = None;
    for l1 in &fracs {
        for l2 in &fracs {
            if !(&two_h * (l2 - l1)).is_integer() {
                continue;
            }
            let s = l1 + l2;
            let l0 = &s - s.floor();
            checked += 1;
            let cut = generate_cg_cut(p, &[l0, l1.clone(), l2.clone()])?;
            let value = max_x2_after(&inst, &cut)?;
            if value <= Rational::zero() {
                proving.push(cut);
            }
            if best.as_ref().is_none_or(|b| value < *b) {
                best = Some(value);
            }
        }
    }
    Ok(CgSearchReport {
        h,
        multipliers_checked: checked,
        proving_cuts: proving,
        best_value: best.unwrap_or_else(|| rational::int(h)),
    })
}

/// Maximum of `x2` over `T` cut by `cut`; `-1` when the cut empties `T`.
fn max_x2_after(inst: &crate::polyhedron::Instance, cut: &CuttingPlane) -> Result<Rational> {
    let p = inst.polyhedron.with_constraints([&cut.halfspace]);
    Ok(match solve_lp(&p, &inst.objective)?.value() {
        Some(v) => v.clone(),
        None => -Rational::one(),
    })
}

/// One round of CG cuts by direction: for every integral `a` with
/// `|a_i| <= k`, the strongest CG cut `<a, x> <= floor(max_T <a, x>)`.
/// Every CG cut of `T` is dominated by one of these, whatever its
/// multipliers, so this covers denominators the multiplier grid does not.
pub fn directional_cg_search(h: i64, k: i64) -> Result<CgSearchReport> {
    if h < 1 || k < 1 {
        return Err(Error::InvalidArgument(format!("need h, k >= 1, got h={h}, k={k}")));
    }
    let inst = triangle_t(h)?;
    let mut checked = 0;
    let mut proving = Vec::new();
    let mut best = rational::int(h);
    for a1 in -k..=k {
        for a2 in -k..=k {
            if (a1, a2) == (0, 0) {
                continue;
            }
            let Some(cut) = cg_cut_along(&inst.polyhedron, &[int(a1), int(a2)])? else {
                continue;
            };
            checked += 1;
            let value = max_x2_after(&inst, &cut)?;
            if value <= Rational::zero() {
                proving.push(cut);
            }
            best = best.min(value);
        }
    }
    Ok(CgSearchReport {
        h,
        multipliers_checked: checked,
        proving_cuts: proving,
        best_value: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farey_sizes() {
        // 0, 1/2 ; 0, 1/3, 1/2, 2/3 ; ...
        assert_eq!(fractions_below_one(2).len(), 2);
        assert_eq!(fractions_below_one(4).len(), 6);
    }

    #[test]
    fn no_single_cut_reaches_x2_le_0() {
        for h in [2, 4] {
            let r = one_round_cg_search(h).unwrap();
            assert!(!r.proves_target(), "h={h}: {:?}", r.proving_cuts);
            assert!(r.best_value > Rational::zero());
            assert!(r.multipliers_checked > 1);
        }
    }

    #[test]
    fn directional_search_cuts_the_apex_but_not_to_zero() {
        for h in [2, 4] {
            let r = directional_cg_search(h, 3).unwrap();
            assert!(!r.proves_target());
            // x1 + x2 <= h meets the left edge at x2 = 2h^2 / (2h + 1).
            assert!(r.best_value <= frac(2 * h * h, 2 * h + 1), "h={h}: {}", r.best_value);
            assert!(r.best_value > Rational::zero());
        }
    }
}
