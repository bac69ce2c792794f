use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::disjunction::{split_i64, Disjunction};
use crate::error::{Error, Result};
use crate::proof::Mode;
use crate::rational::Rational;

pub const DEFAULT_SEARCH_BUDGET: usize = 200_000;

/// The finite split family a search ranges over, plus its budgets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpace {
    pub sparsity_limit: usize,
    pub coefficient_bound: u64,
    /// Explicit `pi0` range; `None` derives it per `pi` from variable bounds.
    pub rhs_range: Option<(i64, i64)>,
    /// Distinct relaxations the search may solve.
    pub node_budget: usize,
    /// Maximum depth of a witness tree.
    pub depth_budget: Option<usize>,
    pub mode: Mode,
    /// Prune root choices by coordinate permutations fixing the instance.
    pub symmetry: bool,
}

impl SearchSpace {
    pub fn new(sparsity_limit: usize, coefficient_bound: u64) -> SearchSpace {
        SearchSpace {
            sparsity_limit,
            coefficient_bound,
            rhs_range: None,
            node_budget: DEFAULT_SEARCH_BUDGET,
            depth_budget: None,
            mode: Mode::Unrestricted,
            symmetry: true,
        }
    }

    pub fn with_rhs_range(mut self, lo: i64, hi: i64) -> SearchSpace {
        self.rhs_range = Some((lo, hi));
        self
    }

    pub fn with_budget(mut self, budget: usize) -> SearchSpace {
        self.node_budget = budget;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> SearchSpace {
        self.mode = mode;
        self
    }
}

/// Primitive integer vectors with `1..=s` nonzeros bounded by `b`, first
/// nonzero positive; ordered by sparsity, support, then coefficients.
fn sign_canonical_vectors(n: usize, s: usize, b: i64) -> Vec<Vec<i64>> {
    let values: Vec<i64> = (-b..=b).filter(|&v| v != 0).collect();
    let mut out = Vec::new();
    for k in 1..=s {
        for support in combinations_of(&(0..n).collect::<Vec<_>>(), k) {
            let total = values.len().pow(k as u32);
            for code in 0..total {
                // Base-|values| digits, most significant first.
                let mut coeffs = vec![0i64; k];
                let mut rest = code;
                for slot in coeffs.iter_mut().rev() {
                    *slot = values[rest % values.len()];
                    rest /= values.len();
                }
                let g = coeffs.iter().fold(0i64, |g, v| g.gcd(v));
                if coeffs[0] > 0 && g == 1 {
                    let mut pi = vec![0; n];
                    for (&j, &c) in support.iter().zip(&coeffs) {
                        pi[j] = c;
                    }
                    out.push(pi);
                }
            }
        }
    }
    out
}

/// All `k`-subsets of `items`, in lexicographic order of positions.
pub fn combinations_of<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], start: usize, k: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            rec(items, i + 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, 0, k, &mut Vec::new(), &mut out);
    out
}

fn check_space(n: usize, space: &SearchSpace) -> Result<()> {
    if space.sparsity_limit == 0 || space.sparsity_limit > n {
        return Err(Error::InvalidArgument(format!(
            "sparsity {} outside 1..={n}",
            space.sparsity_limit
        )));
    }
    if space.coefficient_bound == 0 {
        return Err(Error::InvalidArgument("coefficient bound must be at least 1".into()));
    }
    if let Some((lo, hi)) = space.rhs_range {
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty pi0 range {lo}..={hi}")));
        }
    }
    Ok(())
}

/// `(pi, pi0)` pairs of the family; `bounds` gives per-variable
/// `[lower, upper]` used when the space has no explicit `pi0` range.
pub(crate) fn enumerate_split_data(
    n: usize,
    space: &SearchSpace,
    bounds: &[(Rational, Rational)],
) -> Result<Vec<(Vec<i64>, i64)>> {
    check_space(n, space)?;
    let b = i64::try_from(space.coefficient_bound)
        .map_err(|_| Error::InvalidArgument("coefficient bound too large".into()))?;
    let mut out = Vec::new();
    for pi in sign_canonical_vectors(n, space.sparsity_limit, b) {
        let (lo, hi) = match space.rhs_range {
            Some(r) => r,
            None => {
                // Both terms meet the box only for ceil(min) <= pi0 <= floor(max) - 1.
                let (mut min, mut max) = (Rational::zero(), Rational::zero());
                for (j, &c) in pi.iter().enumerate() {
                    let c = Rational::from(BigInt::from(c));
                    let (l, u) = (&bounds[j].0 * &c, &bounds[j].1 * &c);
                    if l <= u {
                        min += l;
                        max += u;
                    } else {
                        min += u;
                        max += l;
                    }
                }
                let lo = min.ceil().to_integer();
                let hi = max.floor().to_integer() - 1;
                match (i64::try_from(lo), i64::try_from(hi)) {
                    (Ok(lo), Ok(hi)) => (lo, hi),
                    _ => return Err(Error::InvalidArgument("pi0 range overflows i64".into())),
                }
            }
        };
        for pi0 in lo..=hi {
            out.push((pi.clone(), pi0));
        }
    }
    Ok(out)
}

/// `(pi, pi0)` pairs of [`enumerate_splits`].
pub fn split_data(n: usize, space: &SearchSpace) -> Result<Vec<(Vec<i64>, i64)>> {
    let bounds = vec![(Rational::zero(), Rational::from(BigInt::from(1))); n];
    enumerate_split_data(n, space, &bounds)
}

/// All splits of the family over `n` integer coordinates. Without an
/// explicit `pi0` range the variables are taken to lie in `[0, 1]`.
pub fn enumerate_splits(n: usize, space: &SearchSpace) -> Result<Vec<Disjunction>> {
    split_data(n, space)?
        .into_iter()
        .map(|(pi, pi0)| split_i64(&pi, pi0, n, 0))
        .collect()
}
