//! Exact rational scalars and the small amount of number theory the rest of
//! the crate needs.
//!
//! `Rational` is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_bigint(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

pub fn zeros(len: usize) -> Vec<Rational> {
    vec![Rational::zero(); len]
}

/// Parses `"p/q"` or `"p"`. Zero denominators and stray whitespace are
/// rejected.
pub fn parse(text: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"`, with `/q` omitted for integers.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_integer_vec(values: &[Rational]) -> bool {
    values.iter().all(|v| v.is_integer())
}

/// Positive factor that turns `values` into coprime integers. Returns one for
/// the zero vector.
pub fn primitive_scale(values: &[Rational]) -> Rational {
    let mut den_lcm = BigInt::one();
    for v in values.iter().filter(|v| !v.is_zero()) {
        den_lcm = den_lcm.lcm(v.denom());
    }
    let mut num_gcd = BigInt::zero();
    for v in values.iter().filter(|v| !v.is_zero()) {
        let scaled = v.numer() * (&den_lcm / v.denom());
        num_gcd = num_gcd.gcd(&scaled);
    }
    if num_gcd.is_zero() {
        return Rational::one();
    }
    Rational::new(den_lcm, num_gcd.abs())
}

/// Integer view of a rational that is known to be integral.
pub fn to_bigint(value: &Rational) -> Option<BigInt> {
    value.is_integer().then(|| value.numer().clone())
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3/3").unwrap(), int(1));
        assert_eq!(parse("-4/6").unwrap(), frac(-2, 3));
        assert_eq!(format(&frac(-2, 3)), "-2/3");
        assert_eq!(format(&int(7)), "7");
        assert!(parse("1/0").is_err());
        assert!(parse("1.5").is_err());
        assert!(parse(" 1").is_err());
    }

    #[test]
    fn lowest_terms() {
        let r = frac(4, -8);
        assert_eq!(r.numer(), &BigInt::from(-1));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![frac(1, 2), frac(3, 4), int(0)];
        let s = primitive_scale(&v);
        let scaled: Vec<_> = v.iter().map(|x| x * &s).collect();
        assert_eq!(scaled, ints(&[2, 3, 0]));
        assert_eq!(primitive_scale(&ints(&[4, -6])), frac(1, 2));
        assert_eq!(primitive_scale(&zeros(3)), int(1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }
}
