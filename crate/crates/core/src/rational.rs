//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Lowest terms with positive denominator; integers still carry `/1`.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn pow(x: &Q, e: usize) -> Q {
    let mut r = one();
    for _ in 0..e {
        r *= x;
    }
    r
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

pub fn serialize_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

pub fn parse_vec(v: &[String]) -> Result<Vec<Q>> {
    v.iter().map(|s| parse_q(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_is_lowest_terms() {
        assert_eq!(fmt_q(&frac(4, -6)), "-2/3");
        assert_eq!(fmt_q(&q(5)), "5/1");
        assert_eq!(parse_q("10/4").unwrap(), frac(5, 2));
        assert_eq!(parse_q("-7").unwrap(), q(-7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }
}
