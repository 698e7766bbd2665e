//! Exact rational helpers on top of [`BigRational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats as `p/q` in lowest terms, always with an explicit denominator.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Integers without a denominator, everything else as `p/q`.
pub fn display(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        to_pq(r)
    }
}

/// Parses `p/q`, `p` or a signed variant of either.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Integer power with a possibly negative base.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Largest integer not exceeding `r`.
pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse("-1/330").unwrap(), ratio(-1, 330));
        assert_eq!(parse(" 7 ").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(to_pq(&int(4)), "4/1");
        assert_eq!(to_pq(&ratio(-2, 8)), "-1/4");
        assert_eq!(display(&int(32995)), "32995");
        assert_eq!(display(&ratio(71, 4)), "71/4");
    }

    #[test]
    fn negative_powers_keep_sign() {
        assert_eq!(pow(&int(-2), 3), int(-8));
        assert_eq!(pow(&ratio(5, 2), 2), ratio(25, 4));
        assert_eq!(pow(&int(9), 0), int(1));
    }
}
