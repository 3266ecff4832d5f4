//! Exact rational scalars.
//!
//! Every quantity in this crate that is not a priori an integer is a [`Rat`]:
//! an arbitrary-precision rational kept in lowest terms with positive
//! denominator. Floating point never enters any result; it is only used as a
//! pruning heuristic inside enumeration, where every candidate is re-verified
//! exactly.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always reduced, denominator >= 1.
pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// True iff the rational is an integer (denominator 1).
pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Nearest integer, ties rounded away from zero.
pub fn round_to_int(x: &Rat) -> BigInt {
    x.round().to_integer()
}

/// Floor as a `BigInt`.
pub fn floor_to_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// Lossy conversion used only for enumeration pruning.
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to separate conversions; good enough for a heuristic.
        let n = x.numer().to_f64().unwrap_or(f64::MAX);
        let d = x.denom().to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Positive gcd of two rationals: gcd(a/b, c/d) = gcd(ad, cb)/(bd), reduced.
pub fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rat::new(num, a.denom() * b.denom())
}

/// Renders `p/q`, or a plain decimal integer string when `q == 1`.
pub fn format_rat(x: &Rat) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p"` or `"p/q"` with optional leading `-`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse rational from {s:?}"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_rationals() {
        assert_eq!(rat_gcd(&rat_int(2), &rat(1, 2)), rat(1, 2));
        assert_eq!(rat_gcd(&rat(3, 2), &rat(1, 2)), rat(1, 2));
        assert_eq!(rat_gcd(&rat_int(4), &rat_int(6)), rat_int(2));
        assert_eq!(rat_gcd(&rat_zero(), &rat(-2, 3)), rat(2, 3));
        assert_eq!(rat_gcd(&rat(4, 3), &rat(2, 3)), rat(2, 3));
    }

    #[test]
    fn format_and_parse_round_trip() {
        for x in [rat_int(7), rat(-3, 4), rat_zero(), rat(22, 7)] {
            assert_eq!(parse_rat(&format_rat(&x)).unwrap(), x);
        }
        assert_eq!(format_rat(&rat_int(5)), "5");
        assert_eq!(format_rat(&rat(5, 10)), "1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(round_to_int(&rat(3, 2)), BigInt::from(2));
        assert_eq!(round_to_int(&rat(-3, 2)), BigInt::from(-2));
        assert_eq!(floor_to_int(&rat(-1, 2)), BigInt::from(-1));
    }
}
