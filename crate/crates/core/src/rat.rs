//! Arbitrary-precision rational scalars.
//!
//! `Rat` is a [`num_rational::BigRational`]: always reduced to lowest terms
//! with a positive denominator, which is exactly the invariant the exact
//! predicates rely on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// `n / d` as a `Rat`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a `Rat`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Sign of `x` as `-1`, `0` or `1`.
pub fn sign(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Nearest `f64` to `x` (for heuristics and diagnostics only).
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses the `num/den` text form (also accepts a bare integer).
pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Canonical `num/den` text form used by all file formats.
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_positive_denominator() {
        let x = rat(-4, -6);
        assert_eq!(x, rat(2, 3));
        assert_eq!(format_rat(&x), "2/3");
        let y = rat(4, -6);
        assert_eq!(format_rat(&y), "-2/3");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["2/3", "-7/5", "0/1", "123456789123456791/987654323"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(format_rat(&x), s);
        }
        assert_eq!(parse_rat("5").unwrap(), rat_int(5));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("a/b").is_none());
    }
}
