//! Exact rational helpers shared by every module.
//!
//! All abscissae, sample values, resolutions and frequencies are carried as
//! [`Rational`] (arbitrary precision), so cell assignment and tolerance
//! comparisons never depend on floating point rounding.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as an exact rational")]
pub struct ParseRationalError {
    pub input: String,
}

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, a plain integer, or a decimal such as `-0.05` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_string() };
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let n = BigInt::from_str(&digits).map_err(|_| err())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(n, d);
    Ok(if negative { -r } else { r })
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `⌊r⌋` as an `i64`.
///
/// Panics when the floor does not fit; every caller works with cell indices
/// of functions bounded by a few units over grids of at most ~10^7 cells.
pub fn floor_i64(r: &Rational) -> i64 {
    r.numer()
        .div_floor(r.denom())
        .to_i64()
        .expect("cell index exceeds i64 range")
}

/// `⌈r⌉` as an `i64`.
pub fn ceil_i64(r: &Rational) -> i64 {
    r.numer()
        .div_ceil(r.denom())
        .to_i64()
        .expect("value exceeds i64 range")
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Lossy conversion used only for reporting and plotting.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn min(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-2/6").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rational("0.37").unwrap(), ratio(37, 100));
        assert_eq!(parse_rational("-0.05").unwrap(), ratio(-1, 20));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("2.").unwrap(), int(2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "abc", "1.2.3", "-", ".", "1e-3", "0x10"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn floor_and_ceil_round_toward_infinities() {
        assert_eq!(floor_i64(&ratio(-1, 2)), -1);
        assert_eq!(ceil_i64(&ratio(-1, 2)), 0);
        assert_eq!(floor_i64(&ratio(7, 2)), 3);
        assert_eq!(ceil_i64(&ratio(7, 2)), 4);
        assert_eq!(ceil_i64(&int(3)), 3);
    }

    #[test]
    fn format_round_trips() {
        for r in [ratio(5, 3), int(-4), ratio(-7, 12), int(0)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }
}
