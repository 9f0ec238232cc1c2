//! Exact rational helpers shared by every module.
//!
//! Rationals are `num_rational::BigRational`, which keeps numerator and
//! denominator coprime with a positive denominator. The text form used in
//! series files and reports is always `p/q`, even for integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type ExactRational = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Always renders as `p/q`.
pub fn fmt_rational(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, `p` or `-p/q`. Whitespace around the value is ignored.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let valid = |t: &str, signed: bool| {
        let t = if signed {
            t.strip_prefix('-').unwrap_or(t)
        } else {
            t
        };
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(n, true) || !valid(d, false) {
        return Err(bad());
    }
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn floor_i64(r: &ExactRational) -> i64 {
    r.floor().to_integer().to_i64().expect("exponent out of i64 range")
}

pub fn ceil_i64(r: &ExactRational) -> i64 {
    r.ceil().to_integer().to_i64().expect("exponent out of i64 range")
}

/// Denominator of a rational as `u64`.
pub fn denom_u64(r: &ExactRational) -> u64 {
    r.denom().to_u64().expect("denominator out of u64 range")
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Smallest non-negative integer `m` with `m*m >= x`, for `x >= 0`.
pub fn ceil_sqrt(x: &ExactRational) -> i64 {
    if !x.is_positive() {
        return 0;
    }
    let c = x.ceil().to_integer();
    let mut r = num_integer::Roots::sqrt(&c);
    if &r * &r < c {
        r += BigInt::one();
    }
    r.to_i64().expect("window out of i64 range")
}
