//! Exact rational time.

use alloc::string::String;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A point in (or a duration of) non-negative real time, kept exact.
pub type Time = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational `{0}` (expected `p` or `p/q`)")]
pub struct ParseTimeError(pub String);

/// Parses `p` or `p/q` with integer `p`, positive `q`.
pub fn parse_time(text: &str) -> Result<Time, ParseTimeError> {
    let err = || ParseTimeError(String::from(text));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if !den.is_positive() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

pub fn int(n: i64) -> Time {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Time {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Time {
    Time::zero()
}

/// `2^{-i}`.
pub fn pow2_inv(i: usize) -> Time {
    BigRational::new(BigInt::one(), BigInt::one() << i)
}

/// Least positive rational that is an integer multiple of both `a` and `b`.
///
/// Both arguments must be positive.
pub fn rational_lcm(a: &Time, b: &Time) -> Time {
    debug_assert!(a.is_positive() && b.is_positive());
    let num = a.numer().lcm(b.numer());
    let den = a.denom().gcd(b.denom());
    BigRational::new(num, den)
}

/// `t / step` when it is a non-negative integer.
pub fn exact_quotient(t: &Time, step: &Time) -> Option<usize> {
    let q = t / step;
    if q.is_integer() && !q.is_negative() {
        usize::try_from(q.to_integer()).ok()
    } else {
        None
    }
}

/// Smallest integer `n` with `n ≥ x`.
pub fn ceil_to_usize(x: &Time) -> Option<usize> {
    usize::try_from(x.ceil().to_integer()).ok()
}

/// Largest integer `n` with `n ≤ x`.
pub fn floor_to_usize(x: &Time) -> Option<usize> {
    usize::try_from(x.floor().to_integer()).ok()
}

pub fn from_usize(n: usize) -> Time {
    BigRational::from_integer(BigInt::from(n))
}
