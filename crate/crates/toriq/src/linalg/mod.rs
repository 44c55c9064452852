//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision: `Int` is a big integer, `Rat` a
//! normalized big rational (gcd(|p|, q) = 1, q > 0, zero is 0/1). There is no
//! floating point in this crate. The matrix types are dense and row-major;
//! zero rows or columns are legal so that maps into and out of
//! zero-dimensional spaces compose as expected.

mod matq;
mod matz;

pub use matq::{MatQ, Nullspace};
pub use matz::{MatZ, Snf};

use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Parses `p`, `-p`, or `p/q` into a normalized rational.
///
/// `num_rational`'s own `FromStr` panics on a zero denominator, so the split
/// is done here and guarded.
pub fn rat_from_str(s: &str) -> Result<Rat, LinalgError> {
    let bad = || LinalgError::BadRational(s.to_string());
    let (num_part, den_part) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = Int::from_str(num_part.trim()).map_err(|_| bad())?;
    let den = match den_part {
        Some(d) => Int::from_str(d.trim()).map_err(|_| bad())?,
        None => Int::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Renders a rational as `p` or `p/q`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Extended gcd returning (g, x, y) with g = ax + by and g >= 0.
pub(crate) fn xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let ext = num_integer::Integer::extended_gcd(a, b);
    if ext.gcd.is_negative() {
        (-ext.gcd, -ext.x, -ext.y)
    } else {
        (ext.gcd, ext.x, ext.y)
    }
}
