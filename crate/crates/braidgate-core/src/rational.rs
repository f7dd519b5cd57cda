//! Exact rationals.
//!
//! `Rational` is `num_rational::BigRational`: arbitrary-precision, always in
//! lowest terms with a positive denominator, so equality and ordering are
//! literal. This module adds the handful of helpers the rest of the crate
//! leans on (safe inversion, reduction mod 1, integer ceilings).

use crate::error::Error;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// `p/q` from machine integers. Panics if `q == 0`; meant for literals.
pub fn rat(p: i64, q: i64) -> Rational {
    assert!(q != 0, "rational literal with zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Multiplicative inverse, rejecting zero instead of panicking.
pub fn rat_inv(r: &Rational) -> Result<Rational, Error> {
    if r.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(r.recip())
}

/// Representative of `r` in `[0, 1)`: the fractional part `r - floor(r)`.
pub fn mod_one(r: &Rational) -> Rational {
    r - r.floor()
}

/// Smallest integer `>= r`, as a `BigInt`.
pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Smallest positive integer `n` with `1/n <= r`, i.e. `ceil(1/r)`.
/// Errors on `r <= 0` (no such `n`).
pub fn inverse_ceil(r: &Rational) -> Result<BigInt, Error> {
    if !r.is_positive() {
        return Err(Error::BadParams(alloc::string::String::from(
            "precision must be a positive rational",
        )));
    }
    Ok(ceil_int(&r.recip()))
}

/// `1/n` for a positive integer index.
pub fn unit_fraction(n: &BigInt) -> Rational {
    debug_assert!(n.is_positive());
    Rational::new(BigInt::one(), n.clone())
}
