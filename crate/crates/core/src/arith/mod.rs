//! Exact arithmetic substrate: rationals, Laurent polynomials in the symbolic
//! prime `q`, multivariate polynomials over Q and rational functions in `t`.

pub mod expr;
pub mod multipoly;
pub mod qpoly;
pub mod ratfun;
pub mod upoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub use multipoly::MultiPoly;
pub use qpoly::{QFrac, QPoly};
pub use ratfun::{Atom, RatFun, SpecializedRatFun};
pub use upoly::UPoly;

/// Arbitrary-precision rational number.
pub type BigRat = BigRational;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRat {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"a"` or `"a/b"` with optional sign.
pub fn parse_rat(s: &str) -> Option<BigRat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Writes `c * var^exp` as one summand of a sum in human notation.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    c: &BigRat,
    var: &str,
    exp: i64,
    first: bool,
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if exp == 0 {
        return write!(f, "{abs}");
    }
    if !abs.is_one() {
        write!(f, "{abs}*")?;
    }
    if exp == 1 {
        write!(f, "{var}")
    } else {
        write!(f, "{var}^{exp}")
    }
}
