//! Exact rational scalars and small helpers shared across the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number used everywhere in this crate.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

pub fn is_nonneg(x: &Rat) -> bool {
    !x.is_negative()
}

/// Parses "3", "-5/2" or "0".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::parse(format!("bad rational '{s}'")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::parse(format!("bad rational '{s}'")))?;
    if d.is_zero() {
        return Err(Error::parse(format!("zero denominator in '{s}'")));
    }
    Ok(Rat::new(n, d))
}

/// Renders a rational as "p" or "p/q".
pub fn fmt_rat(x: &Rat) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Least common multiple of the denominators of an iterator of rationals.
pub fn denominator_lcm<'a>(xs: impl Iterator<Item = &'a Rat>) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = num_integer::lcm(l, x.denom().clone());
    }
    l
}
