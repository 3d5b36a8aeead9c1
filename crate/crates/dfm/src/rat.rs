//! Exact rational scalars and their canonical `"num/den"` text form.
//!
//! Every number that crosses a file or process boundary is formatted as
//! `numerator/denominator` in lowest terms with the sign on the numerator;
//! nothing in this crate ever goes through floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat_int<T: Into<BigInt>>(n: T) -> Rat {
    Rat::from_integer(n.into())
}

pub fn rat<T: Into<BigInt>, U: Into<BigInt>>(num: T, den: U) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Canonical text form, always `num/den` (so `3` prints as `"3/1"`).
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer. The result is reduced.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Usage(format!("bad rational {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Usage(format!("bad rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Usage(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Decimal expansion of a nonnegative rational with exactly `digits`
/// digits after the point, truncated toward zero.
pub fn decimal_string(r: &Rat, digits: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0>width$}", width = digits)
    }
}

/// Integer square root of a nonnegative `BigInt` (floor).
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative");
    if n.is_zero() || n.is_one() {
        return n.clone();
    }
    let mut x: BigInt = BigInt::one() << (n.bits().div_ceil(2) as usize);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}
