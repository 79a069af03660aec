//! Exact scalar arithmetic: arbitrary-precision rationals and their
//! Gaussian extension.
//!
//! [`Rat`] is the single scalar type for all polynomial and matrix algebra;
//! [`CRat`] adjoins the imaginary unit for Dirac block matrices. Both are
//! aliases into `num` so the full trait ecosystem (`Zero`, `One`, `Signed`)
//! applies unchanged.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Gaussian rational: complex number with exact rational parts.
pub type CRat = num::complex::Complex<Rat>;

/// `n/d` as an exact rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as an exact rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Purely real Gaussian rational.
pub fn cre(re: Rat) -> CRat {
    CRat::new(re, Rat::zero())
}

/// Purely imaginary Gaussian rational `im·i`.
pub fn cim(im: Rat) -> CRat {
    CRat::new(Rat::zero(), im)
}

/// The imaginary unit.
pub fn ci() -> CRat {
    cim(Rat::one())
}

/// Nearest `f64` to an exact rational.
pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses a rational scalar from text.
///
/// Accepted forms: integers (`-12`), fractions (`3/2`), and finite decimals
/// (`0.25`, `-.5`). Exponent notation is rejected so that every accepted
/// string denotes an exact value the writer can see.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational from {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let (sign, body) = match t.as_bytes()[0] {
        b'+' => (1, &t[1..]),
        b'-' => (-1, &t[1..]),
        _ => (1, t),
    };
    if body.is_empty() {
        return Err(bad());
    }
    // After the optional leading sign only digit groups are allowed; going
    // through `BigInt::from_str` directly would quietly accept inner signs.
    let digits = |part: &str| -> Result<BigInt> {
        if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        part.parse().map_err(|_| bad())
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        let n = digits(num)?;
        let d = digits(den)?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        Rat::new(n, d)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if whole.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let w = if whole.is_empty() { BigInt::zero() } else { digits(whole)? };
        let scale = num::pow::pow(BigInt::from(10), frac.len());
        let f = if frac.is_empty() { BigInt::zero() } else { digits(frac)? };
        Rat::new(w * &scale + f, scale)
    } else {
        Rat::from_integer(digits(body)?)
    };
    Ok(if sign < 0 { -value } else { value })
}

/// Parses a comma-separated triple of rationals, e.g. `"1,1,3/2"`.
pub fn parse_rat_triple(s: &str) -> Result<[Rat; 3]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "expected three comma-separated values, got {} in {s:?}",
            parts.len()
        )));
    }
    Ok([parse_rat(parts[0])?, parse_rat(parts[1])?, parse_rat(parts[2])?])
}

/// Canonical text form `p/q` (or `p` for integers), used in JSON output.
pub fn format_rat(x: &Rat) -> String {
    x.to_string()
}

/// Least common multiple of two positive integers.
pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    num::integer::lcm(a.clone(), b.clone())
}

/// Least common multiple of the denominators of a rational sequence.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = lcm_big(&l, x.denom());
    }
    l
}

/// Absolute value helper mirroring `Signed::abs` for call-site clarity.
pub fn rat_abs(x: &Rat) -> Rat {
    x.abs()
}
