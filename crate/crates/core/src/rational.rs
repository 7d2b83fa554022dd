//! Small helpers around exact rationals.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `±1` from a sign flag.
pub fn sign(negative: bool) -> BigRational {
    if negative {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

/// Parse `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Always `p/q`, with `q >= 1`.
pub fn to_fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// `base^exp` when the result is rational; `base` must be positive unless
/// `exp` is an integer.
pub fn rational_pow(base: &BigRational, exp: &BigRational) -> Option<BigRational> {
    if exp.is_zero() {
        return Some(BigRational::one());
    }
    if base.is_zero() {
        return if exp.is_positive() { Some(BigRational::zero()) } else { None };
    }
    let q: u32 = exp.denom().try_into().ok()?;
    let p: i64 = exp.numer().try_into().ok()?;
    let root = if q == 1 {
        base.clone()
    } else {
        if base.is_negative() {
            return None;
        }
        BigRational::new(exact_root(base.numer(), q)?, exact_root(base.denom(), q)?)
    };
    let mag = num_traits::pow(root, p.unsigned_abs() as usize);
    if p < 0 {
        Some(mag.recip())
    } else {
        Some(mag)
    }
}
