//! Helpers for exact rationals: parsing, formatting and directed rounding to `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"num/den"`, a bare integer, or a finite decimal such as `"-0.125"`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let int_val: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits.parse().map_err(|_| bad())?
        };
        let frac_val: BigInt = frac_part.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10u8), frac_part.len());
        let magnitude = BigRational::new(int_val * &scale + frac_val, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let num: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(num))
}

/// Renders a rational as `"num/den"` (denominator always printed).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidArgument(format!("non-finite value {x}")))
}

fn nearest_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Smallest `f64` that is `>= r`.
pub fn upper_f64(r: &BigRational) -> f64 {
    let x = nearest_f64(r);
    if !x.is_finite() {
        return x;
    }
    match BigRational::from_float(x) {
        Some(exact) if &exact < r => x.next_up(),
        _ => x,
    }
}

/// Largest `f64` that is `<= r`.
pub fn lower_f64(r: &BigRational) -> f64 {
    let x = nearest_f64(r);
    if !x.is_finite() {
        return x;
    }
    match BigRational::from_float(x) {
        Some(exact) if &exact > r => x.next_down(),
        _ => x,
    }
}

/// `p`-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation of a rational; `None` for zero.
pub fn valuation(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        None
    } else {
        Some(int_valuation(r.numer(), p) - int_valuation(r.denom(), p))
    }
}

/// `p^e` as an exact rational (negative exponents allowed).
pub fn rational_pow(p: u64, e: i64) -> BigRational {
    let base = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

pub(crate) fn abs_rational(r: &BigRational) -> BigRational {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}
