//! Arbitrary-precision rationals.
//!
//! Backed by `num_rational::BigRational`, which keeps the denominator positive
//! and the fraction reduced after every operation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`; whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Canonical string form: `"p"` when the denominator is one, else `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Largest f64 that is `<= r`.
pub fn to_f64_down(r: &Rational) -> f64 {
    let f = approx_f64(r);
    if !f.is_finite() {
        return if r.is_negative() { f64::NEG_INFINITY } else { f64::MAX };
    }
    let mut f = f;
    while let Some(q) = Rational::from_float(f) {
        if q <= *r {
            break;
        }
        f = f.next_down();
    }
    f
}

/// Smallest f64 that is `>= r`.
pub fn to_f64_up(r: &Rational) -> f64 {
    let f = approx_f64(r);
    if !f.is_finite() {
        return if r.is_negative() { f64::MIN } else { f64::INFINITY };
    }
    let mut f = f;
    while let Some(q) = Rational::from_float(f) {
        if q >= *r {
            break;
        }
        f = f.next_up();
    }
    f
}

/// Nearest-ish f64; exact big numerators and denominators are shifted first so
/// the conversion does not overflow.
pub fn approx_f64(r: &Rational) -> f64 {
    if let Some(f) = r.to_f64() {
        if f.is_finite() && (f != 0.0 || r.is_zero()) {
            return f;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        r / Rational::from_integer(BigInt::one() << shift as usize)
    } else {
        r * Rational::from_integer(BigInt::one() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift.clamp(-2000, 2000) as i32)
}

/// Rational from an f64 value (exact binary expansion).
pub fn from_f64(f: f64) -> Rational {
    Rational::from_float(f).unwrap_or_else(Rational::zero)
}

/// Rounds `r` down to a multiple of `2^-bits`.
pub fn round_down_dyadic(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = r * Rational::from_integer(scale.clone());
    Rational::new(floor(&scaled), scale)
}

/// Rounds `r` up to a multiple of `2^-bits`.
pub fn round_up_dyadic(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = r * Rational::from_integer(scale.clone());
    Rational::new(ceil(&scaled), scale)
}

/// A dyadic upper bound for `sqrt(x)` within `2^-bits`.
pub fn sqrt_upper(x: &Rational, bits: u32) -> Rational {
    assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * bits as usize);
    let n = ceil(&(x * Rational::from_integer(scale)));
    let mut r = n.sqrt();
    if &r * &r < n {
        r += 1;
    }
    Rational::new(r, BigInt::one() << bits as usize)
}

/// A dyadic lower bound for `sqrt(x)` within `2^-bits`.
pub fn sqrt_lower(x: &Rational, bits: u32) -> Rational {
    assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * bits as usize);
    let n = floor(&(x * Rational::from_integer(scale)));
    Rational::new(n.sqrt(), BigInt::one() << bits as usize)
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_canonical() {
        assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
        assert_eq!(format_rational(&parse_rational(" 10 ").unwrap()), "10");
        assert_eq!(format_rational(&parse_rational("0/7").unwrap()), "0");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn directed_rounding_brackets_value() {
        let third = rat(1, 3);
        let lo = to_f64_down(&third);
        let hi = to_f64_up(&third);
        assert!(from_f64(lo) <= third && third <= from_f64(hi));
        assert!(lo < hi);
        let two = int(2);
        assert_eq!(to_f64_down(&two), 2.0);
        assert_eq!(to_f64_up(&two), 2.0);
    }

    #[test]
    fn sqrt_bounds_bracket() {
        for x in [rat(2, 1), rat(1, 7), rat(10_000, 3), rat(9, 4)] {
            let u = sqrt_upper(&x, 60);
            let l = sqrt_lower(&x, 60);
            assert!(&l * &l <= x && x <= &u * &u);
            assert!(&u - &l < rat(1, 1 << 40));
        }
    }

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(floor(&rat(-3, 2)), BigInt::from(-2));
        assert_eq!(ceil(&rat(-3, 2)), BigInt::from(-1));
        assert_eq!(ceil(&rat(4, 2)), BigInt::from(2));
    }
}
