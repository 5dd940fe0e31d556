//! Rigorous rational enclosures of pi, cosine and sine.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::RatInterval;
use super::rational::{floor, int, round_down_dyadic, round_up_dyadic, Rational};

fn eps(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// Enclosure of `atan(1/k)` for integer `k >= 2`; the alternating series
/// brackets the value between consecutive partial sums.
fn atan_inv(k: i64, bits: u32) -> RatInterval {
    let x = Rational::new(BigInt::one(), BigInt::from(k));
    let x2 = &x * &x;
    let mut term = x.clone();
    let mut sum = Rational::zero();
    let mut n = 0i64;
    let tol = eps(bits + 4);
    loop {
        let t = &term / int(2 * n + 1);
        let next = if n % 2 == 0 { &sum + &t } else { &sum - &t };
        if t < tol {
            let (lo, hi) = if sum < next { (sum, next) } else { (next, sum) };
            return RatInterval::new(round_down_dyadic(&lo, bits + 8), round_up_dyadic(&hi, bits + 8));
        }
        sum = next;
        term = &term * &x2;
        n += 1;
    }
}

/// Enclosure of pi of width about `2^-bits` (Machin's formula).
pub fn pi(bits: u32) -> RatInterval {
    let a = atan_inv(5, bits + 6);
    let b = atan_inv(239, bits + 6);
    let sixteen = RatInterval::point(int(16));
    let four = RatInterval::point(int(4));
    &(&sixteen * &a) - &(&four * &b)
}

/// Enclosures of `(cos x, sin x)` at a rational point, by Taylor series with
/// the Lagrange remainder `|x|^n / n!`.
pub fn cos_sin_point(x: &Rational, bits: u32) -> (RatInterval, RatInterval) {
    let tol = eps(bits + 4);
    let mut cos = Rational::zero();
    let mut sin = Rational::zero();
    let mut term = Rational::one(); // x^n / n!
    let mut n = 0u32;
    let ax = x.abs();
    let mut slack = Rational::zero();
    loop {
        let rounded = round_down_dyadic(&term, bits + 16);
        slack += &term - &rounded + eps(bits + 16);
        match n % 4 {
            0 => cos += &rounded,
            1 => sin += &rounded,
            2 => cos -= &rounded,
            _ => sin -= &rounded,
        }
        n += 1;
        term = &term * x / int(n as i64);
        // remainder after using terms 0..n-1 is bounded by |x|^n / n!
        if Rational::from_integer(n.into()) > ax && term.abs() < tol {
            break;
        }
    }
    let r = term.abs() + slack;
    (
        RatInterval::new(&cos - &r, &cos + &r),
        RatInterval::new(&sin - &r, &sin + &r),
    )
}

/// True if the interval certainly avoids every `t0 + 2 pi k`, with `t0` given
/// as a multiple of pi (`0` or `1`).
fn avoids_multiples(t: &RatInterval, odd: bool, pi: &RatInterval) -> bool {
    let off = i64::from(odd);
    let start = floor(&(&t.lo / (&pi.lo * int(2)))).min(floor(&(&t.lo / (&pi.hi * int(2))))) - 1;
    let mut k = start;
    loop {
        let m = Rational::from_integer(&k * 2 + off);
        let cand = if m.is_negative() {
            RatInterval::new(&m * &pi.hi, &m * &pi.lo)
        } else {
            RatInterval::new(&m * &pi.lo, &m * &pi.hi)
        };
        if cand.lo > t.hi {
            return true;
        }
        if cand.hi >= t.lo {
            return false;
        }
        k += 1;
    }
}

/// Enclosure of `{cos t : t in I}`.
pub fn cos_range(t: &RatInterval, bits: u32) -> RatInterval {
    let p = pi(bits);
    let (c_lo, _) = cos_sin_point(&t.lo, bits);
    let (c_hi, _) = cos_sin_point(&t.hi, bits);
    let mut lo = (&c_lo.lo).min(&c_hi.lo).clone();
    let mut hi = (&c_lo.hi).max(&c_hi.hi).clone();
    if !avoids_multiples(t, false, &p) {
        hi = int(1);
    }
    if !avoids_multiples(t, true, &p) {
        lo = int(-1);
    }
    RatInterval::new(lo.max(int(-1)), hi.min(int(1)))
}

/// Enclosures of `(cos, sin)` of `2 pi k / m`.
pub fn root_of_unity(k: i64, m: u64, bits: u32) -> (RatInterval, RatInterval) {
    let k = k.rem_euclid(m as i64);
    let p = pi(bits + 8);
    let f = Rational::new(BigInt::from(2 * k), BigInt::from(m));
    let angle = RatInterval::new(&p.lo * &f, &p.hi * &f);
    let mid = (&angle.lo + &angle.hi) / int(2);
    let half = (&angle.hi - &angle.lo) / int(2);
    let (c, s) = cos_sin_point(&mid, bits + 8);
    // |d cos| and |d sin| are at most 1
    (
        RatInterval::new(&c.lo - &half, &c.hi + &half),
        RatInterval::new(&s.lo - &half, &s.hi + &half),
    )
}

/// Enclosure of `{sin t : t in I}`, via `sin t = cos(t - pi/2)`.
pub fn sin_range(t: &RatInterval, bits: u32) -> RatInterval {
    let p = pi(bits + 4);
    let half = RatInterval::new(&p.lo / int(2), &p.hi / int(2));
    cos_range(&(t - &half), bits)
}

/// `2 atanh(t)` for rational `0 <= t < 1`, with the geometric tail bound.
fn two_atanh(t: &Rational, bits: u32) -> RatInterval {
    let tol = eps(bits + 4);
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = Rational::zero();
    let mut k = 0i64;
    loop {
        let term = &power / int(2 * k + 1);
        sum += round_down_dyadic(&term, bits + 16);
        power = &power * &t2;
        k += 1;
        let tail = &power / (int(2 * k + 1) * (Rational::one() - &t2));
        if tail < tol {
            let slack = tail + Rational::from_integer(k.into()) * eps(bits + 16);
            return RatInterval::new(&sum * int(2), (&sum + slack) * int(2));
        }
    }
}

/// Enclosure of `ln x` for rational `x > 0`.
pub fn ln(x: &Rational, bits: u32) -> RatInterval {
    assert!(x.is_positive(), "ln of nonpositive number");
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let pow2 = |e: i64| {
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as usize)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    let mut y = x / pow2(e);
    while y < Rational::one() {
        e -= 1;
        y = x / pow2(e);
    }
    while y >= int(2) {
        e += 1;
        y = x / pow2(e);
    }
    let extra = 64 - (e.unsigned_abs() | 1).leading_zeros();
    let ly = two_atanh(&((&y - int(1)) / (&y + int(1))), bits + 4);
    let l2 = two_atanh(&Rational::new(BigInt::one(), BigInt::from(3)), bits + 4 + extra);
    let scaled = if e >= 0 {
        RatInterval::new(&l2.lo * int(e), &l2.hi * int(e))
    } else {
        RatInterval::new(&l2.hi * int(e), &l2.lo * int(e))
    };
    &ly + &scaled
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{from_f64, rat};

    #[test]
    fn pi_bracket() {
        let p = pi(80);
        assert!(p.lo < from_f64(std::f64::consts::PI + 1e-15));
        assert!(p.hi > from_f64(std::f64::consts::PI - 1e-15));
        assert!(p.width() < rat(1, 1 << 60));
    }

    #[test]
    fn logarithms() {
        for (x, want) in [(rat(3, 2), 1.5f64.ln()), (int(10), 10f64.ln()), (rat(1, 7), (1.0f64 / 7.0).ln()), (int(1), 0.0)] {
            let l = ln(&x, 60);
            assert!(l.lo <= from_f64(want + 1e-12) && from_f64(want - 1e-12) <= l.hi, "{x}");
            assert!(l.width() < rat(1, 1 << 50));
        }
        let s = sin_range(&RatInterval::new(int(1), int(2)), 40);
        assert_eq!(s.hi, int(1));
    }

    #[test]
    fn cos_ranges() {
        let p = pi(60);
        let around_pi = RatInterval::new(int(3), int(4));
        assert_eq!(cos_range(&around_pi, 60).lo, int(-1));
        let small = RatInterval::new(rat(1, 10), rat(2, 10));
        let r = cos_range(&small, 60);
        assert!(r.hi < int(1) && r.lo > rat(97, 100));
        let (c, s) = root_of_unity(1, 4, 60);
        assert!(c.contains_zero() && s.contains(&int(1)) || s.lo > rat(99, 100));
        let (c, _) = root_of_unity(1, 3, 60);
        assert!(c.contains(&rat(-1, 2)));
        assert!(p.lo > int(3));
    }
}
