//! Closed intervals with exact rational endpoints.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::poly::IntPoly;
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Sign if the interval excludes zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn abs_upper(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn pow(&self, e: u32) -> RatInterval {
        let mut acc = RatInterval::point(Rational::from_integer(1.into()));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }
}

/// Interval Horner evaluation; encloses `p(x)` for every `x` in `x`.
pub fn eval_interval(p: &IntPoly, x: &RatInterval) -> RatInterval {
    let mut acc = RatInterval::point(Rational::zero());
    for c in p.coeffs().iter().rev() {
        acc = &acc * x;
        let c = Rational::from_integer(c.clone());
        acc = RatInterval::new(&acc.lo + &c, &acc.hi + &c);
    }
    acc
}
