//! Complex rationals, complex balls, and certified isolation of complex roots.
//!
//! Root disks follow the Gerschgorin-type inclusion for Weierstrass
//! corrections: for approximations `z_i` of the `m` roots of `p`, every root
//! lies in the union of the disks `|z - z_i| <= m |W_i|` with
//! `W_i = p(z_i) / (lc(p) * prod_{j != i} (z_i - z_j))`, and a connected group
//! of `k` disks holds exactly `k` roots. Pairwise disjoint disks therefore each
//! isolate one root.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::IntPoly;
use super::rational::{approx_f64, from_f64, int, round_down_dyadic, round_up_dyadic, sqrt_lower, sqrt_upper, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexRat {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexRat { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexRat { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        ComplexRat::new(self.re.clone(), -&self.im)
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        ComplexRat::new(&self.re / &n, -&self.im / &n)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ComplexRat::new(&self.re * r, &self.im * r)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexRat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Rounds both parts to the nearest multiple of `2^-bits` below.
    pub fn rounded(&self, bits: u32) -> Self {
        ComplexRat::new(round_down_dyadic(&self.re, bits), round_down_dyadic(&self.im, bits))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(approx_f64(&self.re), approx_f64(&self.im))
    }

    pub fn from_c64(z: Complex64) -> Self {
        ComplexRat::new(from_f64(z.re), from_f64(z.im))
    }

    pub fn abs_upper(&self, bits: u32) -> Rational {
        sqrt_upper(&self.norm_sqr(), bits)
    }

    pub fn abs_lower(&self, bits: u32) -> Rational {
        sqrt_lower(&self.norm_sqr(), bits)
    }
}

impl Add for &ComplexRat {
    type Output = ComplexRat;
    fn add(self, o: &ComplexRat) -> ComplexRat {
        ComplexRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &ComplexRat {
    type Output = ComplexRat;
    fn sub(self, o: &ComplexRat) -> ComplexRat {
        ComplexRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &ComplexRat {
    type Output = ComplexRat;
    fn mul(self, o: &ComplexRat) -> ComplexRat {
        ComplexRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &ComplexRat {
    type Output = ComplexRat;
    fn neg(self) -> ComplexRat {
        ComplexRat::new(-&self.re, -&self.im)
    }
}

const BALL_BITS: u32 = 64;

/// Closed disk `{z : |z - center| <= radius}` used for rigorous enclosures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: ComplexRat,
    pub radius: Rational,
}

impl Ball {
    pub fn new(center: ComplexRat, radius: Rational) -> Self {
        Ball { center, radius }
    }

    pub fn exact(center: ComplexRat) -> Self {
        Ball { center, radius: Rational::zero() }
    }

    pub fn real(r: Rational) -> Self {
        Ball::exact(ComplexRat::real(r))
    }

    pub fn abs_upper(&self) -> Rational {
        self.center.abs_upper(BALL_BITS) + &self.radius
    }

    pub fn abs_lower(&self) -> Rational {
        let l = self.center.abs_lower(BALL_BITS) - &self.radius;
        if l.is_negative() {
            Rational::zero()
        } else {
            l
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.center.norm_sqr() <= &self.radius * &self.radius
    }

    pub fn contains(&self, z: &ComplexRat) -> bool {
        (&self.center - z).norm_sqr() <= &self.radius * &self.radius
    }

    /// Whether the ball meets the real axis.
    pub fn meets_real_axis(&self) -> bool {
        self.center.im.abs() <= self.radius
    }

    pub fn disjoint(&self, other: &Ball) -> bool {
        let d = (&self.center - &other.center).norm_sqr();
        let r = &self.radius + &other.radius;
        d > &r * &r
    }

    pub fn conj(&self) -> Ball {
        Ball::new(self.center.conj(), self.radius.clone())
    }

    /// Rounds the center to `bits` bits, absorbing the error into the radius.
    pub fn rounded(&self, bits: u32) -> Ball {
        let c = self.center.rounded(bits);
        let err = Rational::new(2.into(), num_bigint::BigInt::one() << bits as usize);
        Ball::new(c, &self.radius + err)
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let c = &self.center * &o.center;
        let r = self.center.abs_upper(BALL_BITS) * &o.radius
            + o.center.abs_upper(BALL_BITS) * &self.radius
            + &self.radius * &o.radius;
        Ball::new(c, r)
    }

    pub fn add(&self, o: &Ball) -> Ball {
        Ball::new(&self.center + &o.center, &self.radius + &o.radius)
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        Ball::new(&self.center - &o.center, &self.radius + &o.radius)
    }

    pub fn scale(&self, r: &Rational) -> Ball {
        Ball::new(self.center.scale(r), &self.radius * r.abs())
    }

    pub fn pow(&self, mut e: u64, bits: u32) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::exact(ComplexRat::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rounded(bits);
            }
            base = base.mul(&base).rounded(bits);
            e >>= 1;
        }
        acc
    }

    /// Enclosure of `1 / z` for every `z` in the ball; `None` if the ball holds 0.
    pub fn inv(&self) -> Option<Ball> {
        let low = self.abs_lower();
        if !low.is_positive() {
            return None;
        }
        let c = self.center.inv();
        // |1/z - 1/c| = |z - c| / (|z||c|)
        let r = &self.radius / (&low * self.center.abs_lower(BALL_BITS));
        Some(Ball::new(c, r))
    }

    /// Enclosure of the real part.
    pub fn re_interval(&self) -> (Rational, Rational) {
        (&self.center.re - &self.radius, &self.center.re + &self.radius)
    }

    pub fn im_interval(&self) -> (Rational, Rational) {
        (&self.center.im - &self.radius, &self.center.im + &self.radius)
    }

    /// Enclosure of `|z|^2` over the ball.
    pub fn norm_sqr_interval(&self) -> (Rational, Rational) {
        let lo = self.abs_lower();
        let hi = self.abs_upper();
        (&lo * &lo, &hi * &hi)
    }

    pub fn to_c64(&self) -> Complex64 {
        self.center.to_c64()
    }
}

/// Ball Horner evaluation of an integer polynomial.
pub fn eval_ball(p: &IntPoly, z: &Ball, bits: u32) -> Ball {
    let mut acc = Ball::exact(ComplexRat::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z).rounded(bits);
        acc.center.re += Rational::from_integer(c.clone());
    }
    acc
}

/// Exact evaluation at a complex rational point.
pub fn eval_exact(p: &IntPoly, z: &ComplexRat) -> ComplexRat {
    let mut acc = ComplexRat::zero();
    for c in p.coeffs().iter().rev() {
        acc = &acc * z;
        acc.re += Rational::from_integer(c.clone());
    }
    acc
}

fn aberth_f64(p: &IntPoly) -> Vec<Complex64> {
    let m = p.deg();
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::MAX)).collect();
    let lc = coeffs[m];
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            d = d * z + v;
            v = v * z + c;
        }
        (v, d)
    };
    let radius = approx_f64(&p.root_bound()).max(1.0) * 0.5;
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / m as f64 + 0.4;
            Complex64::from_polar(radius, ang)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..m {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..m {
                if j != i {
                    s += Complex64::new(1.0, 0.0) / (z[i] - z[j]);
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    let _ = lc;
    z
}

/// Certified disjoint root disks for a squarefree polynomial, one per root.
///
/// Precision doubles until the disks separate; `max_bits` caps the effort.
pub fn isolate_complex_roots(p: &IntPoly, max_bits: u32) -> Option<Vec<Ball>> {
    isolate_complex_roots_from(p, 64, max_bits)
}

/// As [`isolate_complex_roots`], starting at `start_bits` of precision.
pub fn isolate_complex_roots_from(p: &IntPoly, start_bits: u32, max_bits: u32) -> Option<Vec<Ball>> {
    let p = p.primitive();
    let m = p.deg();
    if m == 0 {
        return Some(Vec::new());
    }
    if m == 1 {
        let c = p.coeffs();
        let r = Rational::new(-c[0].clone(), c[1].clone());
        return Some(vec![Ball::real(r)]);
    }
    let mut approx: Vec<ComplexRat> = aberth_f64(&p).into_iter().map(ComplexRat::from_c64).collect();
    let lc = Rational::from_integer(p.leading());
    let mut bits = start_bits.max(64);
    while bits <= max_bits {
        approx = approx.iter().map(|z| z.rounded(bits)).collect();
        // Weierstrass (Durand-Kerner) sweeps in exact arithmetic.
        for _ in 0..3 {
            let w = weierstrass(&p, &approx, &lc);
            let Some(w) = w else { break };
            approx = approx
                .iter()
                .zip(&w)
                .map(|(z, wi)| (z - wi).rounded(bits))
                .collect();
        }
        if let Some(w) = weierstrass(&p, &approx, &lc) {
            let balls: Vec<Ball> = approx
                .iter()
                .zip(&w)
                .map(|(z, wi)| Ball::new(z.clone(), wi.abs_upper(bits) * int(m as i64)))
                .collect();
            let disjoint = (0..m).all(|i| (i + 1..m).all(|j| balls[i].disjoint(&balls[j])));
            if disjoint {
                return Some(balls);
            }
        }
        bits *= 2;
    }
    None
}

fn weierstrass(p: &IntPoly, z: &[ComplexRat], lc: &Rational) -> Option<Vec<ComplexRat>> {
    let m = z.len();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut denom = ComplexRat::real(lc.clone());
        for j in 0..m {
            if i != j {
                denom = &denom * &(&z[i] - &z[j]);
            }
        }
        if denom.is_zero() {
            return None;
        }
        out.push(&eval_exact(p, &z[i]) * &denom.inv());
    }
    Some(out)
}

/// Rounds a rational enclosure outward to `bits` bits.
pub fn widen(lo: &Rational, hi: &Rational, bits: u32) -> (Rational, Rational) {
    (round_down_dyadic(lo, bits), round_up_dyadic(hi, bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    #[test]
    fn gaussian_roots_isolated() {
        let p = IntPoly::from_i64s(&[1, 0, 1]);
        let balls = isolate_complex_roots(&p, 1024).unwrap();
        assert_eq!(balls.len(), 2);
        let i = ComplexRat::new(Rational::zero(), Rational::one());
        assert!(balls.iter().any(|b| b.contains(&i)));
        assert!(balls.iter().any(|b| b.contains(&i.conj())));
    }

    #[test]
    fn cubic_with_close_roots() {
        // (x - 1)(x - 1001/1000)(x + 2) scaled to integers
        let a = IntPoly::from_i64s(&[-1, 1]);
        let b = IntPoly::from_i64s(&[-1001, 1000]);
        let c = IntPoly::from_i64s(&[2, 1]);
        let p = &(&a * &b) * &c;
        let balls = isolate_complex_roots(&p, 4096).unwrap();
        assert_eq!(balls.len(), 3);
        assert!(balls.iter().any(|x| x.contains(&ComplexRat::real(rat(1001, 1000)))));
    }

    #[test]
    fn ball_inverse_and_power() {
        let b = Ball::new(ComplexRat::new(rat(3, 5), rat(4, 5)), rat(1, 1000));
        let p = b.pow(4, 80);
        let exact = ComplexRat::new(rat(3, 5), rat(4, 5)).pow(4);
        assert!(p.contains(&exact));
        let inv = b.inv().unwrap();
        assert!(inv.contains(&ComplexRat::new(rat(3, 5), rat(-4, 5))));
    }
}
