//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

/// Integer polynomial, coefficient at index `i` multiplies `x^i`.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `x - c` for an integer `c`.
    pub fn linear_root(c: BigInt) -> Self {
        Self::new(vec![-c, BigInt::one()])
    }

    pub fn monomial(c: BigInt, deg: usize) -> Self {
        let mut v = vec![BigInt::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with zero mapped to 0; convenient where the zero case is excluded.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Divides out the positive content, leaving the sign of every coefficient.
    pub fn content_reduced(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.content();
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        // Homogenised Horner keeps everything integral: q^d * p(n/q).
        let (n, q) = (x.numer(), x.denom());
        let d = self.coeffs.len();
        if d == 0 {
            return Rational::zero();
        }
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &qpow;
            qpow *= q;
        }
        let denom = num_traits::pow(q.clone(), d - 1);
        Rational::new(acc, denom)
    }

    /// Sign of `p(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let (n, q) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &qpow;
            qpow *= q;
        }
        sign(&acc)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `p(x^k)`.
    pub fn compose_power(&self, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::new(v)
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Pseudo-division: `lc(b)^(deg a - deg b + 1) * a = q * b + r`.
    pub fn pseudo_div_rem(&self, b: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(!b.is_zero(), "pseudo-division by zero polynomial");
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return (IntPoly::zero(), self.clone());
        }
        let lb = b.leading();
        let delta = self.deg() - db + 1;
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); delta];
        for k in (0..delta).rev() {
            let top = r[k + db].clone();
            for c in q.iter_mut() {
                *c *= &lb;
            }
            q[k] = top.clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[k + j] -= &top * bc;
            }
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// Exact division; returns `None` when `b` does not divide `self` in Z[x].
    pub fn exact_div(&self, b: &IntPoly) -> Option<IntPoly> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < b.deg() {
            return None;
        }
        let db = b.deg();
        let lb = b.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - db + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + db];
            let (quot, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[k + j] -= &quot * bc;
            }
            q[k] = quot;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Divisibility over the rationals (content ignored).
    pub fn divides(&self, other: &IntPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.pseudo_div_rem(self).1.is_zero()
    }

    /// Exact quotient over Q of `self / b`, normalised to a primitive integer
    /// polynomial. Panics if `b` does not divide `self` over Q.
    pub fn div_primitive(&self, b: &IntPoly) -> IntPoly {
        let (q, r) = self.pseudo_div_rem(b);
        assert!(r.is_zero(), "div_primitive: inexact division");
        q.primitive()
    }

    /// Primitive gcd with positive leading coefficient (gcd over Q, made primitive).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_div_rem(&b).1;
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Primitive squarefree part.
    pub fn squarefree_part(&self) -> IntPoly {
        let g = self.gcd(&self.derivative());
        self.div_primitive(&g)
    }

    /// Yun's squarefree decomposition: pairs `(f_i, i)` with `p = c * prod f_i^i`,
    /// every `f_i` primitive, squarefree, nonconstant and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let a = self.primitive();
        let da = a.derivative();
        let mut b = a.gcd(&da);
        let mut c = a.div_primitive(&b);
        let mut i = 1;
        while !c.is_constant() {
            let y = c.gcd(&b);
            let z = c.div_primitive(&y);
            if !z.is_constant() {
                out.push((z, i));
            }
            b = b.div_primitive(&y);
            c = y;
            i += 1;
        }
        out
    }

    /// Sturm sequence of `self` (assumed squarefree), using positively scaled
    /// negated pseudo-remainders so signs agree with the classical sequence.
    pub fn sturm_sequence(&self) -> Vec<IntPoly> {
        let mut seq = vec![self.content_reduced()];
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d.content_reduced());
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.is_constant() {
                break;
            }
            let delta = a.deg() - b.deg() + 1;
            let mut r = a.pseudo_div_rem(b).1;
            if r.is_zero() {
                break;
            }
            // prem multiplies by lc(b)^delta; undo a negative factor.
            let positive_factor = !(b.leading().is_negative() && delta % 2 == 1);
            r = if positive_factor { -r } else { r };
            seq.push(r.content_reduced());
        }
        seq
    }

    /// Reverse coefficients: `x^deg * p(1/x)`.
    pub fn reversed(&self) -> IntPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    /// Cauchy-type bound: every root satisfies `|z| < bound`.
    pub fn root_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        Rational::new(m, lc) + Rational::one() + Rational::one()
    }
}

pub(crate) fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of sign variations of a Sturm sequence at `x` (zeros skipped).
pub fn sign_variations(seq: &[IntPoly], x: &Rational) -> usize {
    let mut last = 0;
    let mut count = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Variations at +infinity (`at_pos = true`) or -infinity.
pub fn sign_variations_infinite(seq: &[IntPoly], at_pos: bool) -> usize {
    let mut last = 0;
    let mut count = 0;
    for p in seq {
        if p.is_zero() {
            continue;
        }
        let mut s = sign(&p.leading());
        if !at_pos && p.deg() % 2 == 1 {
            s = -s;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        assert_eq!((&a * &b).to_string(), "x^3 + x^2 - x - 1");
        assert_eq!((&a - &a), IntPoly::zero());
        assert_eq!(a.derivative(), p(&[0, 2]));
        assert_eq!(a.exact_div(&b), Some(p(&[-1, 1])));
        assert_eq!(a.exact_div(&p(&[1, 2])), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+3)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[3, 1]);
        assert_eq!(f.squarefree_part(), p(&[-3, 2, 1]));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(p(&[3, 1]), 1), (p(&[-1, 1]), 2)]);
        assert_eq!(p(&[-2, 0, 1]).gcd(&p(&[1, 0, 1])), IntPoly::one());
        assert_eq!(p(&[2, -4]).gcd(&p(&[-1, 2])), p(&[-1, 2]));
    }

    #[test]
    fn eval_rational_exact() {
        let f = p(&[1, 0, 1]);
        assert_eq!(f.eval(&super::super::rational::rat(1, 2)), super::super::rational::rat(5, 4));
        assert_eq!(f.sign_at(&super::super::rational::rat(-3, 7)), 1);
        assert_eq!(p(&[-2, 1]).sign_at(&super::super::rational::int(2)), 0);
    }

    #[test]
    fn sturm_counts_roots() {
        let f = p(&[-2, 0, 1]);
        let s = f.sturm_sequence();
        assert_eq!(sign_variations_infinite(&s, false) - sign_variations_infinite(&s, true), 2);
        let g = p(&[1, 0, 1]);
        let s = g.sturm_sequence();
        assert_eq!(sign_variations_infinite(&s, false), sign_variations_infinite(&s, true));
    }
}
