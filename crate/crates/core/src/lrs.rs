//! Linear recurrence sequences and their bridges to moment sequences.

use crate::commpoly::CommPoly;
use crate::error::{Error, Result};
use crate::exactnum::{ComplexRat, Rational};
use crate::matrix::{moments, LinearFunctional, Matrix, RatMatrix};
use crate::ring::Ring;
use num_traits::{One, Zero};

/// `u_n = a_1 u_{n-1} + ... + a_s u_{n-s}` with initial terms `u_1..u_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lrs<T> {
    coeffs: Vec<T>,
    initial: Vec<T>,
}

impl<T: Ring> Lrs<T> {
    pub fn new(coeffs: Vec<T>, initial: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() != initial.len() {
            return Err(Error::DimensionMismatch(format!(
                "order {} recurrence with {} initial terms",
                coeffs.len(),
                initial.len()
            )));
        }
        Ok(Lrs { coeffs, initial })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[T] {
        &self.initial
    }

    /// The terms `u_1, ..., u_last`.
    pub fn terms(&self, last: usize) -> Vec<T> {
        let s = self.order();
        let mut out: Vec<T> = self.initial.iter().take(last).cloned().collect();
        while out.len() < last {
            let n = out.len();
            let next = (0..s).fold(T::zero_elem(), |acc, i| acc.add(&self.coeffs[i].mul(&out[n - 1 - i])));
            out.push(next);
        }
        out
    }

    /// `u_n`, indexed from 1.
    pub fn term(&self, n: usize) -> Result<T> {
        if n == 0 {
            return Err(Error::TermIndexFromOne);
        }
        Ok(self.terms(n).pop().expect("n >= 1"))
    }

    /// Companion matrix `A` (first column `a_1..a_s`, ones on the
    /// superdiagonal), `v = (u_s, ..., u_1)` and `w = e_1`, so that
    /// `v^t A^(n-s) w = u_n` for `n >= s`.
    pub fn companion(&self) -> (Matrix<T>, Vec<T>, Vec<T>) {
        let s = self.order();
        let a = Matrix::from_fn(s, |i, j| {
            if j == 0 {
                self.coeffs[i].clone()
            } else if j == i + 1 {
                T::one_elem()
            } else {
                T::zero_elem()
            }
        });
        let v: Vec<T> = self.initial.iter().rev().cloned().collect();
        let mut w = vec![T::zero_elem(); s];
        w[0] = T::one_elem();
        (a, v, w)
    }
}

/// Recurrence coefficients read off the characteristic polynomial
/// `x^s - a_1 x^(s-1) - ... - a_s` and initial values `phi(A^1)..phi(A^s)`.
pub fn from_moments(a: &RatMatrix, phi: &LinearFunctional) -> Result<Lrs<Rational>> {
    let s = a.size();
    let cp = a.char_poly_rational();
    let coeffs = (1..=s).map(|i| -cp[s - i].clone()).collect();
    let mut initial = moments(a, phi, s as u64)?;
    initial.remove(0);
    Lrs::new(coeffs, initial)
}

/// Shortest recurrence `x_m = a_1 x_(m-1) + ... + a_L x_(m-L)` generating the
/// whole slice (Berlekamp–Massey over the rationals). Returns `a_1..a_L`; an
/// all-zero slice gives the empty recurrence. The result is the minimal
/// recurrence of the infinite sequence once the slice holds at least twice its
/// order many terms.
pub fn minimal_recurrence(x: &[Rational]) -> Vec<Rational> {
    let mut c: Vec<Rational> = vec![Rational::one()];
    let mut b: Vec<Rational> = vec![Rational::one()];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut bd = Rational::one();
    for n in 0..x.len() {
        let mut d = x[n].clone();
        for i in 1..=l {
            d += &c[i] * &x[n - i];
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = &d / &bd;
        let old = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, Rational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            let t = &coef * bi;
            c[i + shift] -= t;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = old;
            bd = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, Rational::zero());
    c[1..].iter().map(|v| -v.clone()).collect()
}

/// A ring element of one of the supported coefficient rings.
#[derive(Clone, Debug, PartialEq)]
pub enum RingElement {
    Rational(Rational),
    Gaussian(ComplexRat),
    Poly(CommPoly),
}

/// A recurrence tagged with its coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub enum LrsSpec {
    Rational(Lrs<Rational>),
    Gaussian(Lrs<ComplexRat>),
    IntPoly { vars: usize, lrs: Lrs<CommPoly> },
}

impl LrsSpec {
    pub fn order(&self) -> usize {
        match self {
            LrsSpec::Rational(l) => l.order(),
            LrsSpec::Gaussian(l) => l.order(),
            LrsSpec::IntPoly { lrs, .. } => lrs.order(),
        }
    }

    pub fn term(&self, n: usize) -> Result<RingElement> {
        Ok(match self {
            LrsSpec::Rational(l) => RingElement::Rational(l.term(n)?),
            LrsSpec::Gaussian(l) => RingElement::Gaussian(l.term(n)?),
            LrsSpec::IntPoly { vars, lrs } => RingElement::Poly(lrs.term(n)?.with_vars(*vars)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::int;
    use num_bigint::BigInt;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn fibonacci_and_constant() {
        let fib = Lrs::new(ints(&[1, 1]), ints(&[1, 1])).unwrap();
        assert_eq!(fib.term(6).unwrap(), int(8));
        assert_eq!(fib.term(0), Err(Error::TermIndexFromOne));
        let c = Lrs::new(ints(&[1]), ints(&[7])).unwrap();
        assert_eq!(c.term(40).unwrap(), int(7));
    }

    #[test]
    fn chebyshev_over_polynomials() {
        let x = CommPoly::var(1, 0);
        let two_x = x.add(&x);
        let t2 = two_x.mul(&x).sub(&CommPoly::one_elem());
        let cheb = Lrs::new(vec![two_x, CommPoly::one_elem().neg()], vec![x, t2]).unwrap();
        let t5 = cheb.term(5).unwrap();
        let want = CommPoly::from_terms(1, [(vec![5], BigInt::from(16)), (vec![3], BigInt::from(-20)), (vec![1], BigInt::from(5))]);
        assert_eq!(t5, want);
    }

    #[test]
    fn chebyshev_matches_cosines() {
        use crate::exactnum::interval::eval_interval;
        use crate::exactnum::rational::rat;
        use crate::exactnum::trig::cos_sin_point;
        use crate::exactnum::IntPoly;
        let x = CommPoly::var(1, 0);
        let two_x = x.add(&x);
        let t2 = two_x.mul(&x).sub(&CommPoly::one_elem());
        let cheb = Lrs::new(vec![two_x, CommPoly::one_elem().neg()], vec![x, t2]).unwrap();
        for k in 1..=20 {
            let theta = rat(k, 7);
            let (c, _) = cos_sin_point(&theta, 60);
            for n in 1..=6usize {
                let t = cheb.term(n).unwrap();
                let coeffs = (0..=n as u32).map(|i| t.coeff(&[i])).collect();
                let lhs = eval_interval(&IntPoly::new(coeffs), &c);
                let (rhs, _) = cos_sin_point(&(&theta * int(n as i64)), 60);
                assert!(lhs.lo <= rhs.hi && rhs.lo <= lhs.hi, "n={n}, theta={theta}");
            }
        }
    }

    #[test]
    fn companion_bridge() {
        let fib = Lrs::new(ints(&[1, 1]), ints(&[1, 1])).unwrap();
        let (a, v, w) = fib.companion();
        assert_eq!(a, RatMatrix::from_i64(&[&[1, 1], &[1, 0]]));
        assert_eq!((v.clone(), w.clone()), (ints(&[1, 1]), ints(&[1, 0])));
        let phi = LinearFunctional::Bilinear(v, w);
        assert_eq!(phi.apply(&a).unwrap(), int(2));

        let geo = Lrs::new(ints(&[2]), ints(&[3])).unwrap();
        let (a, v, w) = geo.companion();
        assert_eq!(LinearFunctional::Bilinear(v, w).apply(&a.pow(3)).unwrap(), int(24));
    }

    #[test]
    fn berlekamp_massey() {
        let fib: Vec<Rational> = Lrs::new(ints(&[1, 1]), ints(&[1, 1])).unwrap().terms(10);
        assert_eq!(minimal_recurrence(&fib), ints(&[1, 1]));
        assert!(minimal_recurrence(&ints(&[0, 0, 0])).is_empty());
        // 2^n + 3^n has minimal polynomial x^2 - 5x + 6
        let x: Vec<Rational> = (0..8).map(|n| int(2i64.pow(n) + 3i64.pow(n))).collect();
        assert_eq!(minimal_recurrence(&x), ints(&[5, -6]));
        // 0, 0, 1, 0, 0, ... : order 3 with zero coefficients
        let x = ints(&[0, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(minimal_recurrence(&x), ints(&[0, 0, 0]));
    }

    #[test]
    fn moments_to_recurrence() {
        let fib = RatMatrix::from_i64(&[&[1, 1], &[1, 0]]);
        let l = from_moments(&fib, &LinearFunctional::Trace).unwrap();
        assert_eq!((l.coeffs(), l.initial()), (&ints(&[1, 1])[..], &ints(&[1, 3])[..]));
        assert_eq!(l.terms(5), ints(&[1, 3, 4, 7, 11]));

        let l = from_moments(&RatMatrix::identity(2), &LinearFunctional::Trace).unwrap();
        assert_eq!((l.coeffs(), l.initial()), (&ints(&[2, -1])[..], &ints(&[2, 2])[..]));

        let d = RatMatrix::diagonal(ints(&[2, 3]));
        let l = from_moments(&d, &LinearFunctional::Trace).unwrap();
        assert_eq!(l.coeffs(), &ints(&[5, -6])[..]);
        assert_eq!(l.terms(3), ints(&[5, 13, 35]));
    }
}
