//! Real algebraic numbers as (squarefree defining polynomial, isolating interval),
//! real-root isolation by Sturm sequences, and exact comparison.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::{eval_interval, RatInterval};
use super::poly::{sign_variations, IntPoly};
use super::rational::{approx_f64, format_rational, int, sqrt_lower, sqrt_upper, Rational};
use crate::error::{Error, Result};

/// A real algebraic number.
///
/// `defining` is primitive and squarefree with exactly one real root in the
/// closed interval `[lo, hi]`. When `lo < hi` neither endpoint is a root; when
/// `lo == hi` the number is that rational.
#[derive(Clone)]
pub struct AlgebraicReal {
    defining: IntPoly,
    lo: Rational,
    hi: Rational,
}

/// A distinct real root together with its multiplicity.
#[derive(Clone, Debug)]
pub struct RealRoot {
    pub value: AlgebraicReal,
    pub multiplicity: usize,
}

impl AlgebraicReal {
    pub fn from_rational(r: Rational) -> Self {
        let defining = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        AlgebraicReal { defining, lo: r.clone(), hi: r }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// Validating constructor: the interval must isolate exactly one root.
    pub fn new(defining: IntPoly, lo: Rational, hi: Rational) -> Result<Self> {
        if defining.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let defining = defining.squarefree_part();
        if lo > hi {
            return Err(Error::InvalidArgument("interval lower end exceeds upper end".into()));
        }
        if lo == hi {
            if defining.sign_at(&lo) != 0 {
                return Err(Error::InvalidArgument("point is not a root".into()));
            }
            return Ok(Self::from_rational(lo));
        }
        if defining.sign_at(&lo) == 0 || defining.sign_at(&hi) == 0 {
            return Err(Error::InvalidArgument("interval endpoint is a root".into()));
        }
        let seq = defining.sturm_sequence();
        let n = sign_variations(&seq, &lo) - sign_variations(&seq, &hi);
        if n != 1 {
            return Err(Error::InvalidArgument(format!(
                "interval holds {n} roots of the defining polynomial"
            )));
        }
        Ok(AlgebraicReal { defining, lo, hi })
    }

    pub fn defining(&self) -> &IntPoly {
        &self.defining
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn interval(&self) -> RatInterval {
        RatInterval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// The exact rational value, if the number is rational.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_point() {
            return Some(self.lo.clone());
        }
        if self.defining.deg() == 1 {
            let c = self.defining.coeffs();
            return Some(Rational::new(-c[0].clone(), c[1].clone()));
        }
        None
    }

    /// One bisection step.
    pub fn refine(&mut self) {
        if self.is_point() {
            return;
        }
        let mid = (&self.lo + &self.hi) / int(2);
        let sm = self.defining.sign_at(&mid);
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let sl = self.defining.sign_at(&self.lo);
        if sm == sl {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_to(&mut self, width: &Rational) {
        while &self.hi - &self.lo > *width {
            self.refine();
        }
    }

    pub fn sign(&self) -> i32 {
        self.cmp_rational(&Rational::zero()) as i32
    }

    /// Compare with a rational exactly.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        if self.is_point() {
            return self.lo.cmp(r);
        }
        let mut x = self.clone();
        loop {
            if *r <= x.lo {
                return Ordering::Greater;
            }
            if *r >= x.hi {
                return Ordering::Less;
            }
            if x.defining.sign_at(r) == 0 {
                return Ordering::Equal;
            }
            x.refine();
            if x.is_point() {
                return x.lo.cmp(r);
            }
        }
    }

    /// Exact comparison of two real algebraic numbers.
    pub fn compare(&self, other: &AlgebraicReal) -> Ordering {
        if other.is_point() {
            return self.cmp_rational(&other.lo);
        }
        if self.is_point() {
            return other.cmp_rational(&self.lo).reverse();
        }
        let g = self.defining.gcd(&other.defining);
        if !g.is_constant() {
            let lo = (&self.lo).max(&other.lo).clone();
            let hi = (&self.hi).min(&other.hi).clone();
            if lo <= hi && count_roots_closed(&g, &lo, &hi) > 0 {
                return Ordering::Equal;
            }
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if a.hi <= b.lo {
                return if a.is_point() && b.is_point() && a.hi == b.lo {
                    Ordering::Equal
                } else {
                    Ordering::Less
                };
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if &a.hi - &a.lo >= &b.hi - &b.lo {
                a.refine();
            } else {
                b.refine();
            }
        }
    }

    pub fn neg(&self) -> AlgebraicReal {
        AlgebraicReal {
            defining: self.defining.reflect().primitive(),
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn abs(&self) -> AlgebraicReal {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Square root of a nonnegative algebraic number.
    pub fn sqrt(&self) -> AlgebraicReal {
        assert!(self.sign() >= 0, "sqrt of negative algebraic number");
        if let Some(r) = self.to_rational() {
            if r.is_zero() {
                return AlgebraicReal::from_int(0);
            }
            let n = r.numer().sqrt();
            let d = r.denom().sqrt();
            if &n * &n == *r.numer() && &d * &d == *r.denom() {
                return AlgebraicReal::from_rational(Rational::new(n, d));
            }
        }
        let g = self.defining.compose_power(2).squarefree_part();
        let mut t = self.clone();
        while !t.lo.is_positive() {
            t.refine();
        }
        let mut bits = 32;
        loop {
            let lo = sqrt_lower(&t.lo, bits);
            let hi = sqrt_upper(&t.hi, bits);
            if g.sign_at(&lo) != 0 && g.sign_at(&hi) != 0 && lo < hi {
                let seq = g.sturm_sequence();
                if sign_variations(&seq, &lo) - sign_variations(&seq, &hi) == 1 {
                    return AlgebraicReal { defining: g, lo, hi };
                }
            }
            t.refine();
            t.refine();
            bits += 8;
        }
    }

    /// `r * self` for rational `r`.
    pub fn mul_rational(&self, r: &Rational) -> AlgebraicReal {
        if r.is_zero() {
            return AlgebraicReal::from_int(0);
        }
        if let Some(q) = self.to_rational() {
            return AlgebraicReal::from_rational(q * r);
        }
        // y = r x  =>  sum f_k (y / r)^k, cleared: f_k * den^k * num^(d-k)
        let (a, b) = (r.numer(), r.denom());
        let d = self.defining.deg();
        let coeffs = self
            .defining
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c * num_traits::pow(b.clone(), k) * num_traits::pow(a.clone(), d - k))
            .collect();
        let (lo, hi) = if r.is_positive() {
            (&self.lo * r, &self.hi * r)
        } else {
            (&self.hi * r, &self.lo * r)
        };
        AlgebraicReal { defining: IntPoly::new(coeffs).primitive(), lo, hi }
    }

    /// Exact product.
    pub fn mul(&self, other: &AlgebraicReal) -> AlgebraicReal {
        if let Some(q) = other.to_rational() {
            return self.mul_rational(&q);
        }
        if let Some(q) = self.to_rational() {
            return other.mul_rational(&q);
        }
        // roots x*y: res_x(f(x), x^dg g(y / x))
        let f: Vec<IntPoly> = self.defining.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect();
        let dg = other.defining.deg();
        let g: Vec<IntPoly> = (0..=dg)
            .map(|j| IntPoly::monomial(other.defining.coeff(dg - j), dg - j))
            .collect();
        let h = super::resultant::resultant_bivariate(&f, &g);
        let (mut a, mut b) = (self.clone(), other.clone());
        locate(&h, || {
            a.refine();
            b.refine();
            &a.interval() * &b.interval()
        })
    }

    /// `self^k` for `k >= 1`.
    pub fn pow(&self, k: u32) -> AlgebraicReal {
        assert!(k >= 1);
        if let Some(q) = self.to_rational() {
            return AlgebraicReal::from_rational(num_traits::pow(q, k as usize));
        }
        // roots x^k: res_x(f(x), y - x^k)
        let f: Vec<IntPoly> = self.defining.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect();
        let mut g = vec![IntPoly::zero(); k as usize + 1];
        g[0] = IntPoly::x();
        g[k as usize] = IntPoly::from_i64s(&[-1]);
        let h = super::resultant::resultant_bivariate(&f, &g);
        let mut a = self.clone();
        locate(&h, || {
            a.refine();
            a.interval().pow(k)
        })
    }

    /// Sign of `h(self)`, decided exactly.
    pub fn sign_of_poly(&self, h: &IntPoly) -> i32 {
        if h.is_zero() {
            return 0;
        }
        if self.is_point() {
            return h.sign_at(&self.lo);
        }
        let g = self.defining.gcd(h);
        if !g.is_constant() && count_roots_closed(&g, &self.lo, &self.hi) > 0 {
            return 0;
        }
        let mut x = self.clone();
        loop {
            if let Some(s) = eval_interval(h, &x.interval()).sign() {
                return s;
            }
            x.refine();
            if x.is_point() {
                return h.sign_at(&x.lo);
            }
        }
    }

    /// Rational enclosure of width at most `width`.
    pub fn enclosure(&self, width: &Rational) -> RatInterval {
        let mut x = self.clone();
        x.refine_to(width);
        x.interval()
    }

    /// Display-only floating approximation.
    pub fn approx(&self) -> f64 {
        let mut x = self.clone();
        let scale = approx_f64(&x.hi).abs().max(approx_f64(&x.lo).abs()).max(1.0);
        let w = super::rational::from_f64(scale * 1e-17);
        x.refine_to(&w);
        approx_f64(&((&x.lo + &x.hi) / int(2)))
    }
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicReal {}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "root of {} in [{}, {}]",
            self.defining,
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

/// The unique root of `h` eventually isolated by the shrinking enclosures
/// produced by `next`. The true value must be a root of `h` lying in every
/// enclosure.
fn locate(h: &IntPoly, mut next: impl FnMut() -> RatInterval) -> AlgebraicReal {
    let h = h.squarefree_part().primitive();
    loop {
        let e = next();
        if e.lo == e.hi {
            return AlgebraicReal::from_rational(e.lo);
        }
        if h.sign_at(&e.lo) == 0 || h.sign_at(&e.hi) == 0 {
            continue;
        }
        if count_roots_closed(&h, &e.lo, &e.hi) == 1 {
            return AlgebraicReal { defining: h, lo: e.lo, hi: e.hi };
        }
    }
}

/// Number of distinct roots of squarefree `g` in the closed interval `[lo, hi]`.
pub fn count_roots_closed(g: &IntPoly, lo: &Rational, hi: &Rational) -> usize {
    if g.is_constant() || lo > hi {
        return 0;
    }
    let g = g.squarefree_part();
    let seq = g.sturm_sequence();
    let at_lo = usize::from(g.sign_at(lo) == 0);
    sign_variations(&seq, lo) - sign_variations(&seq, hi) + at_lo
}

/// Isolates the distinct real roots of a squarefree polynomial, ascending.
fn isolate_squarefree(f: &IntPoly) -> Vec<AlgebraicReal> {
    let f = f.primitive();
    if f.is_constant() {
        return Vec::new();
    }
    let seq = f.sturm_sequence();
    let bound = f.root_bound();
    let lo = -&bound;
    let total = sign_variations(&seq, &lo) - sign_variations(&seq, &bound);
    let mut out = Vec::new();
    // (a, b] intervals with their root counts.
    let mut stack = vec![(lo, bound, total)];
    while let Some((a, b, c)) = stack.pop() {
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push(finish_isolation(&f, &seq, a, b));
            continue;
        }
        let mid = (&a + &b) / int(2);
        let vm = sign_variations(&seq, &mid);
        let left = sign_variations(&seq, &a) - vm;
        stack.push((mid.clone(), b, c - left));
        stack.push((a, mid, left));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Shrinks `(a, b]` holding exactly one root until both endpoints are non-roots.
fn finish_isolation(f: &IntPoly, seq: &[IntPoly], mut a: Rational, mut b: Rational) -> AlgebraicReal {
    if f.sign_at(&b) == 0 {
        return AlgebraicReal { defining: f.clone(), lo: b.clone(), hi: b };
    }
    while f.sign_at(&a) == 0 {
        let mid = (&a + &b) / int(2);
        if f.sign_at(&mid) == 0 {
            return AlgebraicReal { defining: f.clone(), lo: mid.clone(), hi: mid };
        }
        if sign_variations(seq, &a) - sign_variations(seq, &mid) == 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    AlgebraicReal { defining: f.clone(), lo: a, hi: b }
}

/// Isolates all distinct real roots of `p` with multiplicities, sorted ascending
/// with pairwise disjoint intervals.
pub fn isolate_real_roots(p: &IntPoly) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots: Vec<RealRoot> = p
        .squarefree_decomposition()
        .into_iter()
        .flat_map(|(f, m)| {
            isolate_squarefree(&f)
                .into_iter()
                .map(move |value| RealRoot { value, multiplicity: m })
        })
        .collect();
    roots.sort_by(|a, b| a.value.compare(&b.value));
    for i in 1..roots.len() {
        let (left, right) = roots.split_at_mut(i);
        separate(&mut left[i - 1].value, &mut right[0].value);
    }
    Ok(roots)
}

/// Refines two distinct numbers `a < b` until their intervals are disjoint.
fn separate(a: &mut AlgebraicReal, b: &mut AlgebraicReal) {
    while a.hi >= b.lo {
        if a.is_point() && b.is_point() {
            break;
        }
        if &a.hi - &a.lo >= &b.hi - &b.lo {
            a.refine();
        } else {
            b.refine();
        }
    }
}

/// `p(x)` for integer `x` as a convenience for tests and callers.
pub fn is_root(p: &IntPoly, x: &Rational) -> bool {
    p.sign_at(x) == 0
}

/// Integer nearest to an algebraic number from below.
pub fn floor_algebraic(x: &AlgebraicReal) -> BigInt {
    let mut y = x.clone();
    y.refine_to(&Rational::new(BigInt::one(), BigInt::from(4)));
    let f = super::rational::floor(&y.lo);
    if y.cmp_rational(&Rational::from_integer(&f + 1)) != Ordering::Less {
        f + 1
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn sqrt2_pair() {
        let r = isolate_real_roots(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].value.hi() < r[1].value.lo());
        assert_eq!(r[0].value.sign(), -1);
        assert_eq!(r[1].value.cmp_rational(&rat(3, 2)), Ordering::Less);
        assert_eq!(r[1].value.cmp_rational(&rat(7, 5)), Ordering::Greater);
        assert!(r.iter().all(|x| x.multiplicity == 1));
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p(&[1, 0, 1])).unwrap().is_empty());
        assert!(isolate_real_roots(&p(&[5])).unwrap().is_empty());
        assert_eq!(isolate_real_roots(&IntPoly::zero()).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn multiplicities() {
        // (x-1)^2 (x+3) = x^3 + x^2 - 5x + 3
        let r = isolate_real_roots(&p(&[3, -5, 1, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].value.to_rational(), Some(int(-3)));
        assert_eq!(r[0].multiplicity, 1);
        assert_eq!(r[1].value.to_rational(), Some(int(1)));
        assert_eq!(r[1].multiplicity, 2);
    }

    #[test]
    fn products_and_powers() {
        let sqrt2 = AlgebraicReal::new(p(&[-2, 0, 1]), int(1), int(2)).unwrap();
        let sqrt3 = AlgebraicReal::new(p(&[-3, 0, 1]), int(1), int(2)).unwrap();
        assert_eq!(sqrt2.mul(&sqrt2).cmp_rational(&int(2)), Ordering::Equal);
        assert_eq!(sqrt2.pow(4).cmp_rational(&int(4)), Ordering::Equal);
        let six = AlgebraicReal::new(p(&[-6, 0, 1]), int(2), int(3)).unwrap();
        assert_eq!(sqrt2.mul(&sqrt3), six);
        assert_eq!(sqrt2.mul_rational(&rat(-3, 2)).pow(2).cmp_rational(&rat(9, 2)), Ordering::Equal);
        assert_eq!(sqrt2.mul_rational(&rat(-3, 2)).sign(), -1);
    }

    #[test]
    fn comparisons() {
        let sqrt2 = AlgebraicReal::new(p(&[-2, 0, 1]), int(1), int(2)).unwrap();
        let golden = AlgebraicReal::new(p(&[-1, -1, 1]), int(1), int(2)).unwrap();
        let three_halves = AlgebraicReal::from_rational(rat(3, 2));
        assert_eq!(sqrt2.compare(&three_halves), Ordering::Less);
        assert_eq!(sqrt2.compare(&sqrt2.clone()), Ordering::Equal);
        assert_eq!(golden.compare(&sqrt2), Ordering::Greater);
        // Same number, different representations.
        let sqrt2_other = AlgebraicReal::new(p(&[6, 0, -5, 0, 1]), rat(13, 10), rat(3, 2)).unwrap();
        assert_eq!(sqrt2.compare(&sqrt2_other), Ordering::Equal);
    }

    #[test]
    fn sqrt_of_algebraic() {
        let two = AlgebraicReal::from_int(2);
        let s = two.sqrt();
        let sqrt2 = AlgebraicReal::new(p(&[-2, 0, 1]), int(1), int(2)).unwrap();
        assert_eq!(s, sqrt2);
        assert_eq!(AlgebraicReal::from_rational(rat(9, 4)).sqrt().to_rational(), Some(rat(3, 2)));
    }

    #[test]
    fn poly_sign_at_algebraic() {
        let sqrt2 = AlgebraicReal::new(p(&[-2, 0, 1]), int(1), int(2)).unwrap();
        assert_eq!(sqrt2.sign_of_poly(&p(&[-2, 0, 1])), 0);
        assert_eq!(sqrt2.sign_of_poly(&p(&[-3, 2])), -1); // 2*sqrt2 - 3 < 0
        assert_eq!(sqrt2.sign_of_poly(&p(&[-1, 0, 0, 1])), 1);
    }

    #[test]
    fn invalid_interval_rejected() {
        assert!(AlgebraicReal::new(p(&[-2, 0, 1]), int(-2), int(2)).is_err());
        assert!(AlgebraicReal::new(p(&[-1, 1]), int(1), int(2)).is_err());
    }
}
