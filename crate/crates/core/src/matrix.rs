//! Dense square matrices over exact rings, characteristic polynomials and
//! generalized moment functionals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::rational::lcm_of_denominators;
use crate::exactnum::{IntPoly, Rational};
use crate::ring::Ring;

/// A square matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    size: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;
pub type IntMatrix = Matrix<BigInt>;

impl<T: Ring> Matrix<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::DimensionMismatch("matrix must be at least 1x1".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a {size}x{size} matrix",
                bad.len()
            )));
        }
        Ok(Matrix { size, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        Matrix { size, data }
    }

    pub fn zeros(size: usize) -> Self {
        Self::from_fn(size, |_, _| T::zero_elem())
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |i, j| if i == j { T::one_elem() } else { T::zero_elem() })
    }

    /// The matrix unit `E_{ij}` (0-based indices).
    pub fn unit(size: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(size);
        m.set(i, j, T::one_elem());
        m
    }

    pub fn diagonal(entries: Vec<T>) -> Self {
        let size = entries.len();
        let mut m = Self::zeros(size);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.size + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.size).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { size: self.size, data: self.data.iter().map(f).collect() }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.size, other.size)));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul(other))
    }

    /// Product; panics on size mismatch (see [`Matrix::try_mul`]).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        let n = self.size;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero_elem();
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero_elem() {
                        continue;
                    }
                    acc = acc.add(&a.mul(other.get(k, j)));
                }
                out.push(acc);
            }
        }
        Matrix { size: n, data: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        Matrix { size: self.size, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        Matrix { size: self.size, data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.mul(c))
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.size);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.size).fold(T::zero_elem(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product; entry `((i,k),(j,l))` sits at row `i*s_b + k`,
    /// column `j*s_b + l` (row-major block convention).
    pub fn kron(&self, other: &Self) -> Self {
        let sb = other.size;
        Self::from_fn(self.size * sb, |r, c| self.get(r / sb, c / sb).mul(other.get(r % sb, c % sb)))
    }

    /// Block diagonal `[self, 0; 0, other]`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let s = self.size;
        Self::from_fn(s + other.size, |i, j| match (i < s, j < s) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - s, j - s).clone(),
            _ => T::zero_elem(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero_elem)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.size)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero_elem(), |acc, (a, b)| acc.add(&a.mul(b))))
            .collect()
    }

    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        (0..self.size)
            .map(|j| (0..self.size).fold(T::zero_elem(), |acc, i| acc.add(&v[i].mul(self.get(i, j)))))
            .collect()
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.size).collect();
        f.debug_list().entries(rows).finish()
    }
}

pub fn dot<T: Ring>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero_elem(), |acc, (x, y)| acc.add(&x.mul(y)))
}

impl RatMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
            .expect("square input")
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        m.map(|x| Rational::from_integer(x.clone()))
    }

    /// Least common denominator of all entries.
    pub fn common_denominator(&self) -> BigInt {
        lcm_of_denominators(self.entries())
    }

    /// `(c, c * self)` with `c` the least common denominator, so `c * self` is integral.
    pub fn scaled_integer(&self) -> (BigInt, IntMatrix) {
        let c = self.common_denominator();
        let cr = Rational::from_integer(c.clone());
        let m = Matrix { size: self.size, data: self.data.iter().map(|x| (x * &cr).to_integer()).collect() };
        (c, m)
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.entries().all(|x| x.is_integer()) {
            Some(Matrix { size: self.size, data: self.data.iter().map(|x| x.to_integer()).collect() })
        } else {
            None
        }
    }

    /// Characteristic polynomial `det(xI - cA)` of the integer-scaled matrix,
    /// together with the scale `c > 0`.
    pub fn char_poly(&self) -> (IntPoly, BigInt) {
        let (c, m) = self.scaled_integer();
        (m.char_poly(), c)
    }

    /// Monic characteristic polynomial of `self` itself, low degree first.
    pub fn char_poly_rational(&self) -> Vec<Rational> {
        let (p, c) = self.char_poly();
        let c = Rational::from_integer(c);
        let s = self.size;
        // det(xI - A) = c^-s det(cx I - cA)
        let mut cpow = Rational::one();
        let mut out = vec![Rational::zero(); s + 1];
        for k in (0..=s).rev() {
            out[k] = Rational::from_integer(p.coeff(k)) / &cpow;
            cpow *= &c;
        }
        out
    }

    pub fn det(&self) -> Rational {
        let (c, m) = self.scaled_integer();
        let d = Rational::from_integer(m.det());
        d / Rational::from_integer(num_traits::pow(c, self.size))
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.size;
        let mut a = self.rows();
        let mut inv = Self::identity(n).rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &f * &a[col][j];
                        a[r][j] -= t;
                        let t = &f * &inv[col][j];
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Some(Self::new(inv).expect("square"))
    }

    pub fn is_orthogonal(&self) -> bool {
        self.transpose().mul(self) == Self::identity(self.size)
    }

    /// Checks `p(A) = 0` exactly for the characteristic polynomial `p`.
    pub fn verify_cayley_hamilton(&self) -> bool {
        let coeffs = self.char_poly_rational();
        let mut acc = Self::zeros(self.size);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&Self::identity(self.size).scale(c));
        }
        acc.is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).expect("square input")
    }

    /// Faddeev–LeVerrier: `M_k = A M_{k-1} + c_{s-k+1} I`, `c_{s-k} = -tr(A M_k) / k`.
    /// All divisions are exact for integer matrices.
    pub fn char_poly(&self) -> IntPoly {
        let s = self.size;
        let mut coeffs = vec![BigInt::zero(); s + 1];
        coeffs[s] = BigInt::one();
        let mut m = Self::zeros(s);
        for k in 1..=s {
            m = self.mul(&m).add(&Self::identity(s).scale(&coeffs[s - k + 1]));
            let t = self.mul(&m).trace();
            let (q, r) = (-t).div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            coeffs[s - k] = q;
        }
        IntPoly::new(coeffs)
    }

    /// Fraction-free Bareiss determinant.
    pub fn det(&self) -> BigInt {
        let n = self.size;
        let mut a = self.rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries().all(|x| !x.is_negative())
    }
}

/// Reduced row echelon form of a rational matrix given by rows; returns the
/// reduced rows and the pivot column of each.
pub fn row_echelon(mut rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..cols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: Vec<Vec<Rational>>, cols: usize) -> usize {
    row_echelon(rows, cols).1.len()
}

/// Basis of `{x : M x = 0}`, one vector per free column (ascending), with a
/// 1 in that column.
pub fn nullspace(rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let (red, pivots) = row_echelon(rows, cols);
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -row[f].clone();
        }
        out.push(v);
    }
    out
}

/// A linear functional on `s x s` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearFunctional {
    /// `X -> tr(X)`
    Trace,
    /// `X -> tr(X M)`
    TraceForm(RatMatrix),
    /// `X -> v^t X w`
    Bilinear(Vec<Rational>, Vec<Rational>),
}

impl LinearFunctional {
    pub fn check_size(&self, s: usize) -> Result<()> {
        let ok = match self {
            LinearFunctional::Trace => true,
            LinearFunctional::TraceForm(m) => m.size() == s,
            LinearFunctional::Bilinear(v, w) => v.len() == s && w.len() == s,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("functional does not act on {s}x{s} matrices")))
        }
    }

    pub fn apply(&self, x: &RatMatrix) -> Result<Rational> {
        self.check_size(x.size())?;
        Ok(match self {
            LinearFunctional::Trace => x.trace(),
            LinearFunctional::TraceForm(m) => {
                let s = x.size();
                let mut acc = Rational::zero();
                for i in 0..s {
                    for k in 0..s {
                        acc += x.get(i, k) * m.get(k, i);
                    }
                }
                acc
            }
            LinearFunctional::Bilinear(v, w) => dot(v, &x.mul_vec(w)),
        })
    }

    pub fn is_trace(&self) -> bool {
        matches!(self, LinearFunctional::Trace)
    }
}

/// `phi(A^n)`, with `A^n` by repeated squaring.
pub fn moment(a: &RatMatrix, phi: &LinearFunctional, n: u64) -> Result<Rational> {
    phi.check_size(a.size())?;
    phi.apply(&a.pow(n))
}

/// `phi(A^0), ..., phi(A^last)` by successive multiplication.
pub fn moments(a: &RatMatrix, phi: &LinearFunctional, last: u64) -> Result<Vec<Rational>> {
    phi.check_size(a.size())?;
    let mut out = Vec::with_capacity(last as usize + 1);
    match phi {
        LinearFunctional::Bilinear(v, w) => {
            let mut x = w.clone();
            for _ in 0..=last {
                out.push(dot(v, &x));
                x = a.mul_vec(&x);
            }
        }
        _ => {
            let mut p = RatMatrix::identity(a.size());
            for _ in 0..=last {
                out.push(phi.apply(&p)?);
                p = p.mul(a);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn rotation() -> RatMatrix {
        RatMatrix::new(vec![vec![rat(3, 5), rat(-4, 5)], vec![rat(4, 5), rat(3, 5)]]).unwrap()
    }

    #[test]
    fn trace_moments_of_quarter_turn() {
        let a = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let got: Vec<_> = (0..5).map(|n| moment(&a, &LinearFunctional::Trace, n).unwrap()).collect();
        assert_eq!(got, [2, 0, -2, 0, 2].map(int));
    }

    #[test]
    fn lucas_numbers() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[1, 0]]);
        let got = moments(&a, &LinearFunctional::Trace, 5).unwrap();
        assert_eq!(got[1..], [1, 3, 4, 7, 11].map(int));
        assert_eq!(moment(&RatMatrix::identity(2), &LinearFunctional::Trace, 17).unwrap(), int(2));
    }

    #[test]
    fn char_polys() {
        let fib = RatMatrix::from_i64(&[&[1, 1], &[1, 0]]);
        assert_eq!(fib.char_poly(), (IntPoly::from_i64s(&[-1, -1, 1]), BigInt::one()));
        assert_eq!(RatMatrix::identity(2).char_poly().0, IntPoly::from_i64s(&[1, -2, 1]));
        assert_eq!(rotation().char_poly(), (IntPoly::from_i64s(&[25, -6, 1]), BigInt::from(5)));
        assert_eq!(rotation().char_poly_rational(), vec![int(1), rat(-6, 5), int(1)]);
    }

    #[test]
    fn cayley_hamilton_and_det() {
        assert!(RatMatrix::from_i64(&[&[1, 1], &[1, 0]]).verify_cayley_hamilton());
        assert!(RatMatrix::identity(3).verify_cayley_hamilton());
        assert_eq!(rotation().det(), int(1));
        assert!(rotation().is_orthogonal());
        let m = RatMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.mul(&m.inverse().unwrap()), RatMatrix::identity(3));
        assert_eq!(m.det(), int(18));
    }

    #[test]
    fn functionals() {
        let a = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let bil = LinearFunctional::Bilinear(vec![int(1), int(0)], vec![int(0), int(1)]);
        assert_eq!(bil.apply(&a).unwrap(), int(2));
        let tf = LinearFunctional::TraceForm(RatMatrix::from_i64(&[&[0, 1], &[0, 0]]));
        assert_eq!(tf.apply(&a).unwrap(), int(3));
        let bad = LinearFunctional::Bilinear(vec![int(1)], vec![int(1)]);
        assert!(matches!(moment(&a, &bad, 2), Err(Error::DimensionMismatch(_))));
        assert_eq!(moments(&a, &bil, 3).unwrap()[3], moment(&a, &bil, 3).unwrap());
    }

    #[test]
    fn kron_convention() {
        let e12 = IntMatrix::unit(2, 0, 1);
        let k = e12.kron(&e12);
        assert_eq!(*k.get(0, 3), BigInt::one());
        assert_eq!(k.entries().filter(|x| !x.is_zero()).count(), 1);
    }
}
