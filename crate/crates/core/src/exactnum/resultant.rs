//! Resultants via fraction-free (Bareiss) elimination of the Sylvester matrix.
//!
//! Sign convention: `res(p, q) = det(Syl(p, q))` with the `deg q` shifted rows of
//! `p` on top. For linear inputs the rows are `[1, -a]` and `[1, -b]`, giving
//! `res(x - a, x - b) = a - b`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::IntPoly;

/// Sylvester-determinant resultant of two integer polynomials.
///
/// Returns 0 when either input is zero and `c^deg q` style powers when one is
/// constant (the determinant of the degenerate Sylvester matrix).
pub fn resultant(p: &IntPoly, q: &IntPoly) -> BigInt {
    if p.is_zero() || q.is_zero() {
        return BigInt::zero();
    }
    let m = sylvester(
        &p.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect::<Vec<_>>(),
        &q.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect::<Vec<_>>(),
    );
    bareiss_det(m).coeff(0)
}

/// Resultant with respect to `y` of two polynomials whose coefficients (in `y`,
/// low degree first) are polynomials in `x`.
pub fn resultant_bivariate(p: &[IntPoly], q: &[IntPoly]) -> IntPoly {
    let trim = |v: &[IntPoly]| {
        let mut v = v.to_vec();
        while v.last().is_some_and(IntPoly::is_zero) {
            v.pop();
        }
        v
    };
    let (p, q) = (trim(p), trim(q));
    if p.is_empty() || q.is_empty() {
        return IntPoly::zero();
    }
    bareiss_det(sylvester(&p, &q))
}

fn sylvester(p: &[IntPoly], q: &[IntPoly]) -> Vec<Vec<IntPoly>> {
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    let n = dp + dq;
    if n == 0 {
        return vec![vec![IntPoly::one()]];
    }
    let mut rows = Vec::with_capacity(n);
    for shift in 0..dq {
        let mut row = vec![IntPoly::zero(); n];
        for (k, c) in p.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..dp {
        let mut row = vec![IntPoly::zero(); n];
        for (k, c) in q.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant over Z[x] by Bareiss elimination (all divisions exact).
pub fn bareiss_det(mut m: Vec<Vec<IntPoly>>) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return IntPoly::one();
    }
    let mut sign = false;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return IntPoly::zero();
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = IntPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Polynomial whose roots are all products `a_i * a_j` of roots of `p`
/// (ordered pairs, with multiplicity): `res_y(p(y), y^m p(x / y))`.
pub fn pairwise_product_poly(p: &IntPoly) -> IntPoly {
    let m = p.deg();
    let py: Vec<IntPoly> = p.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect();
    // y^m p(x/y) = sum_k a_k x^k y^(m-k)
    let mut qy = vec![IntPoly::zero(); m + 1];
    for (k, c) in p.coeffs().iter().enumerate() {
        qy[m - k] = IntPoly::monomial(c.clone(), k);
    }
    resultant_bivariate(&py, &qy)
}
