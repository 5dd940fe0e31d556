//! Certified lower bounds for the trace of powers of an orthogonal matrix.
//!
//! The trace of `A^n` is `c + sum_j w_j cos(2 pi n theta_j)` over the unit
//! eigenvalues `exp(2 pi i theta_j)` in the closed upper half-plane. The orbit
//! `n theta` lies in the closed subgroup `H = {t : r . t in Z for r in R}` for
//! every set `R` of exactly verified relations; fewer relations give a larger
//! `H`, so a lower bound over `H` is a lower bound for every moment.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Budget;
use crate::error::Result;
use crate::exactnum::cyclotomic::real_cyclotomic_sign;
use crate::exactnum::interval::RatInterval;
use crate::exactnum::rational::int;
use crate::exactnum::trig::{cos_range, pi};
use crate::exactnum::{Ball, ComplexRat, Rational};
use crate::matrix::{rank, RatMatrix};
use crate::spectra::{analyze, Eigenvalue, UnitArg};

/// Largest number of finite points of `H` enumerated.
const MAX_FINITE: u64 = 1 << 16;
const BITS: u32 = 64;

#[derive(Clone, Debug)]
pub(crate) struct Coordinate {
    /// Enclosure of the eigenvalue.
    pub ball: Ball,
    pub weight: Rational,
    pub torsion: Option<(u64, u64)>,
}

/// `c + sum_j w_j cos(2 pi t_j)` on unit eigenvalues.
#[derive(Clone, Debug)]
pub(crate) struct TraceFunction {
    pub constant: Rational,
    pub coords: Vec<Coordinate>,
    /// Every eigenvalue with its multiplicity, for relation counting.
    pub spectrum: Vec<(Ball, usize)>,
}

impl TraceFunction {
    pub fn of_orthogonal(a: &RatMatrix) -> Result<Self> {
        let report = analyze(a)?;
        let mut constant = Rational::zero();
        let mut coords = Vec::new();
        let mut spectrum = Vec::new();
        for class in &report.classes {
            for m in &class.members {
                let mult = Rational::from_integer(BigInt::from(m.multiplicity));
                let ball = match &m.value {
                    Eigenvalue::Real(x) => Ball::real(int(x.sign() as i64)),
                    Eigenvalue::Complex(b) => b.clone(),
                };
                spectrum.push((ball.clone(), m.multiplicity));
                match (&m.value, &m.unit) {
                    (_, UnitArg::Plus) => constant += mult,
                    (_, UnitArg::Minus) => coords.push(Coordinate { ball, weight: mult, torsion: Some((2, 1)) }),
                    (Eigenvalue::Complex(b), unit) if b.center.im.is_positive() => {
                        let torsion = match unit {
                            UnitArg::RootOfUnity { order, index } => Some((*order, *index)),
                            _ => None,
                        };
                        coords.push(Coordinate { ball, weight: mult * int(2), torsion });
                    }
                    _ => {}
                }
            }
        }
        Ok(TraceFunction { constant, coords, spectrum })
    }

    /// Relations from certified torsion: `o e_j`.
    pub fn torsion_relations(&self) -> Vec<Vec<i64>> {
        let k = self.coords.len();
        self.coords
            .iter()
            .enumerate()
            .filter_map(|(j, c)| {
                c.torsion.map(|(o, _)| {
                    let mut r = vec![0; k];
                    r[j] = o as i64;
                    r
                })
            })
            .collect()
    }
}

fn angle(b: &Ball) -> f64 {
    let z = b.to_c64();
    (z.im.atan2(z.re) / std::f64::consts::TAU).rem_euclid(1.0)
}

/// `A^e` for orthogonal `A` and any integer `e`.
fn signed_pow(a: &RatMatrix, e: i64) -> RatMatrix {
    if e >= 0 {
        a.pow(e as u64)
    } else {
        a.transpose().pow(e.unsigned_abs())
    }
}

/// Exact check of `lambda_a^p lambda_b^q = 1` for eigenvalues `a != b`.
///
/// `A^p (x) A^q` is orthogonal, so the number of eigenvalue pairs with
/// `lambda_i^p lambda_j^q = 1` equals `dim ker(A^p (x) A^q - I)`. Every true
/// pair has a product ball containing 1; when the pairs whose balls contain 1
/// account for exactly that dimension, each of them is a true pair.
pub(crate) fn verify_pair(a: &RatMatrix, f: &TraceFunction, ia: usize, p: i64, ib: usize, q: i64) -> bool {
    let s = a.size();
    let k = signed_pow(a, p).kron(&signed_pow(a, q));
    let n = s * s;
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| k.get(i, j) - if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let exact = n - rank(rows, n);
    let one = ComplexRat::one();
    let reach = |x: &Ball, y: &Ball| -> bool {
        let px = pow_signed(x, p);
        let qy = pow_signed(y, q);
        px.mul(&qy).contains(&one)
    };
    let mut count = 0;
    for (x, mx) in &f.spectrum {
        for (y, my) in &f.spectrum {
            if reach(x, y) {
                count += mx * my;
            }
        }
    }
    count == exact && reach(&f.coords[ia].ball, &f.coords[ib].ball)
}

fn pow_signed(b: &Ball, e: i64) -> Ball {
    // unit modulus: b^-1 is enclosed by conj(b) widened by the modulus error
    let base = if e >= 0 { b.clone() } else { b.inv().unwrap_or_else(|| b.conj()) };
    base.pow(e.unsigned_abs(), 2 * BITS)
}

/// Support-two relations `p theta_a + q theta_b in Z` with `|p|, |q| <= bound`,
/// each verified exactly.
pub(crate) fn find_relations(a: &RatMatrix, f: &TraceFunction, bound: u32) -> Vec<Vec<i64>> {
    let k = f.coords.len();
    let b = bound as i64;
    let mut out = Vec::new();
    for ia in 0..k {
        for ib in ia + 1..k {
            if f.coords[ia].torsion.is_some() && f.coords[ib].torsion.is_some() {
                continue;
            }
            let (ta, tb) = (angle(&f.coords[ia].ball), angle(&f.coords[ib].ball));
            'search: for p in 1..=b {
                for q in -b..=b {
                    if q == 0 {
                        continue;
                    }
                    let x = p as f64 * ta + q as f64 * tb;
                    if (x - x.round()).abs() > 1e-9 {
                        continue;
                    }
                    if verify_pair(a, f, ia, p, ib, q) {
                        let mut r = vec![0; k];
                        r[ia] = p;
                        r[ib] = q;
                        out.push(r);
                        break 'search;
                    }
                }
            }
        }
    }
    out
}

/// Diagonal entries `d` and unimodular `V` with `R V` column-equivalent to
/// a diagonal matrix: `H = {V u : d_i u_i in Z}`.
pub(crate) fn smith_columns(rel: &[Vec<i64>], k: usize) -> (Vec<i128>, Vec<Vec<i128>>) {
    let mut m: Vec<Vec<i128>> = rel.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut v: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect();
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(k) {
        // smallest nonzero entry of the remaining block
        let pick = (t..rows)
            .flat_map(|i| (t..k).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs());
        let Some((pi_, pj)) = pick else {
            break;
        };
        m.swap(t, pi_);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let f = m[i][t].div_euclid(m[t][t]);
                if f != 0 {
                    for j in t..k {
                        m[i][j] -= f * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..k {
                let f = m[t][j].div_euclid(m[t][t]);
                if f != 0 {
                    for row in m.iter_mut() {
                        row[j] -= f * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= f * row[t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            let pick = (t..rows)
                .map(|i| (i, t))
                .chain((t..k).map(|j| (t, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs())
                .expect("nonzero pivot");
            m.swap(t, pick.0);
            for row in m.iter_mut() {
                row.swap(t, pick.1);
            }
            for row in v.iter_mut() {
                row.swap(t, pick.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    (diag, v)
}

/// Outcome of the torus minimization.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct TorusBound {
    pub lower: Option<Rational>,
    pub boxes: u64,
}

/// Certified lower bound of `f` over `H`, or `None` in `lower` when the
/// budget does not certify a nonnegative one.
pub(crate) fn minimize(f: &TraceFunction, relations: &[Vec<i64>], budget: &Budget) -> TorusBound {
    let k = f.coords.len();
    if k == 0 {
        return TorusBound { lower: Some(f.constant.clone()).filter(|c| !c.is_negative()), boxes: 0 };
    }
    let (d, v) = smith_columns(relations, k);
    let r = d.len();
    let total: u64 = d.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x as u64)).unwrap_or(u64::MAX);
    if total > MAX_FINITE {
        return TorusBound { lower: None, boxes: 0 };
    }
    let free: Vec<usize> = (r..k).collect();
    let mut lowest: Option<Rational> = None;
    let mut boxes = 0u64;
    let mut idx = vec![0i128; r];
    loop {
        // finite part of t_j (mod 1) and its dependence on free coordinates
        let fixed: Vec<Rational> = (0..k)
            .map(|j| {
                (0..r).fold(Rational::zero(), |acc, i| {
                    acc + Rational::new(BigInt::from(v[j][i] * idx[i]), BigInt::from(d[i]))
                })
            })
            .collect();
        let dependent: Vec<bool> = (0..k).map(|j| free.iter().any(|&i| v[j][i] != 0)).collect();
        let lb = match triangle_bound(f, &fixed, &dependent) {
            Some(lb) => Some(lb),
            None => {
                let (lb, n) = branch_and_bound(f, &fixed, &v, &free, budget.minimization_depth);
                boxes += n;
                lb
            }
        };
        let Some(lb) = lb else {
            return TorusBound { lower: None, boxes };
        };
        lowest = Some(match lowest {
            Some(l) if l < lb => l,
            _ => lb,
        });
        // next finite point
        let mut i = 0;
        while i < r {
            idx[i] += 1;
            if idx[i] < d[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    TorusBound { lower: lowest, boxes }
}

/// Exact check of `c + sum_fixed w_j cos(2 pi t_j) - sum_dependent |w_j| >= 0`,
/// returning a certified nonnegative lower bound.
fn triangle_bound(f: &TraceFunction, fixed: &[Rational], dependent: &[bool]) -> Option<Rational> {
    let m = fixed
        .iter()
        .zip(dependent)
        .filter(|(_, &dep)| !dep)
        .fold(BigInt::one(), |acc, (t, _)| acc.lcm(t.denom()));
    let m64: u64 = (&m).try_into().ok()?;
    let mut slack = f.constant.clone();
    let mut terms = Vec::new();
    for (j, c) in f.coords.iter().enumerate() {
        if dependent[j] {
            slack -= c.weight.abs();
        } else {
            let t = &fixed[j] * Rational::from_integer(m.clone());
            let e = t.to_integer().mod_floor(&m);
            let e: u64 = e.try_into().ok()?;
            let half = &c.weight / int(2);
            terms.push((half.clone(), e));
            terms.push((half, (m64 - e) % m64));
        }
    }
    terms.push((slack, 0));
    if real_cyclotomic_sign(&terms, m64) < 0 {
        return None;
    }
    // the exact sign is nonnegative; report the certified interval bound clipped at 0
    let lo = terms.iter().fold(Rational::zero(), |acc, (c, e)| {
        let (cos, _) = crate::exactnum::trig::root_of_unity(*e as i64, m64, BITS);
        acc + if c.is_negative() { &cos.hi * c } else { &cos.lo * c }
    });
    Some(if lo.is_negative() { Rational::zero() } else { lo })
}

/// Interval branch and bound over the free coordinates in `[0, 1]^f`.
fn branch_and_bound(
    f: &TraceFunction,
    fixed: &[Rational],
    v: &[Vec<i128>],
    free: &[usize],
    depth: u32,
) -> (Option<Rational>, u64) {
    let two_pi = {
        let p = pi(BITS);
        RatInterval::new(&p.lo * int(2), &p.hi * int(2))
    };
    let eval = |bx: &[RatInterval]| -> RatInterval {
        let mut acc = RatInterval::point(f.constant.clone());
        for (j, c) in f.coords.iter().enumerate() {
            let mut t = RatInterval::point(fixed[j].clone());
            for (slot, &i) in free.iter().enumerate() {
                let coef = int(v[j][i] as i64);
                let term = &RatInterval::point(coef) * &bx[slot];
                t = &t + &term;
            }
            let ang = &two_pi * &t;
            let cr = cos_range(&ang, BITS);
            acc = &acc + &(&RatInterval::point(c.weight.clone()) * &cr);
        }
        acc
    };
    let unit = vec![RatInterval::new(Rational::zero(), Rational::one()); free.len()];
    let mut stack = vec![(unit, 0u32)];
    let mut boxes = 0u64;
    let mut lowest: Option<Rational> = None;
    let limit = 1u64 << depth.min(24);
    while let Some((bx, level)) = stack.pop() {
        boxes += 1;
        if boxes > limit {
            return (None, boxes);
        }
        let val = eval(&bx);
        if !val.lo.is_negative() {
            lowest = Some(match lowest {
                Some(l) if l < val.lo => l,
                _ => val.lo,
            });
            continue;
        }
        if level >= 2 * depth {
            return (None, boxes);
        }
        let mid: Vec<RatInterval> =
            bx.iter().map(|i| RatInterval::point((&i.lo + &i.hi) / int(2))).collect();
        if eval(&mid).hi.is_negative() {
            // a point of H with a negative value: no bound exists
            return (None, boxes);
        }
        let (w, _) = bx
            .iter()
            .enumerate()
            .map(|(i, x)| (i, x.width()))
            .max_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty box");
        let m = (&bx[w].lo + &bx[w].hi) / int(2);
        let mut left = bx.clone();
        left[w] = RatInterval::new(bx[w].lo.clone(), m.clone());
        let mut right = bx;
        right[w] = RatInterval::new(m, right[w].hi.clone());
        stack.push((left, level + 1));
        stack.push((right, level + 1));
    }
    (lowest, boxes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn rotation() -> RatMatrix {
        RatMatrix::new(vec![vec![rat(3, 5), rat(-4, 5)], vec![rat(4, 5), rat(3, 5)]]).unwrap()
    }

    #[test]
    fn smith_parametrisation() {
        // 2 t_0 in Z and t_0 - t_1 in Z: H = {(a/2, a/2)}
        let (d, v) = smith_columns(&[vec![2, 0], vec![1, -1]], 2);
        assert_eq!(d.iter().product::<i128>(), 2);
        let det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
        assert_eq!(det.abs(), 1);
    }

    #[test]
    fn rotation_plus_identity_is_nonnegative() {
        let a = RatMatrix::identity(2).block_diag(&rotation());
        let f = TraceFunction::of_orthogonal(&a).unwrap();
        assert_eq!(f.constant, int(2));
        let b = minimize(&f, &f.torsion_relations(), &Budget::default());
        assert_eq!(b.lower, Some(Rational::zero()));
        let f = TraceFunction::of_orthogonal(&rotation()).unwrap();
        assert_eq!(minimize(&f, &[], &Budget::default()).lower, None);
    }

    #[test]
    fn relations_between_powers() {
        // R and R^2 side by side: theta_1 = 2 theta_0
        let r = rotation();
        let a = r.block_diag(&r.mul(&r));
        let f = TraceFunction::of_orthogonal(&a).unwrap();
        let rel = find_relations(&a, &f, 4);
        assert_eq!(rel.len(), 1);
        let (p, q) = (rel[0][0], rel[0][1]);
        assert!(p * q < 0);
        assert!([(2, 1), (1, 2)].contains(&(p.abs(), q.abs())));
        // 3 + 2 cos x + 2 cos 2x = 4c^2 + 2c + 1 >= 3/4, while the triangle bound is -1
        let b = RatMatrix::identity(3).block_diag(&a);
        let g = TraceFunction::of_orthogonal(&b).unwrap();
        let rel = find_relations(&b, &g, 4);
        let lb = minimize(&g, &rel, &Budget::default());
        assert!(lb.lower.as_ref().is_some_and(|l| !l.is_negative()), "{lb:?}");
    }
}
