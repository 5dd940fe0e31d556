//! Orthogonal and unitary matrices, and invariant polynomials of the group
//! generated by orthogonal matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::torus::{find_relations, minimize, TraceFunction};
use super::{Budget, BudgetSpent, Certificate, Decision, Stream, Verdict};
use crate::commpoly::CommPoly;
use crate::error::{Error, Result};
use crate::exactnum::rational::lcm_of_denominators;
use crate::exactnum::{ComplexRat, Rational};
use crate::matrix::{nullspace, LinearFunctional, Matrix, RatMatrix};
use crate::spectra::analyze;

/// Square matrix over the Gaussian rationals.
pub type GaussMatrix = Matrix<ComplexRat>;

/// Positivity of `tr(A^n)` for orthogonal `A`.
pub fn decide_orthogonal(a: &RatMatrix, budget: &Budget) -> Result<Decision> {
    if !a.is_orthogonal() {
        return Err(Error::Precondition("matrix is not orthogonal".into()));
    }
    if let Some(d) = finite_group(a)? {
        return Ok(d);
    }
    if let Some(d) = torus_strand(a, budget)? {
        return Ok(d);
    }
    let mut stream = Stream::moments(a, &LinearFunctional::Trace)?;
    let max = budget.max_moment_index;
    Ok(match stream.find_negative(0, max, 1) {
        Some((n, v)) => Decision::no_real(n, v, BudgetSpent { moment_index: n, ..Default::default() }),
        None => Decision::unknown(
            vec![
                ("finite_group".into(), "not all eigenvalues are roots of unity".into()),
                ("torus".into(), "no nonnegative lower bound certified".into()),
                ("scan".into(), format!("no negative moment up to {max}")),
            ],
            BudgetSpent {
                moment_index: max,
                relation_bound: budget.relation_exponent_bound,
                ..Default::default()
            },
        ),
    })
}

/// Complete answer when every eigenvalue is a root of unity: one period of
/// the trace table, with `A^o = I` checked exactly.
pub fn finite_group(a: &RatMatrix) -> Result<Option<Decision>> {
    let report = analyze(a)?;
    let Some(order) = report.roots_of_unity_order else {
        return Ok(None);
    };
    if a.pow(order) != RatMatrix::identity(a.size()) {
        return Ok(None);
    }
    let values = crate::matrix::moments(a, &LinearFunctional::Trace, order - 1)?;
    let spent = BudgetSpent { moment_index: order - 1, ..Default::default() };
    if let Some(n) = super::first_negative(&values) {
        return Ok(Some(Decision::no_real(n as u64, values[n].clone(), spent)));
    }
    Ok(Some(Decision::yes(
        Certificate::FiniteGroup { order, values: values.into_iter().map(ComplexRat::real).collect() },
        spent,
    )))
}

/// The torus strand on its own: `YES` with a certified lower bound, or `None`.
pub fn torus_strand(a: &RatMatrix, budget: &Budget) -> Result<Option<Decision>> {
    let f = TraceFunction::of_orthogonal(a)?;
    let mut relations = f.torsion_relations();
    relations.extend(find_relations(a, &f, budget.relation_exponent_bound));
    let bound = minimize(&f, &relations, budget);
    let spent = BudgetSpent { relation_bound: budget.relation_exponent_bound, ..Default::default() };
    Ok(bound.lower.map(|lower_bound| {
        Decision::yes(Certificate::TorusLowerBound { relations, lower_bound, boxes: bound.boxes }, spent)
    }))
}

/// `(A, -B; B, A)` for `U = A + iB`.
pub fn psi_embed(u: &GaussMatrix) -> Result<RatMatrix> {
    check_unitary(u)?;
    Ok(realify(u))
}

fn realify(u: &GaussMatrix) -> RatMatrix {
    let s = u.size();
    RatMatrix::from_fn(2 * s, |i, j| {
        let z = u.get(i % s, j % s);
        match (i < s, j < s) {
            (true, true) | (false, false) => z.re.clone(),
            (true, false) => -z.im.clone(),
            (false, true) => z.im.clone(),
        }
    })
}

fn conj_transpose(u: &GaussMatrix) -> GaussMatrix {
    u.map(ComplexRat::conj).transpose()
}

fn check_unitary(u: &GaussMatrix) -> Result<()> {
    if conj_transpose(u).mul(u) != GaussMatrix::identity(u.size()) {
        return Err(Error::Precondition("matrix is not unitary".into()));
    }
    Ok(())
}

/// Positivity of `tr(U^n)` for unitary `U`, where a trace counts as positive
/// when it is real and nonnegative.
///
/// If `tr(U^n)` is real for `n <= s`, the power sums determine a real
/// characteristic polynomial and every trace is real; the real part is half
/// the trace of the orthogonal embedding.
pub fn decide_unitary(u: &GaussMatrix, budget: &Budget) -> Result<Decision> {
    check_unitary(u)?;
    let s = u.size();
    let psi = realify(u);
    // tr((0, I; -I, 0) Psi^n) = 2 Im tr(U^n)
    let form = RatMatrix::from_fn(2 * s, |i, j| {
        if i < s && j == i + s {
            Rational::one()
        } else if i >= s && j + s == i {
            -Rational::one()
        } else {
            Rational::zero()
        }
    });
    let im = crate::matrix::moments(&psi, &LinearFunctional::TraceForm(form), s as u64)?;
    if let Some(n) = im.iter().position(|v| !v.is_zero()) {
        let value = u.pow(n as u64).trace();
        return Ok(Decision::no(n as u64, value, BudgetSpent { moment_index: n as u64, ..Default::default() }));
    }
    let d = decide_orthogonal(&psi, budget)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let certificate = match d.certificate {
        Certificate::NegativeMoment { n, .. } => Certificate::NegativeMoment { n, value: u.pow(n).trace() },
        Certificate::FiniteGroup { order, .. } => {
            let mut p = GaussMatrix::identity(s);
            let mut values = Vec::new();
            for _ in 0..order {
                values.push(p.trace());
                p = p.mul(u);
            }
            Certificate::FiniteGroup { order, values }
        }
        Certificate::TorusLowerBound { relations, lower_bound, boxes } => {
            Certificate::TorusLowerBound { relations, lower_bound: lower_bound * &half, boxes }
        }
        other => other,
    };
    Ok(Decision { certificate, ..d })
}

type Monomial = Vec<u32>;

/// Monomials of total degree at most `degree` in `vars` variables: by
/// degree, then lexicographically descending within a degree.
fn monomials(vars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = vec![vec![0; vars]];
    for d in 1..=degree {
        let mut level = Vec::new();
        fill(vars, d, &mut vec![0; vars], 0, &mut level);
        out.extend(level);
    }
    out
}

fn fill(vars: usize, left: u32, cur: &mut Monomial, i: usize, out: &mut Vec<Monomial>) {
    if i + 1 == vars {
        cur[i] = left;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(vars, left - e, cur, i + 1, out);
    }
    cur[i] = 0;
}

type Sparse = BTreeMap<Monomial, Rational>;

fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Monomial = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let v = out.entry(e).or_insert_with(Rational::zero);
            *v += ca * cb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `m(A X)` with `X` indexed row-major by variable `i * s + j`.
fn substitute(m: &Monomial, a: &RatMatrix) -> Sparse {
    let s = a.size();
    let mut acc: Sparse = [(vec![0; s * s], Rational::one())].into_iter().collect();
    for (var, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let (i, j) = (var / s, var % s);
        let mut lin = Sparse::new();
        for k in 0..s {
            if !a.get(i, k).is_zero() {
                let mut x = vec![0; s * s];
                x[k * s + j] = 1;
                lin.insert(x, a.get(i, k).clone());
            }
        }
        for _ in 0..e {
            acc = sparse_mul(&acc, &lin);
        }
    }
    acc
}

/// Basis of `{p : deg p <= D, p(I) = 0, p(A_i X) = p(X) for all i}` over the
/// `s^2` entries of `X` (row-major). One primitive integer polynomial per
/// free coefficient, with a positive coefficient at its highest monomial.
pub fn invariant_polys(generators: &[RatMatrix], degree: u32) -> Result<Vec<CommPoly>> {
    if degree < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let Some(first) = generators.first() else {
        return Err(Error::InvalidArgument("no generators".into()));
    };
    let s = first.size();
    if generators.iter().any(|g| g.size() != s) {
        return Err(Error::DimensionMismatch("generators of different sizes".into()));
    }
    if !generators.iter().all(RatMatrix::is_orthogonal) {
        return Err(Error::Precondition("generators must be orthogonal".into()));
    }
    let vars = s * s;
    let monos = monomials(vars, degree);
    let index: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = monos.len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let at_identity: Vec<Rational> = monos
        .iter()
        .map(|m| {
            let diag = m.iter().enumerate().all(|(v, &e)| e == 0 || v / s == v % s);
            if diag {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    rows.push(at_identity);
    for g in generators {
        let mut block = vec![vec![Rational::zero(); n]; n];
        for (col, m) in monos.iter().enumerate() {
            for (e, c) in substitute(m, g) {
                block[index[&e]][col] += c;
            }
            block[col][col] -= Rational::one();
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    let basis = nullspace(rows, n);
    Ok(basis
        .into_iter()
        .map(|v| {
            let den = lcm_of_denominators(v.iter());
            let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
            let lead = ints.iter().rev().find(|x| !x.is_zero()).expect("nonzero basis vector");
            let g = if lead.is_negative() { -g } else { g };
            CommPoly::from_terms(vars, monos.iter().cloned().zip(ints.into_iter().map(|x| x / &g)))
        })
        .collect())
}

/// Agreement helper for tests: the verdicts of the orthogonal decider with
/// the finite strand disabled.
pub fn torus_only(a: &RatMatrix, budget: &Budget) -> Result<Verdict> {
    Ok(match torus_strand(a, budget)? {
        Some(d) => d.verdict,
        None => Verdict::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn cycle3() -> RatMatrix {
        RatMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])
    }

    #[test]
    fn orthogonal_examples() {
        let b = Budget::default();
        let d = decide_orthogonal(&cycle3(), &b).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        match &d.certificate {
            Certificate::FiniteGroup { order, values } => {
                assert_eq!(*order, 3);
                let re: Vec<_> = values.iter().map(|v| v.re.clone()).collect();
                assert_eq!(re, vec![int(3), int(0), int(0)]);
            }
            c => panic!("{c:?}"),
        }
        let q = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let d = decide_orthogonal(&q, &b).unwrap();
        assert_eq!(d.witness().map(|(n, v)| (n, v.re.clone())), Some((2, int(-2))));
        let r = RatMatrix::new(vec![vec![rat(3, 5), rat(-4, 5)], vec![rat(4, 5), rat(3, 5)]]).unwrap();
        let d = decide_orthogonal(&r, &b).unwrap();
        assert_eq!(d.witness().map(|(n, v)| (n, v.re.clone())), Some((2, rat(-14, 25))));
        assert!(decide_orthogonal(&RatMatrix::from_i64(&[&[2]]), &b).is_err());
        let d = decide_orthogonal(&RatMatrix::identity(2).block_diag(&r), &b).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        assert!(matches!(d.certificate, Certificate::TorusLowerBound { .. }));
    }

    #[test]
    fn invariant_examples() {
        let basis = invariant_polys(&[RatMatrix::from_i64(&[&[-1]])], 2).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].to_string(), "x1^2 - 1");
        let basis = invariant_polys(&[RatMatrix::identity(1)], 1).unwrap();
        assert_eq!(basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(), vec!["x1 - 1"]);
        assert_eq!(invariant_polys(&[RatMatrix::identity(2)], 1).unwrap().len(), 4);
        let q = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert!(invariant_polys(std::slice::from_ref(&q), 1).unwrap().is_empty());
        assert!(invariant_polys(&[q], 0).is_err());
    }

    fn gauss(rows: &[&[(i64, i64)]]) -> GaussMatrix {
        GaussMatrix::new(rows.iter().map(|r| r.iter().map(|&(a, b)| ComplexRat::new(int(a), int(b))).collect()).collect())
            .unwrap()
    }

    #[test]
    fn unitary_examples() {
        let i = gauss(&[&[(0, 1)]]);
        assert_eq!(psi_embed(&i).unwrap(), RatMatrix::from_i64(&[&[0, -1], &[1, 0]]));
        let sq = psi_embed(&i).unwrap().pow(2);
        assert_eq!(sq, psi_embed(&gauss(&[&[(-1, 0)]])).unwrap());
        assert_eq!(psi_embed(&GaussMatrix::identity(2)).unwrap(), RatMatrix::identity(4));
        let b = Budget::default();
        assert_eq!(decide_unitary(&GaussMatrix::identity(2), &b).unwrap().verdict, Verdict::Yes);
        let d = decide_unitary(&i, &b).unwrap();
        assert_eq!(d.witness().map(|(n, v)| (n, v.clone())), Some((1, ComplexRat::new(int(0), int(1)))));
        let d = decide_unitary(&gauss(&[&[(1, 0), (0, 0)], &[(0, 0), (0, 1)]]), &b).unwrap();
        assert_eq!(d.witness().map(|(n, v)| (n, v.clone())), Some((1, ComplexRat::new(int(1), int(1)))));
        assert!(psi_embed(&gauss(&[&[(2, 0)]])).is_err());
    }
}
