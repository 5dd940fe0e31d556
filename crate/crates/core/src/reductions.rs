//! Gadgets reducing matrix mortality to moment and trace positivity, with
//! exact checks of their identities. Kronecker indices are row-major: the
//! pair `(i, k)` of 0-based indices maps to `i * s + k`.

use num_bigint::BigInt;
use num_traits::One;

use crate::commpoly::CommPoly;
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Matrix};

/// Integer matrices `A_1, ..., A_d` of a common size `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MortalityInstance {
    matrices: Vec<IntMatrix>,
}

impl MortalityInstance {
    pub fn new(matrices: Vec<IntMatrix>) -> Result<Self> {
        let s = matrices.first().map(IntMatrix::size).ok_or_else(|| Error::InvalidArgument("no matrices".into()))?;
        if matrices.iter().any(|m| m.size() != s) {
            return Err(Error::DimensionMismatch("matrices of different sizes".into()));
        }
        Ok(MortalityInstance { matrices })
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn size(&self) -> usize {
        self.matrices[0].size()
    }

    pub fn count(&self) -> usize {
        self.matrices.len()
    }

    /// `A_1^{n_1} ... A_d^{n_d}`.
    pub fn product(&self, exps: &[u64]) -> IntMatrix {
        ordered_product(&self.matrices, exps)
    }
}

fn ordered_product(matrices: &[IntMatrix], exps: &[u64]) -> IntMatrix {
    matrices
        .iter()
        .zip(exps)
        .fold(IntMatrix::identity(matrices[0].size()), |acc, (m, &e)| acc.mul(&m.pow(e)))
}

/// `[sum_{i,j} E_ij (x) E_ij, 0; 0, 1]`, of size `s^2 + 1`.
pub fn build_gadget_n(s: usize) -> IntMatrix {
    let mut n = IntMatrix::zeros(s * s + 1);
    for i in 0..s {
        for j in 0..s {
            n.set(i * s + i, j * s + j, BigInt::one());
        }
    }
    n.set(s * s, s * s, BigInt::one());
    n
}

/// `tr(Y N)` for `Y = [X (x) X, 0; 0, a]`, assembled block by block.
pub fn trace_gadget_check(x: &IntMatrix, a: &BigInt) -> BigInt {
    let y = x.kron(x).block_diag(&IntMatrix::from_fn(1, |_, _| a.clone()));
    y.mul(&build_gadget_n(x.size())).trace()
}

/// `B_i = [A_i (x) A_i, 0; 0, 1]` for `i <= d` and `B_{d+1} = [I (x) I, 0; 0, -1]`.
pub fn lift_mortality(inst: &MortalityInstance) -> Vec<IntMatrix> {
    let s = inst.size();
    let one = IntMatrix::identity(1);
    let mut out: Vec<IntMatrix> = inst.matrices.iter().map(|a| a.kron(a).block_diag(&one)).collect();
    out.push(IntMatrix::identity(s * s).block_diag(&one.neg()));
    out
}

/// `tr(B_1^{n_1} ... B_{d+1}^{n_{d+1}} N)` for the lifted instance.
pub fn lifted_trace(lifted: &[IntMatrix], exps: &[u64]) -> Result<BigInt> {
    if lifted.len() != exps.len() {
        return Err(Error::DimensionMismatch(format!("{} matrices, {} exponents", lifted.len(), exps.len())));
    }
    let size = lifted[0].size();
    let s = (1..=size).find(|s| s * s + 1 == size).ok_or_else(|| Error::DimensionMismatch("not a lifted size".into()))?;
    Ok(ordered_product(lifted, exps).mul(&build_gadget_n(s)).trace())
}

/// Exponent tuples in `[0, bound]^d`, by ascending sum and then descending
/// lexicographic order.
pub fn exponent_tuples(d: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|t| (0..=bound).map(move |e| [t.clone(), vec![e]].concat())).collect();
    }
    out.sort_by(|a, b| a.iter().sum::<u64>().cmp(&b.iter().sum()).then_with(|| b.cmp(a)));
    out
}

/// First exponent tuple with `A_1^{n_1} ... A_d^{n_d} = 0`, by exhaustive search.
pub fn mortality_search(inst: &MortalityInstance, bound: u64) -> Option<Vec<u64>> {
    exponent_tuples(inst.count(), bound).into_iter().find(|e| inst.product(e).is_zero())
}

/// The pair `(A, M)`: block `(j, i)` of `A` is `A_i x_i` for `j <= i`, and
/// `M` is `N` tiled `d x d`.
pub fn commpoly_embed(inst: &MortalityInstance, n: &IntMatrix) -> Result<(Matrix<CommPoly>, IntMatrix)> {
    let s = inst.size();
    if n.size() != s {
        return Err(Error::DimensionMismatch(format!("N has size {}, expected {s}", n.size())));
    }
    let d = inst.count();
    let a = Matrix::from_fn(d * s, |r, c| {
        let (j, i) = (r / s, c / s);
        if j <= i {
            CommPoly::var(d, i).scale(inst.matrices[i].get(r % s, c % s))
        } else {
            CommPoly::zero(d)
        }
    });
    let m = IntMatrix::from_fn(d * s, |r, c| n.get(r % s, c % s).clone());
    Ok((a, m))
}

/// Exponent vectors of length `d` summing to `n`.
fn compositions(d: usize, n: u64) -> Vec<Vec<u64>> {
    if d == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|k| compositions(d - 1, n - k).into_iter().map(move |rest| [vec![k], rest].concat()))
        .collect()
}

/// `tr(A^n M)` from the embedding, and whether it equals
/// `sum c(e) tr(A_1^{e_1} ... A_d^{e_d} N) x^e` with `c(e)` the 1-based index of
/// the first nonzero exponent.
pub fn comm_moment_identity(inst: &MortalityInstance, n_mat: &IntMatrix, n: u64) -> Result<(CommPoly, bool)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let d = inst.count();
    let (a, m) = commpoly_embed(inst, n_mat)?;
    let mp = m.map(|c| CommPoly::constant(d, c.clone()));
    let direct = a.pow(n).mul(&mp).trace().with_vars(d);
    let formula = CommPoly::from_terms(
        d,
        compositions(d, n).into_iter().map(|e| {
            let c = e.iter().position(|&k| k != 0).expect("n >= 1") + 1;
            let t = inst.product(&e).mul(n_mat).trace() * BigInt::from(c);
            (e.iter().map(|&k| k as u32).collect(), t)
        }),
    );
    let equal = direct.terms() == formula.terms();
    Ok((direct, equal))
}
