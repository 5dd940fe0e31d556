//! Non-commutative integer polynomials in letters `z_1, ..., z_d`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A word over the letters `1..=d`, ordered by length and then
/// lexicographically. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u32>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }
}

/// An element of `Z<z_1, ..., z_d>` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq)]
pub struct NCPoly {
    letters: usize,
    terms: BTreeMap<Word, BigInt>,
}

impl NCPoly {
    pub fn zero(letters: usize) -> Self {
        NCPoly { letters, terms: BTreeMap::new() }
    }

    pub fn constant(letters: usize, c: BigInt) -> Self {
        Self::from_terms(letters, [(Word::empty(), c)]).expect("empty word is valid")
    }

    /// Sums repeated words; fails on letters outside `1..=letters`.
    pub fn from_terms(letters: usize, terms: impl IntoIterator<Item = (Word, BigInt)>) -> Result<Self> {
        let mut p = Self::zero(letters);
        for (w, c) in terms {
            if w.0.iter().any(|&k| k == 0 || k as usize > letters) {
                return Err(Error::InvalidArgument(format!("letter out of range 1..={letters} in {:?}", w.0)));
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, w: Word, c: BigInt) {
        let v = self.terms.entry(w.clone()).or_insert_with(BigInt::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn coeff(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in length-then-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Length of the longest word; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.letters = out.letters.max(other.letters);
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly { letters: self.letters, terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero(self.letters.max(other.letters));
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = w.0.iter().map(|l| format!("z{l}")).collect();
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn common_size(matrices: &[IntMatrix]) -> Result<usize> {
    let s = matrices.first().map(IntMatrix::size).ok_or_else(|| Error::InvalidArgument("no matrices".into()))?;
    if matrices.iter().any(|m| m.size() != s) {
        return Err(Error::DimensionMismatch("matrices of different sizes".into()));
    }
    Ok(s)
}

/// `p(A_1, ..., A_d)`, with the empty word evaluated to the identity.
pub fn nc_eval(p: &NCPoly, matrices: &[IntMatrix]) -> Result<IntMatrix> {
    if matrices.len() != p.letters {
        return Err(Error::DimensionMismatch(format!("{} letters, {} matrices", p.letters, matrices.len())));
    }
    let s = common_size(matrices)?;
    let mut acc = IntMatrix::zeros(s);
    for (w, c) in &p.terms {
        let prod = w.0.iter().fold(IntMatrix::identity(s), |m, &k| m.mul(&matrices[k as usize - 1]));
        acc = acc.add(&prod.scale(c));
    }
    Ok(acc)
}

/// 0/1 matrices of size `len + 1` whose evaluation has, at entry `(1, len + 1)`,
/// the coefficient of `word` for every polynomial of degree at most `len`.
pub fn isolation_matrices(word: &Word, letters: usize) -> Result<Vec<IntMatrix>> {
    if word.is_empty() {
        return Err(Error::InvalidArgument(
            "coefficient of empty word read from entry (1,1) of evaluation at zero matrices".into(),
        ));
    }
    if word.0.iter().any(|&k| k == 0 || k as usize > letters) {
        return Err(Error::InvalidArgument("letter out of range".into()));
    }
    let l = word.len();
    let mut out = vec![IntMatrix::zeros(l + 1); letters];
    for (i, &k) in word.0.iter().enumerate() {
        out[k as usize - 1].set(i, i + 1, BigInt::one());
    }
    Ok(out)
}

/// Pads square matrices with zero rows and columns up to `size`.
pub fn pad(matrices: &[IntMatrix], size: usize) -> Vec<IntMatrix> {
    matrices
        .iter()
        .map(|m| IntMatrix::from_fn(size, |i, j| if i < m.size() && j < m.size() { m.get(i, j).clone() } else { BigInt::zero() }))
        .collect()
}

/// Outcome of the free Polya check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyaResult {
    AllNonneg,
    /// A negative coefficient and nonnegative matrices exposing it at the
    /// 1-based entry `(row, col)` of the evaluation.
    Witness { word: Word, coefficient: BigInt, matrices: Vec<IntMatrix>, entry: (usize, usize) },
}

/// Nonnegative coefficients, or a constructive refutation of entrywise
/// nonnegativity at nonnegative integer matrices (the first negative word).
pub fn polya_check(p: &NCPoly) -> PolyaResult {
    let Some((word, c)) = p.terms.iter().find(|(_, c)| c.is_negative()) else {
        return PolyaResult::AllNonneg;
    };
    let (matrices, entry) = if word.is_empty() {
        (vec![IntMatrix::zeros(1); p.letters], (1, 1))
    } else {
        (isolation_matrices(word, p.letters).expect("valid word"), (1, word.len() + 1))
    };
    PolyaResult::Witness { word: word.clone(), coefficient: c.clone(), matrices, entry }
}

/// Re-checks a witness by one evaluation.
pub fn witness_holds(p: &NCPoly, result: &PolyaResult) -> bool {
    match result {
        PolyaResult::AllNonneg => p.terms.values().all(|c| !c.is_negative()),
        PolyaResult::Witness { coefficient, matrices, entry, .. } => {
            let nonneg = matrices.iter().all(IntMatrix::is_nonnegative);
            match nc_eval(p, matrices) {
                Ok(m) => nonneg && coefficient.is_negative() && m.get(entry.0 - 1, entry.1 - 1) == coefficient,
                Err(_) => false,
            }
        }
    }
}

/// `sum over words k of length n of tr(A_k1 ... A_kn) z_k1 ... z_kn`.
pub fn pencil_moment(matrices: &[IntMatrix], n: usize) -> Result<NCPoly> {
    let s = common_size(matrices)?;
    let d = matrices.len();
    let mut out = NCPoly::zero(d);
    let mut stack = vec![(Vec::<u32>::new(), IntMatrix::identity(s))];
    while let Some((w, m)) = stack.pop() {
        if w.len() == n {
            out.add_term(Word(w), m.trace());
            continue;
        }
        for (k, a) in matrices.iter().enumerate() {
            let mut next = w.clone();
            next.push(k as u32 + 1);
            stack.push((next, m.mul(a)));
        }
    }
    Ok(out)
}
