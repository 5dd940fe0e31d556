//! Multivariate polynomials with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Rational;
use crate::ring::Ring;

/// An element of `Z[x_1, ..., x_d]`. Exponent vectors are stored without
/// trailing zeros, so polynomials in different numbers of declared variables
/// combine freely; `vars` records the declared count.
#[derive(Clone, PartialEq, Eq)]
pub struct CommPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl CommPoly {
    pub fn zero(vars: usize) -> Self {
        CommPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: BigInt) -> Self {
        Self::monomial(vars, vec![], c)
    }

    /// `c * x^exps`; `exps` may be shorter than `vars`.
    pub fn monomial(vars: usize, exps: Vec<u32>, c: BigInt) -> Self {
        let mut p = Self::zero(vars.max(trim(exps.clone()).len()));
        p.add_term(exps, c);
        p
    }

    /// The variable `x_i` (0-based).
    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(vars, e, BigInt::one())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn with_vars(mut self, vars: usize) -> Self {
        self.vars = self.vars.max(vars);
        self
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = trim(exps);
        self.vars = self.vars.max(key.len());
        let entry = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(&trim(exps.to_vec())).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with exponent vectors padded to `vars`, ordered by total degree
    /// and then lexicographically.
    pub fn terms(&self) -> Vec<(Vec<u32>, BigInt)> {
        let mut out: Vec<(Vec<u32>, BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.resize(self.vars, 0);
                (e, c.clone())
            })
            .collect();
        out.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| a.0.cmp(&b.0))
        });
        out
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == degree)
    }

    /// Every coefficient nonnegative.
    pub fn has_nonneg_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = Rational::from_integer(c.clone());
            for (i, &k) in e.iter().enumerate() {
                t *= num_traits::pow(point[i].clone(), k as usize);
            }
            acc += t;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.vars, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }
}

impl Ring for CommPoly {
    fn zero_elem() -> Self {
        CommPoly::zero(0)
    }
    fn one_elem() -> Self {
        CommPoly::constant(0, BigInt::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone().with_vars(other.vars);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = CommPoly::zero(self.vars.max(other.vars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let n = ea.len().max(eb.len());
                let e: Vec<u32> =
                    (0..n).map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0)).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        CommPoly { vars: self.vars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, p) })
                .collect();
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

impl fmt::Debug for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
