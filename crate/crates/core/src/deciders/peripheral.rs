//! Normalized peripheral power sums and the general classifier.
//!
//! Classes are the nonzero modulus classes in decreasing order, indexed from
//! 1; an index past the last class denotes an empty class. The class value is
//! `mu_n^(i) = sum over the class of (lambda / |lambda|)^n`, taken over
//! `n >= 1` for the infimum.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ceil_bound, ln_ratio_lower, ln_upper, Budget, BudgetSpent, Certificate, Decision, Stream, Verdict};
use crate::error::{Error, Result};
use crate::exactnum::cyclotomic::real_cyclotomic_sign;
use crate::exactnum::interval::RatInterval;
use crate::exactnum::trig::root_of_unity;
use crate::exactnum::{Ball, ComplexRat, Rational};
use crate::matrix::{LinearFunctional, RatMatrix};
use crate::spectra::{analyze, ModulusClass, SpectrumReport, UnitArg};

const BITS: u32 = 96;
/// Longest ball-arithmetic scan of a class value.
const MAX_CLASS_SCAN: u64 = 4096;

/// Unit arguments of one class.
struct ClassFn {
    /// `(multiplicity, order, index)` of each torsion member.
    torsion: Vec<(usize, u64, u64)>,
    generic: Vec<(usize, Ball)>,
    period: u64,
}

impl ClassFn {
    fn new(class: &ModulusClass) -> Self {
        let mut torsion = Vec::new();
        let mut generic = Vec::new();
        let mut period = 1u64;
        for m in &class.members {
            match &m.unit {
                UnitArg::Generic(b) => generic.push((m.multiplicity, b.clone())),
                u => {
                    let (o, k) = u.torsion().expect("nonzero class");
                    period = period.lcm(&o);
                    torsion.push((m.multiplicity, o, k));
                }
            }
        }
        ClassFn { torsion, generic, period }
    }

    /// Total multiplicity of the non-torsion members.
    fn generic_weight(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.generic.iter().map(|(m, _)| m).sum::<usize>()))
    }

    /// `(c_k, e_k)` with the torsion part at index `n` equal to `sum c_k zeta^(e_k)`,
    /// `zeta = exp(2 pi i / period)`.
    fn torsion_terms(&self, n: u64) -> Vec<(Rational, u64)> {
        self.torsion
            .iter()
            .map(|(m, o, k)| {
                let e = (k * (self.period / o)) % self.period;
                (Rational::from_integer(BigInt::from(*m)), (e * (n % self.period)) % self.period)
            })
            .collect()
    }

    /// Exact sign of `torsion(n) + shift`.
    fn torsion_sign(&self, n: u64, shift: &Rational) -> i32 {
        let mut terms = self.torsion_terms(n);
        terms.push((shift.clone(), 0));
        real_cyclotomic_sign(&terms, self.period)
    }

    /// Enclosure of the whole class value at index `n`, exact when rational.
    fn value(&self, n: u64, powers: &[Ball]) -> RatInterval {
        if self.generic.is_empty() {
            let exact: Option<Rational> =
                self.torsion_terms(n).into_iter().map(|(c, e)| cos_turn(e, self.period).map(|v| c * v)).sum();
            if let Some(v) = exact {
                return RatInterval::point(v);
            }
        }
        let mut acc = RatInterval::point(Rational::zero());
        for (c, e) in self.torsion_terms(n) {
            let (cos, _) = root_of_unity(e as i64, self.period, BITS);
            acc = &acc + &(&RatInterval::point(c) * &cos);
        }
        for ((m, _), p) in self.generic.iter().zip(powers) {
            let (lo, hi) = p.re_interval();
            let w = Rational::from_integer(BigInt::from(*m));
            acc = &acc + &RatInterval::new(&lo * &w, &hi * &w);
        }
        acc
    }
}

/// `cos(2 pi e / m)` when it is rational.
fn cos_turn(e: u64, m: u64) -> Option<Rational> {
    let g = e.gcd(&m);
    let (e, m) = (e / g, m / g);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    match (m, e) {
        (1, _) => Some(Rational::one()),
        (2, _) => Some(-Rational::one()),
        (4, _) => Some(Rational::zero()),
        (3, _) => Some(-half),
        (6, _) => Some(half),
        _ => None,
    }
}

fn class_of(report: &SpectrumReport, i: usize) -> Result<Option<ClassFn>> {
    if i == 0 {
        return Err(Error::InvalidArgument("classes are indexed from 1".into()));
    }
    Ok(report.peripheral().get(i - 1).map(ClassFn::new))
}

fn empty_class() -> Decision {
    Decision::yes(Certificate::Trivial { reason: "empty class".into(), values: vec![] }, BudgetSpent::default())
}

fn class_witness(n: u64, v: RatInterval) -> Decision {
    Decision {
        verdict: Verdict::No,
        certificate: Certificate::ClassValue { n, lo: v.lo, hi: v.hi },
        budget_spent: BudgetSpent { moment_index: n, ..Default::default() },
    }
}

/// Decides `eta_i(A) >= c`.
pub fn eta_ge(a: &RatMatrix, i: usize, c: &Rational, budget: &Budget) -> Result<Decision> {
    let report = analyze(a)?;
    eta_on(&report, i, c, budget)
}

fn eta_on(report: &SpectrumReport, i: usize, c: &Rational, budget: &Budget) -> Result<Decision> {
    let Some(f) = class_of(report, i)? else {
        return Ok(empty_class());
    };
    // sign of value - c, via (value - c) >= torsion - G - c
    let g = f.generic_weight();
    let shift = -(c + &g);
    let yes = (0..f.period).all(|r| f.torsion_sign(r, &shift) >= 0);
    if yes {
        let reason = if f.generic.is_empty() { "periodic class" } else { "torus bound" };
        return Ok(Decision::yes(
            Certificate::Trivial { reason: reason.into(), values: vec![c.clone()] },
            BudgetSpent { moment_index: f.period, ..Default::default() },
        ));
    }
    if f.generic.is_empty() {
        let n = (1..=f.period).find(|&n| f.torsion_sign(n, &-c) < 0).expect("a residue is below c");
        return Ok(class_witness(n, f.value(n, &[])));
    }
    let limit = budget.max_moment_index.min(MAX_CLASS_SCAN);
    let mut powers: Vec<Ball> = f.generic.iter().map(|_| Ball::exact(ComplexRat::one())).collect();
    for n in 1..=limit {
        for (p, (_, b)) in powers.iter_mut().zip(&f.generic) {
            *p = p.mul(b).rounded(2 * BITS);
        }
        let v = f.value(n, &powers);
        if &v.hi < c {
            return Ok(class_witness(n, v));
        }
    }
    Ok(Decision::unknown(
        vec![("class".into(), format!("undecided up to {limit}"))],
        BudgetSpent { moment_index: limit, ..Default::default() },
    ))
}

/// Decides `gamma_i(A) <= c` along the progression `p n + q`.
pub fn gamma_le(a: &RatMatrix, i: usize, c: &Rational, p: u64, q: u64, budget: &Budget) -> Result<Decision> {
    let report = analyze(a)?;
    gamma_on(&report, i, c, p, q, budget)
}

fn gamma_on(report: &SpectrumReport, i: usize, c: &Rational, p: u64, q: u64, budget: &Budget) -> Result<Decision> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidArgument("progression needs p, q >= 1".into()));
    }
    let Some(f) = class_of(report, i)? else {
        return Ok(empty_class());
    };
    // c - value >= c - torsion - G
    let g = f.generic_weight();
    let neg = f.negated();
    let shift = c - &g;
    let yes = (0..f.period).all(|n| neg.torsion_sign(p * n + q, &shift) >= 0);
    if yes {
        let reason = if f.generic.is_empty() { "periodic class" } else { "torus bound" };
        return Ok(Decision::yes(
            Certificate::Trivial { reason: reason.into(), values: vec![c.clone()] },
            BudgetSpent { moment_index: f.period, ..Default::default() },
        ));
    }
    if f.generic.is_empty() {
        let n = (0..f.period).find(|&n| neg.torsion_sign(p * n + q, c) < 0).expect("a residue is above c");
        let m = p * n + q;
        return Ok(class_witness(m, f.value(m, &[])));
    }
    let limit = budget.max_moment_index.min(MAX_CLASS_SCAN);
    let mut n = 0;
    while p * n + q <= limit {
        let m = p * n + q;
        let powers: Vec<Ball> = f.generic.iter().map(|(_, b)| b.pow(m, 2 * BITS)).collect();
        let v = f.value(m, &powers);
        if &v.lo > c {
            return Ok(class_witness(m, v));
        }
        n += 1;
    }
    Ok(Decision::unknown(
        vec![("class".into(), format!("undecided up to {limit}"))],
        BudgetSpent { moment_index: limit, ..Default::default() },
    ))
}

impl ClassFn {
    /// The class with every torsion multiplicity negated (generic part kept).
    fn negated(&self) -> NegatedClass<'_> {
        NegatedClass(self)
    }
}

struct NegatedClass<'a>(&'a ClassFn);

impl NegatedClass<'_> {
    fn torsion_sign(&self, n: u64, shift: &Rational) -> i32 {
        let mut terms: Vec<(Rational, u64)> = self.0.torsion_terms(n).into_iter().map(|(c, e)| (-c, e)).collect();
        terms.push((shift.clone(), 0));
        real_cyclotomic_sign(&terms, self.0.period)
    }
}

/// The criterion under which the classifier concluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// `eta_1, ..., eta_k >= 0` and `eta_(k+1) >= epsilon`.
    EtaBound { k: usize },
    /// `gamma_1, ..., gamma_k <= 0` and `gamma_(k+1) <= -epsilon`.
    GammaBound { k: usize },
    /// `eta_1 < 0`.
    NegativeEta,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::EtaBound { k } => write!(f, "i (k = {k})"),
            Criterion::GammaBound { k } => write!(f, "ii (k = {k})"),
            Criterion::NegativeEta => write!(f, "iii"),
        }
    }
}

/// Bound past which criterion (i) with index `k` forces positive moments.
pub(crate) fn eta_n_star(report: &SpectrumReport, k: usize, epsilon: &Rational, budget: &Budget) -> Option<u64> {
    let classes = report.peripheral();
    let d = classes.len();
    if k + 2 > d {
        return Some(0);
    }
    let sd = Rational::from_integer(BigInt::from(report.size * d));
    let ratio = sd / epsilon;
    if ratio <= Rational::one() {
        return Some(0);
    }
    let bits = budget.bits();
    let num = ln_upper(&ratio, bits);
    let den = ln_ratio_lower(&classes[k].modulus, &classes[k + 1].modulus, bits);
    ceil_bound(&(num / den), budget.max_moment_index)
}

/// Finds a criterion of the general classifier and decides accordingly.
pub fn classify_general(
    a: &RatMatrix,
    epsilon: &Rational,
    p: u64,
    q: u64,
    budget: &Budget,
) -> Result<(Decision, Option<Criterion>)> {
    if a.is_zero() {
        return Err(Error::Precondition("matrix is zero".into()));
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let report = analyze(a)?;
    let d = report.peripheral().len();
    let zero = Rational::zero();
    let neg_eps = -epsilon.clone();
    let mut stream = Stream::moments(a, &LinearFunctional::Trace)?;
    let mut status = Vec::new();

    let eta0: Vec<Decision> = (1..=d).map(|i| eta_on(&report, i, &zero, budget)).collect::<Result<_>>()?;
    if d > 0 && eta0[0].verdict == Verdict::No {
        return Ok((witness_scan(&mut stream, budget, "iii"), Some(Criterion::NegativeEta)));
    }
    status.push(("iii".into(), format!("eta_1 >= 0 is {}", if d == 0 { "yes" } else { eta0[0].verdict.as_str() })));

    for k in 0..d {
        let last = gamma_on(&report, k + 1, &neg_eps, p, q, budget)?;
        if last.verdict == Verdict::Yes {
            let crit = Criterion::GammaBound { k };
            return Ok((witness_scan(&mut stream, budget, "ii"), Some(crit)));
        }
        if gamma_on(&report, k + 1, &zero, p, q, budget)?.verdict != Verdict::Yes {
            status.push(("ii".into(), format!("gamma_{} <= 0 not certified", k + 1)));
            break;
        }
    }

    for k in 0..=d {
        let next = if k == d { Verdict::Yes } else { eta_on(&report, k + 1, epsilon, budget)?.verdict };
        if next == Verdict::Yes {
            let Some(n_star) = eta_n_star(&report, k, epsilon, budget) else {
                status.push(("i".into(), format!("bound for k = {k} exceeds the budget")));
                break;
            };
            let values = stream.prefix(n_star);
            let spent = BudgetSpent { moment_index: n_star, ..Default::default() };
            let crit = Some(Criterion::EtaBound { k });
            if let Some(n) = super::first_negative(&values) {
                return Ok((Decision::no_real(n as u64, values[n].clone(), spent), crit));
            }
            let cert = Certificate::EvalTable { criterion: "i".into(), k, epsilon: epsilon.clone(), n_star, values };
            return Ok((Decision::yes(cert, spent), crit));
        }
        if k == d || eta0[k].verdict != Verdict::Yes {
            status.push(("i".into(), format!("no k certified up to {k}")));
            break;
        }
    }
    Ok((Decision::unknown(status, BudgetSpent { moment_index: 0, ..Default::default() }), None))
}

/// The negative moment promised by criteria (ii) and (iii).
fn witness_scan(stream: &mut Stream, budget: &Budget, crit: &str) -> Decision {
    let max = budget.max_moment_index;
    match stream.find_negative(0, max, 1) {
        Some((n, v)) => Decision::no_real(n, v, BudgetSpent { moment_index: n, ..Default::default() }),
        None => Decision::unknown(
            vec![(crit.into(), format!("criterion holds but no negative moment up to {max}"))],
            BudgetSpent { moment_index: max, ..Default::default() },
        ),
    }
}
