//! Decision procedures for positivity of moment sequences.
//!
//! Every verdict carries a certificate that [`verify`] re-checks by exact
//! recomputation. `Unknown` is returned when the budget runs out or when no
//! strand can certify an answer; it is never a guess.

pub mod dominant;
pub mod orthogonal;
pub mod peripheral;
pub mod sequence;
pub mod torus;
pub mod verify;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactnum::{AlgebraicReal, ComplexRat, Rational};

pub use dominant::{decide_dominant, decide_real_spectrum};
pub use orthogonal::{decide_orthogonal, decide_unitary, invariant_polys, psi_embed, GaussMatrix};
pub use peripheral::{classify_general, eta_ge, gamma_le, Criterion};
pub use sequence::decide_lrs;
pub use verify::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Resource limits for the semi-decision strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_moment_index: u64,
    pub max_invariant_degree: u32,
    pub relation_exponent_bound: u32,
    /// Maximum bisection depth of the torus branch-and-bound.
    pub minimization_depth: u32,
    /// Target width of numeric enclosures.
    pub tolerance: Rational,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_moment_index: 10_000,
            max_invariant_degree: 4,
            relation_exponent_bound: 20,
            minimization_depth: 16,
            tolerance: Rational::new(BigInt::from(1), BigInt::from(1u64 << 40)),
        }
    }
}

impl Budget {
    /// Bits of precision implied by the tolerance.
    pub fn bits(&self) -> u32 {
        let t = &self.tolerance;
        let q = t.denom().bits() as i64 - t.numer().bits() as i64;
        q.clamp(16, 4096) as u32 + 8
    }
}

/// What a decision actually consumed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BudgetSpent {
    pub moment_index: u64,
    pub degree: u32,
    pub relation_bound: u32,
}

/// Evidence behind a verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// `phi(A^n)` (or `u_n`) is negative or not real.
    NegativeMoment { n: u64, value: ComplexRat },
    /// `mu_n^(i)` (or a class value on a progression) certifiably beyond the threshold;
    /// `value` encloses it.
    ClassValue { n: u64, lo: Rational, hi: Rational },
    /// Structural reason with the exact values it relies on.
    Trivial { reason: String, values: Vec<Rational> },
    /// All values up to `n_star` checked; past it the dominant term wins.
    DominanceBound { n_star: u64, lambda: AlgebraicReal, multiplicity: usize, values: Vec<Rational> },
    /// Odd moments up to `n_star` checked for a real spectrum; weights are
    /// `(modulus, m_plus - m_minus)`.
    OddBound { n_star: u64, weights: Vec<(AlgebraicReal, i64)>, values: Vec<Rational> },
    /// `A^order = I`; the full table of one period.
    FiniteGroup { order: u64, values: Vec<ComplexRat> },
    /// Minimum of the trace function over a closed subgroup containing the
    /// orbit closure, defined by the listed verified relations.
    TorusLowerBound { relations: Vec<Vec<i64>>, lower_bound: Rational, boxes: u64 },
    /// Criterion-driven finite check (general classifier).
    EvalTable { criterion: String, k: usize, epsilon: Rational, n_star: u64, values: Vec<Rational> },
    /// Sequence bridged to a recurrence with simple roots: `values` covers
    /// indices up to `n_star`, beyond which the dominant root decides.
    SequenceBound { recurrence: Vec<Rational>, n_star: u64, values: Vec<Rational> },
    /// Periodic sequence: the recurrence's companion matrix has order `period`.
    Periodic { recurrence: Vec<Rational>, period: u64, values: Vec<Rational> },
    /// No strand concluded.
    None { status: Vec<(String, String)> },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::NegativeMoment { .. } => "negative_moment",
            Certificate::ClassValue { .. } => "class_value",
            Certificate::Trivial { .. } => "trivial",
            Certificate::DominanceBound { .. } => "dominance_bound",
            Certificate::OddBound { .. } => "odd_bound",
            Certificate::FiniteGroup { .. } => "finite_group",
            Certificate::TorusLowerBound { .. } => "torus_lower_bound",
            Certificate::EvalTable { .. } => "eval_table",
            Certificate::SequenceBound { .. } => "sequence_bound",
            Certificate::Periodic { .. } => "periodic",
            Certificate::None { .. } => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub budget_spent: BudgetSpent,
}

impl Decision {
    pub fn yes(certificate: Certificate, spent: BudgetSpent) -> Self {
        Decision { verdict: Verdict::Yes, certificate, budget_spent: spent }
    }

    pub fn no(n: u64, value: ComplexRat, spent: BudgetSpent) -> Self {
        Decision { verdict: Verdict::No, certificate: Certificate::NegativeMoment { n, value }, budget_spent: spent }
    }

    pub fn no_real(n: u64, value: Rational, spent: BudgetSpent) -> Self {
        Self::no(n, ComplexRat::real(value), spent)
    }

    pub fn unknown(status: Vec<(String, String)>, spent: BudgetSpent) -> Self {
        Decision { verdict: Verdict::Unknown, certificate: Certificate::None { status }, budget_spent: spent }
    }

    /// The witness `(n, value)` of a NO decision with an exact moment.
    pub fn witness(&self) -> Option<(u64, &ComplexRat)> {
        match &self.certificate {
            Certificate::NegativeMoment { n, value } => Some((*n, value)),
            _ => None,
        }
    }
}

/// Index of the first negative entry.
pub(crate) fn first_negative(values: &[Rational]) -> Option<usize> {
    values.iter().position(Signed::is_negative)
}

/// `n_star = max(0, ceil(upper bound))`, or `None` past `limit`.
pub(crate) fn ceil_bound(upper: &Rational, limit: u64) -> Option<u64> {
    if !upper.is_positive() {
        return Some(0);
    }
    let c = crate::exactnum::rational::ceil(upper);
    use num_traits::ToPrimitive;
    c.to_u64().filter(|&n| n <= limit)
}

/// Exact terms of a sequence given by its first terms and a recurrence
/// `x_n = a_1 x_(n-1) + ... + a_L x_(n-L)`, valid once the initial terms run out.
#[derive(Clone, Debug)]
pub(crate) struct Stream {
    coeffs: Vec<Rational>,
    terms: Vec<Rational>,
}

impl Stream {
    pub fn new(coeffs: Vec<Rational>, initial: Vec<Rational>) -> Self {
        debug_assert!(initial.len() >= coeffs.len());
        Stream { coeffs, terms: initial }
    }

    /// `phi(A^n)` for `n >= 0`, extended by the Cayley-Hamilton recurrence.
    pub fn moments(a: &crate::matrix::RatMatrix, phi: &crate::matrix::LinearFunctional) -> crate::Result<Self> {
        let s = a.size();
        let initial = crate::matrix::moments(a, phi, s.saturating_sub(1) as u64)?;
        let cp = a.char_poly_rational();
        let coeffs = (1..=s).map(|i| -cp[s - i].clone()).collect();
        Ok(Stream::new(coeffs, initial))
    }

    pub fn get(&mut self, n: u64) -> &Rational {
        let n = n as usize;
        while self.terms.len() <= n {
            let len = self.terms.len();
            let mut acc = Rational::zero();
            for (i, a) in self.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    acc += a * &self.terms[len - 1 - i];
                }
            }
            self.terms.push(acc);
        }
        &self.terms[n]
    }

    /// Terms `0..=last`.
    pub fn prefix(&mut self, last: u64) -> Vec<Rational> {
        self.get(last);
        self.terms[..=last as usize].to_vec()
    }

    /// First index in `from..=to` (stepping by `step`) with a negative term.
    pub fn find_negative(&mut self, from: u64, to: u64, step: u64) -> Option<(u64, Rational)> {
        let mut n = from;
        while n <= to {
            if self.get(n).is_negative() {
                return Some((n, self.get(n).clone()));
            }
            n += step.max(1);
        }
        None
    }
}


/// Lower bound of `ln(x / y)` for algebraic reals `x > y > 0`.
pub(crate) fn ln_ratio_lower(x: &AlgebraicReal, y: &AlgebraicReal, bits: u32) -> Rational {
    let mut x = x.clone();
    let mut y = y.clone();
    let mut w = Rational::new(BigInt::from(1), BigInt::from(1u64 << 20));
    loop {
        x.refine_to(&w);
        y.refine_to(&w);
        if x.lo() > y.hi() && y.lo().is_positive() {
            let r = x.lo() / y.hi();
            let l = crate::exactnum::trig::ln(&r, bits).lo;
            if l.is_positive() {
                return l;
            }
        }
        w = &w / Rational::from_integer(BigInt::from(1u64 << 16));
    }
}

/// Upper bound of `ln x` for rational `x > 0`.
pub(crate) fn ln_upper(x: &Rational, bits: u32) -> Rational {
    crate::exactnum::trig::ln(x, bits).hi
}

/// An instance of the positivity problem.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    /// `phi(A^n) >= 0` for all `n >= 0`.
    Moments { a: crate::matrix::RatMatrix, phi: crate::matrix::LinearFunctional },
    /// `tr(U^n)` real and nonnegative for all `n >= 0`.
    Unitary(GaussMatrix),
    /// `u_n` (real and) nonnegative for all `n >= 1`.
    Sequence(crate::lrs::LrsSpec),
}

/// Which decider to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Dominant,
    Real,
    Orthogonal,
    Unitary,
    General,
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Ok(match s {
            "auto" => Mode::Auto,
            "dominant" => Mode::Dominant,
            "real" => Mode::Real,
            "orthogonal" => Mode::Orthogonal,
            "unitary" => Mode::Unitary,
            "general" => Mode::General,
            _ => return Err(crate::Error::InvalidArgument(format!("unknown mode {s}"))),
        })
    }
}

/// Parameters shared by the deciders.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub mode: Mode,
    pub epsilon: Rational,
    pub p: u64,
    pub q: u64,
    pub budget: Budget,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Auto,
            epsilon: Rational::new(BigInt::from(1), BigInt::from(16)),
            p: 1,
            q: 1,
            budget: Budget::default(),
        }
    }
}

/// Runs the decider selected by `opts.mode`. In automatic mode the order is
/// finite group, dominant eigenvalue, real spectrum, orthogonal, general.
pub fn decide(problem: &Problem, opts: &Options) -> crate::Result<Decision> {
    use crate::error::Error;
    let budget = &opts.budget;
    match problem {
        Problem::Unitary(u) => decide_unitary(u, budget),
        Problem::Sequence(spec) => decide_lrs(spec, budget),
        Problem::Moments { a, phi } => {
            phi.check_size(a.size())?;
            let general = || classify_general(a, &opts.epsilon, opts.p, opts.q, budget).map(|(d, _)| d);
            match opts.mode {
                Mode::Dominant => decide_dominant(a, phi, budget),
                Mode::Real => decide_real_spectrum(a, budget),
                Mode::Orthogonal => decide_orthogonal(a, budget),
                Mode::General => general(),
                Mode::Unitary => Err(Error::InvalidArgument("unitary mode needs a Gaussian matrix".into())),
                Mode::Auto if !phi.is_trace() => {
                    let mut stream = Stream::moments(a, phi)?;
                    sequence::decide_stream(&mut stream, a.size(), budget)
                }
                Mode::Auto => {
                    if let Some(d) = orthogonal::finite_group(a)? {
                        return Ok(d);
                    }
                    let report = crate::spectra::analyze(a)?;
                    if report.nilpotent || report.unique_dominant.is_some() {
                        decide_dominant(a, phi, budget)
                    } else if report.all_real {
                        decide_real_spectrum(a, budget)
                    } else if a.is_orthogonal() {
                        decide_orthogonal(a, budget)
                    } else {
                        general()
                    }
                }
            }
        }
    }
}
