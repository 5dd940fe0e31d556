//! Independent re-checking of decisions by exact recomputation.

use num_traits::{Signed, Zero};

use super::dominant::{dominance_n_star, odd_n_star, odd_weights};
use super::peripheral::eta_n_star;
use super::torus::{minimize, verify_pair, TraceFunction};
use super::{decide, Certificate, Decision, Options, Problem, Verdict};
use crate::error::Result;
use crate::exactnum::{ComplexRat, Rational};
use crate::lrs::LrsSpec;
use crate::matrix::{moments, LinearFunctional, RatMatrix};
use crate::spectra::analyze;

/// Exact value of the `n`-th term of the problem's sequence.
fn term(problem: &Problem, n: u64) -> Result<ComplexRat> {
    Ok(match problem {
        Problem::Moments { a, phi } => ComplexRat::real(crate::matrix::moment(a, phi, n)?),
        Problem::Unitary(u) => u.pow(n).trace(),
        Problem::Sequence(spec) => match spec.term(n as usize)? {
            crate::lrs::RingElement::Rational(r) => ComplexRat::real(r),
            crate::lrs::RingElement::Gaussian(z) => z,
            crate::lrs::RingElement::Poly(_) => return Err(crate::Error::InvalidArgument("polynomial sequence".into())),
        },
    })
}

fn negative(z: &ComplexRat) -> bool {
    !z.im.is_zero() || z.re.is_negative()
}

/// Whether `values` are exactly the terms with indices `first..` and all positive.
fn table_ok(problem: &Problem, first: u64, values: &[Rational]) -> Result<bool> {
    for (i, v) in values.iter().enumerate() {
        let t = term(problem, first + i as u64)?;
        if t != ComplexRat::real(v.clone()) || v.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn first_index(problem: &Problem) -> u64 {
    match problem {
        Problem::Sequence(_) => 1,
        _ => 0,
    }
}

/// Checks that `decision` is justified for `problem`.
///
/// Witnesses and tables are recomputed exactly; bounds are re-derived from a
/// fresh spectral analysis; torus relations are re-verified before the lower
/// bound is recomputed. Certificates that only summarise a decider run are
/// checked by re-running the deterministic decider.
pub fn verify(problem: &Problem, decision: &Decision, opts: &Options) -> Result<bool> {
    let cert = &decision.certificate;
    let verdict_ok = match cert {
        Certificate::NegativeMoment { .. } => decision.verdict == Verdict::No,
        Certificate::None { .. } => decision.verdict == Verdict::Unknown,
        Certificate::ClassValue { .. } => false,
        _ => decision.verdict == Verdict::Yes,
    };
    if !verdict_ok {
        return Ok(false);
    }
    let budget = &opts.budget;
    match (cert, problem) {
        (Certificate::NegativeMoment { n, value }, _) => {
            if matches!(problem, Problem::Sequence(_)) && *n == 0 {
                return Ok(false);
            }
            Ok(&term(problem, *n)? == value && negative(value))
        }
        (Certificate::None { .. }, _) => Ok(true),
        (Certificate::DominanceBound { n_star, values, .. }, Problem::Moments { a, phi }) if phi.is_trace() => {
            let report = analyze(a)?;
            let ok = report.unique_dominant.as_ref().is_some_and(|d| d.positive)
                && dominance_n_star(&report, budget) == Some(*n_star)
                && values.len() as u64 == n_star + 1;
            Ok(ok && table_ok(problem, 0, values)?)
        }
        (Certificate::OddBound { n_star, values, .. }, Problem::Moments { a, phi }) if phi.is_trace() => {
            let report = analyze(a)?;
            let weights = odd_weights(&report);
            let top_positive = weights.iter().find(|(_, e)| *e != 0).is_some_and(|(_, e)| *e > 0);
            let ok = report.all_real && top_positive && odd_n_star(&weights, budget) == Some(*n_star);
            Ok(ok && table_ok(problem, 0, values)?)
        }
        (Certificate::FiniteGroup { order, values }, _) => {
            let identity = match problem {
                Problem::Moments { a, phi } => phi.is_trace() && a.pow(*order) == RatMatrix::identity(a.size()),
                Problem::Unitary(u) => u.pow(*order) == super::GaussMatrix::identity(u.size()),
                Problem::Sequence(_) => false,
            };
            if !identity || values.len() as u64 != *order {
                return Ok(false);
            }
            for (n, v) in values.iter().enumerate() {
                if &term(problem, n as u64)? != v || negative(v) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Certificate::TorusLowerBound { relations, lower_bound, .. }, Problem::Moments { a, phi })
            if phi.is_trace() =>
        {
            torus_ok(a, relations, lower_bound, opts)
        }
        (Certificate::TorusLowerBound { relations, lower_bound, .. }, Problem::Unitary(u)) => {
            let psi = super::psi_embed(u)?;
            torus_ok(&psi, relations, &(lower_bound * Rational::from_integer(2.into())), opts)
        }
        (Certificate::EvalTable { k, epsilon, n_star, values, .. }, Problem::Moments { a, phi }) if phi.is_trace() => {
            let report = analyze(a)?;
            let zero = Rational::zero();
            for i in 1..=*k {
                if super::eta_ge(a, i, &zero, budget)?.verdict != Verdict::Yes {
                    return Ok(false);
                }
            }
            if super::eta_ge(a, k + 1, epsilon, budget)?.verdict != Verdict::Yes {
                return Ok(false);
            }
            let ok = eta_n_star(&report, *k, epsilon, budget) == Some(*n_star) && values.len() as u64 == n_star + 1;
            Ok(ok && table_ok(problem, 0, values)?)
        }
        (Certificate::SequenceBound { values, .. } | Certificate::Periodic { values, .. }, _) => {
            if !table_ok(problem, first_index(problem), values)? {
                return Ok(false);
            }
            rerun(problem, decision, opts)
        }
        (Certificate::Trivial { .. }, _) | (Certificate::TorusLowerBound { .. }, Problem::Sequence(_)) => {
            rerun(problem, decision, opts)
        }
        _ => Ok(false),
    }
}

fn rerun(problem: &Problem, decision: &Decision, opts: &Options) -> Result<bool> {
    let again = match problem {
        Problem::Moments { a, phi } if !phi.is_trace() => {
            let o = Options { mode: super::Mode::Auto, ..opts.clone() };
            decide(&Problem::Moments { a: a.clone(), phi: phi.clone() }, &o)?
        }
        Problem::Moments { a, .. } if matches!(decision.certificate, Certificate::Trivial { .. }) => {
            return trivial_moments(a, decision);
        }
        _ => decide(problem, opts)?,
    };
    Ok(&again == decision)
}

/// Structural YES certificates for trace moments.
fn trivial_moments(a: &RatMatrix, decision: &Decision) -> Result<bool> {
    let Certificate::Trivial { reason, values } = &decision.certificate else {
        return Ok(false);
    };
    let s = a.size();
    Ok(match reason.as_str() {
        "nilpotent" => a.pow(s as u64).is_zero() && values == &vec![Rational::from_integer(s.into())],
        "odd moments cancel" => {
            let report = analyze(a)?;
            report.all_real
                && odd_weights(&report).iter().all(|(_, e)| *e == 0)
                && values == &moments(a, &LinearFunctional::Trace, 1)?
        }
        _ => false,
    })
}

fn torus_ok(a: &RatMatrix, relations: &[Vec<i64>], lower: &Rational, opts: &Options) -> Result<bool> {
    if !a.is_orthogonal() || lower.is_negative() {
        return Ok(false);
    }
    let f = TraceFunction::of_orthogonal(a)?;
    let k = f.coords.len();
    for r in relations {
        if r.len() != k {
            return Ok(false);
        }
        let support: Vec<usize> = (0..k).filter(|&j| r[j] != 0).collect();
        let ok = match support.as_slice() {
            [j] => f.coords[*j].torsion.is_some_and(|(o, _)| r[*j] % o as i64 == 0),
            [x, y] => verify_pair(a, &f, *x, r[*x], *y, r[*y]),
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    let bound = minimize(&f, relations, &opts.budget);
    Ok(bound.lower.is_some_and(|l| &l >= lower || !l.is_negative() && lower.is_zero()))
}

/// Convenience for sequences given directly.
pub fn verify_sequence(spec: &LrsSpec, decision: &Decision, opts: &Options) -> Result<bool> {
    verify(&Problem::Sequence(spec.clone()), decision, opts)
}
