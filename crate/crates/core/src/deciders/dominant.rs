//! Deciders for a unique dominant eigenvalue and for real spectra.

use num_bigint::BigInt;
use num_traits::Signed;

use super::{ceil_bound, ln_ratio_lower, ln_upper, sequence, Budget, BudgetSpent, Certificate, Decision, Stream};
use crate::error::{Error, Result};
use crate::exactnum::{AlgebraicReal, Rational};
use crate::matrix::{LinearFunctional, RatMatrix};
use crate::spectra::{analyze, Eigenvalue, SpectrumReport, UnitArg};

/// Positivity of `phi(A^n)` when `A` has a unique dominant eigenvalue.
pub fn decide_dominant(a: &RatMatrix, phi: &LinearFunctional, budget: &Budget) -> Result<Decision> {
    phi.check_size(a.size())?;
    let report = analyze(a)?;
    if report.nilpotent {
        return nilpotent_yes(a, phi);
    }
    if report.unique_dominant.is_none() {
        return Err(Error::Precondition("no unique dominant eigenvalue".into()));
    }
    if !phi.is_trace() {
        let mut stream = Stream::moments(a, phi)?;
        return sequence::decide_stream(&mut stream, a.size(), budget);
    }
    dominant_trace(a, &report, budget)
}

fn nilpotent_yes(a: &RatMatrix, phi: &LinearFunctional) -> Result<Decision> {
    let v = phi.apply(&RatMatrix::identity(a.size()))?;
    if v.is_negative() {
        return Ok(Decision::no_real(0, v, BudgetSpent::default()));
    }
    Ok(Decision::yes(
        Certificate::Trivial { reason: "nilpotent".into(), values: vec![v] },
        BudgetSpent::default(),
    ))
}

/// The bound on `n` past which `k lambda_1^n` beats `(s - k) |lambda_2|^n`.
pub(crate) fn dominance_n_star(report: &SpectrumReport, budget: &Budget) -> Option<u64> {
    let dom = report.unique_dominant.as_ref()?;
    let s = report.size;
    let k = dom.multiplicity;
    let lambda2 = report.peripheral().get(1).map(|c| &c.modulus);
    let Some(lambda2) = lambda2 else {
        return Some(0);
    };
    let ratio = Rational::new(BigInt::from(s - k), BigInt::from(k));
    if ratio <= Rational::from_integer(1.into()) {
        return Some(0);
    }
    let bits = budget.bits();
    let num = ln_upper(&ratio, bits);
    let den = ln_ratio_lower(&dom.value.abs(), lambda2, bits);
    ceil_bound(&(num / den), budget.max_moment_index)
}

fn dominant_trace(a: &RatMatrix, report: &SpectrumReport, budget: &Budget) -> Result<Decision> {
    let dom = report.unique_dominant.as_ref().expect("checked by caller");
    let mut stream = Stream::moments(a, &LinearFunctional::Trace)?;
    if !dom.positive {
        // lambda_1^n eventually dominates with sign (-1)^n
        return Ok(scan(&mut stream, budget));
    }
    let Some(n_star) = dominance_n_star(report, budget) else {
        return Ok(scan(&mut stream, budget));
    };
    let values = stream.prefix(n_star);
    let spent = BudgetSpent { moment_index: n_star, ..Default::default() };
    if let Some(n) = super::first_negative(&values) {
        return Ok(Decision::no_real(n as u64, values[n].clone(), spent));
    }
    Ok(Decision::yes(
        Certificate::DominanceBound { n_star, lambda: dom.value.clone(), multiplicity: dom.multiplicity, values },
        spent,
    ))
}

/// Plain search for a negative term, `UNKNOWN` at the budget.
pub(crate) fn scan(stream: &mut Stream, budget: &Budget) -> Decision {
    let max = budget.max_moment_index;
    match stream.find_negative(0, max, 1) {
        Some((n, v)) => Decision::no_real(n, v, BudgetSpent { moment_index: n, ..Default::default() }),
        None => Decision::unknown(
            vec![("scan".into(), format!("no negative value up to {max}"))],
            BudgetSpent { moment_index: max, ..Default::default() },
        ),
    }
}

/// `(modulus, m_plus - m_minus)` for each nonzero class of a real spectrum.
pub(crate) fn odd_weights(report: &SpectrumReport) -> Vec<(AlgebraicReal, i64)> {
    report
        .peripheral()
        .iter()
        .map(|c| {
            let e = c
                .members
                .iter()
                .map(|m| match (&m.value, &m.unit) {
                    (Eigenvalue::Real(_), UnitArg::Plus) => m.multiplicity as i64,
                    (Eigenvalue::Real(_), UnitArg::Minus) => -(m.multiplicity as i64),
                    _ => 0,
                })
                .sum();
            (c.modulus.clone(), e)
        })
        .collect()
}

/// Bound past which the top weighted modulus decides the odd moments, or
/// `None` when it is out of budget. Requires a positive top weight.
pub(crate) fn odd_n_star(weights: &[(AlgebraicReal, i64)], budget: &Budget) -> Option<u64> {
    let mut live = weights.iter().filter(|(_, e)| *e != 0);
    let (top, e_top) = live.next()?;
    let rest: Vec<_> = live.collect();
    let Some((next, _)) = rest.first() else {
        return Some(0);
    };
    let tail: i64 = rest.iter().map(|(_, e)| e.abs()).sum();
    let ratio = Rational::new(BigInt::from(tail), BigInt::from(*e_top));
    if ratio <= Rational::from_integer(1.into()) {
        return Some(0);
    }
    let bits = budget.bits();
    let num = ln_upper(&ratio, bits);
    let den = ln_ratio_lower(top, next, bits);
    ceil_bound(&(num / den), budget.max_moment_index)
}

/// Positivity of `tr(A^n)` for a matrix with only real eigenvalues.
pub fn decide_real_spectrum(a: &RatMatrix, budget: &Budget) -> Result<Decision> {
    let report = analyze(a)?;
    if !report.all_real {
        return Err(Error::Precondition("spectrum is not real".into()));
    }
    let weights = odd_weights(&report);
    let mut stream = Stream::moments(a, &LinearFunctional::Trace)?;
    let top = weights.iter().find(|(_, e)| *e != 0);
    let Some((_, e_top)) = top else {
        let values = stream.prefix(1);
        return Ok(Decision::yes(
            Certificate::Trivial { reason: "odd moments cancel".into(), values },
            BudgetSpent::default(),
        ));
    };
    if *e_top < 0 {
        return Ok(match stream.find_negative(1, budget.max_moment_index, 2) {
            Some((n, v)) => Decision::no_real(n, v, BudgetSpent { moment_index: n, ..Default::default() }),
            None => scan(&mut stream, budget),
        });
    }
    let Some(n_star) = odd_n_star(&weights, budget) else {
        return Ok(scan(&mut stream, budget));
    };
    let values = stream.prefix(n_star.max(1));
    let spent = BudgetSpent { moment_index: n_star, ..Default::default() };
    if let Some(n) = super::first_negative(&values) {
        return Ok(Decision::no_real(n as u64, values[n].clone(), spent));
    }
    Ok(Decision::yes(Certificate::OddBound { n_star, weights, values }, spent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deciders::Verdict;
    use crate::exactnum::rational::int;

    fn diag(v: &[i64]) -> RatMatrix {
        RatMatrix::diagonal(v.iter().map(|&x| int(x)).collect())
    }

    fn run(v: &[i64]) -> Decision {
        decide_dominant(&diag(v), &LinearFunctional::Trace, &Budget::default()).unwrap()
    }

    #[test]
    fn dominant_examples() {
        let d = run(&[2, -1]);
        assert_eq!(d.verdict, Verdict::Yes);
        match &d.certificate {
            Certificate::DominanceBound { n_star, values, .. } => {
                assert_eq!(*n_star, 0);
                assert_eq!(values, &vec![int(2)]);
            }
            c => panic!("{c:?}"),
        }
        let d = run(&[2, -3]);
        assert_eq!(d.verdict, Verdict::No);
        assert_eq!(d.witness().map(|(n, v)| (n, v.re.clone())), Some((1, int(-1))));
        let d = run(&[3, 2, 2]);
        assert_eq!(d.verdict, Verdict::Yes);
        match &d.certificate {
            // log 2 / log(3/2) = 1.709...
            Certificate::DominanceBound { n_star, values, .. } => {
                assert_eq!(*n_star, 2);
                assert_eq!(&values[..2], &[int(3), int(7)]);
            }
            c => panic!("{c:?}"),
        }
        let e = decide_dominant(&diag(&[1, -1]), &LinearFunctional::Trace, &Budget::default());
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn real_spectrum_examples() {
        let b = Budget::default();
        let d = decide_real_spectrum(&diag(&[1, -1]), &b).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        let d = decide_real_spectrum(&diag(&[2, -2, 1]), &b).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        let d = decide_real_spectrum(&diag(&[2, -2, -1]), &b).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        assert_eq!(d.witness().map(|(n, v)| (n, v.re.clone())), Some((1, int(-1))));
        // 3^n - 2^n - 2^n - 2^n: odd moments negative at n = 1, 3
        let d = decide_real_spectrum(&diag(&[3, -2, -2, -2]), &b).unwrap();
        assert_eq!(d.witness().map(|(n, _)| n), Some(1));
        let rot = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert!(decide_real_spectrum(&rot, &b).is_err());
    }

    #[test]
    fn real_bound_is_checked() {
        // 5^n - 4^n - 4^n: negative at n = 1, positive from n = 4
        let d = decide_real_spectrum(&diag(&[5, -4, -4]), &Budget::default()).unwrap();
        assert_eq!(d.witness().map(|(n, v)| (n, v.re.clone())), Some((1, int(-3))));
        let d = decide_real_spectrum(&diag(&[5, 4, -4, -3]), &Budget::default()).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
    }
}
