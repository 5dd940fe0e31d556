//! Positivity of rational linear recurrence sequences.
//!
//! A sequence is reduced to its minimal recurrence, stripped of zero roots,
//! and written as `y_k = sum_j c_j lambda_j^k` over the simple roots of the
//! recurrence polynomial `R`, with `c_j = N(lambda_j) / R'(lambda_j)` read off
//! the generating function. The dominant coefficient's sign is exact; the
//! remaining coefficients are bounded by ball arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dominant::scan;
use super::{ceil_bound, ln_ratio_lower, ln_upper, Budget, BudgetSpent, Certificate, Decision, Stream, Verdict};
use crate::error::Result;
use crate::exactnum::complex::eval_ball;
use crate::exactnum::rational::lcm_of_denominators;
use crate::exactnum::trig::root_of_unity;
use crate::exactnum::{Ball, ComplexRat, IntPoly, Rational};
use crate::lrs::{minimal_recurrence, Lrs, LrsSpec};
use crate::matrix::RatMatrix;
use crate::spectra::{analyze, Eigenvalue, SpectrumReport, UnitArg};

const BALL_BITS: u32 = 128;

/// Positivity of a rational or Gaussian-rational LRS `u_1, u_2, ...`.
///
/// Over the Gaussian rationals a term counts as positive when it is real and
/// nonnegative.
pub fn decide_lrs(spec: &LrsSpec, budget: &Budget) -> Result<Decision> {
    match spec {
        LrsSpec::Rational(l) => {
            let mut stream = Stream::new(l.coeffs().to_vec(), l.initial().to_vec());
            let d = decide_stream(&mut stream, l.order(), budget)?;
            Ok(shift_index(d, 1))
        }
        LrsSpec::Gaussian(l) => decide_gaussian(l, budget),
        LrsSpec::IntPoly { .. } => Err(crate::Error::InvalidArgument(
            "positivity is decided for rational and Gaussian-rational sequences".into(),
        )),
    }
}

fn decide_gaussian(l: &Lrs<ComplexRat>, budget: &Budget) -> Result<Decision> {
    let s = l.order();
    // Re and Im each satisfy a rational recurrence of order at most 2s
    let terms = l.terms(4 * s);
    if let Some(n) = terms.iter().position(|t| !t.im.is_zero()) {
        return Ok(Decision::no(n as u64 + 1, terms[n].clone(), BudgetSpent::default()));
    }
    let re: Vec<Rational> = terms.iter().map(|t| t.re.clone()).collect();
    let rec = minimal_recurrence(&re);
    let initial = re[..rec.len()].to_vec();
    let mut stream = Stream::new(rec, initial);
    let d = decide_stream(&mut stream, 2 * s, budget)?;
    Ok(shift_index(d, 1))
}

/// Re-indexes a decision on `x_n = u_(n + offset)`.
fn shift_index(mut d: Decision, offset: u64) -> Decision {
    if let Certificate::NegativeMoment { n, .. } = &mut d.certificate {
        *n += offset;
    }
    d
}

/// Positivity of `x_0, x_1, ...` produced by `stream`, whose recurrence has
/// order at most `order`.
pub(crate) fn decide_stream(stream: &mut Stream, order: usize, budget: &Budget) -> Result<Decision> {
    decide_at_depth(stream, order, budget, 0)
}

fn decide_at_depth(stream: &mut Stream, order: usize, budget: &Budget, depth: u32) -> Result<Decision> {
    let terms = stream.prefix(2 * order as u64);
    let rec = minimal_recurrence(&terms);
    if rec.is_empty() {
        return Ok(Decision::yes(
            Certificate::Trivial { reason: "zero sequence".into(), values: terms },
            BudgetSpent::default(),
        ));
    }
    let m = rec.len();
    let zeros = rec.iter().rev().take_while(|a| a.is_zero()).count();
    if let Some(n) = super::first_negative(&terms[..zeros]) {
        return Ok(Decision::no_real(n as u64, terms[n].clone(), BudgetSpent::default()));
    }
    let core: Vec<Rational> = rec[..m - zeros].to_vec();
    if core.is_empty() {
        // eventually zero
        return Ok(Decision::yes(
            Certificate::SequenceBound { recurrence: rec, n_star: zeros as u64, values: stream.prefix(zeros as u64) },
            BudgetSpent { moment_index: zeros as u64, ..Default::default() },
        ));
    }
    let y: Vec<Rational> = (0..core.len()).map(|k| stream.get((k + zeros) as u64).clone()).collect();
    let comp = companion(&core);
    let report = analyze(&comp)?;
    let r = monic_int(&core);
    let simple = r.is_squarefree();
    let shift = zeros as u64;
    let finish = |stream: &mut Stream, n_star: Option<u64>| -> Decision {
        let Some(k) = n_star else {
            return scan(stream, budget);
        };
        let last = k + shift;
        let values = stream.prefix(last);
        let spent = BudgetSpent { moment_index: last, ..Default::default() };
        match super::first_negative(&values) {
            Some(n) => Decision::no_real(n as u64, values[n].clone(), spent),
            None => Decision::yes(Certificate::SequenceBound { recurrence: rec.clone(), n_star: last, values }, spent),
        }
    };
    if simple {
        if let Some(dom) = &report.unique_dominant {
            if !dom.positive {
                return Ok(scan(stream, budget));
            }
            return Ok(match dominant_bound(&core, &y, &report, budget) {
                Bound::Eventually(n) => finish(stream, n),
                Bound::Negative => scan(stream, budget),
            });
        }
        if let Some(o) = report.roots_of_unity_order {
            let period = comp.pow(o) == RatMatrix::identity(comp.size());
            if period {
                let last = shift + o - 1;
                let values = stream.prefix(last);
                let spent = BudgetSpent { moment_index: last, ..Default::default() };
                return Ok(match super::first_negative(&values) {
                    Some(n) => Decision::no_real(n as u64, values[n].clone(), spent),
                    None => Decision::yes(Certificate::Periodic { recurrence: rec, period: o, values }, spent),
                });
            }
        }
        if report.all_unit_modulus {
            if let Some(lower) = unit_lower_bound(&core, &y, &report) {
                let values = stream.prefix(shift);
                if super::first_negative(&values).is_none() {
                    return Ok(Decision::yes(
                        Certificate::TorusLowerBound { relations: vec![], lower_bound: lower, boxes: 0 },
                        BudgetSpent { moment_index: shift, ..Default::default() },
                    ));
                }
            }
        }
    }
    if report.all_real && depth == 0 {
        return parity_split(stream, m, budget);
    }
    Ok(scan(stream, budget))
}

/// Decides the even- and odd-indexed subsequences separately; their
/// recurrences have the squared roots, which are nonnegative reals.
fn parity_split(stream: &mut Stream, order: usize, budget: &Budget) -> Result<Decision> {
    let mut parts = Vec::new();
    for e in 0..2u64 {
        let sub: Vec<Rational> = (0..2 * order as u64 + 2).map(|k| stream.get(2 * k + e).clone()).collect();
        let rec = minimal_recurrence(&sub);
        let init = sub[..rec.len()].to_vec();
        let mut s = Stream::new(rec, init);
        let half = Budget { max_moment_index: budget.max_moment_index / 2, ..budget.clone() };
        parts.push(decide_at_depth(&mut s, order, &half, 1)?);
    }
    let witness = parts
        .iter()
        .enumerate()
        .filter_map(|(e, d)| d.witness().map(|(k, _)| 2 * k + e as u64))
        .min();
    if let Some(n) = witness {
        let v = stream.get(n).clone();
        return Ok(Decision::no_real(n, v, BudgetSpent { moment_index: n, ..Default::default() }));
    }
    if parts.iter().any(|d| d.verdict != Verdict::Yes) {
        return Ok(Decision::unknown(
            vec![("parity".into(), "a parity class is undecided".into())],
            BudgetSpent { moment_index: budget.max_moment_index, ..Default::default() },
        ));
    }
    let n_star = parts
        .iter()
        .enumerate()
        .map(|(e, d)| match &d.certificate {
            Certificate::SequenceBound { n_star, .. } | Certificate::Periodic { period: n_star, .. } => {
                2 * n_star + e as u64
            }
            _ => e as u64,
        })
        .max()
        .unwrap_or(0);
    let values = stream.prefix(n_star);
    let full = minimal_recurrence(&stream.prefix(2 * order as u64));
    Ok(Decision::yes(
        Certificate::SequenceBound { recurrence: full, n_star, values },
        BudgetSpent { moment_index: n_star, ..Default::default() },
    ))
}

/// Companion matrix of `x^m - a_1 x^(m-1) - ... - a_m`.
pub(crate) fn companion(a: &[Rational]) -> RatMatrix {
    let m = a.len();
    RatMatrix::from_fn(m, |i, j| {
        if j == 0 {
            a[i].clone()
        } else if j == i + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// Integer multiple of a rational polynomial given low degree first.
fn int_multiple(c: &[Rational]) -> (IntPoly, Rational) {
    let d = lcm_of_denominators(c.iter());
    let p = IntPoly::new(c.iter().map(|x| (x * Rational::from_integer(d.clone())).to_integer()).collect());
    (p, Rational::from_integer(d))
}

/// Integer multiple of `x^m - a_1 x^(m-1) - ... - a_m`.
fn monic_int(a: &[Rational]) -> IntPoly {
    int_multiple(&rec_poly(a)).0
}

fn rec_poly(a: &[Rational]) -> Vec<Rational> {
    let m = a.len();
    let mut c: Vec<Rational> = (0..m).map(|i| -a[m - 1 - i].clone()).collect();
    c.push(Rational::one());
    c
}

/// `N(x) = sum_i b_i x^(m-1-i)` with `b_i = y_i - sum_(l <= i) a_l y_(i-l)`.
fn numerator(a: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let m = a.len();
    let b: Vec<Rational> = (0..m)
        .map(|i| {
            let mut v = y[i].clone();
            for l in 1..=i {
                v -= &a[l - 1] * &y[i - l];
            }
            v
        })
        .collect();
    // low degree first: coefficient of x^k is b_(m-1-k)
    (0..m).map(|k| b[m - 1 - k].clone()).collect()
}

enum Bound {
    Eventually(Option<u64>),
    Negative,
}

/// Ball around an eigenvalue of the recurrence.
fn member_ball(v: &Eigenvalue) -> Ball {
    match v {
        Eigenvalue::Real(x) => {
            let iv = x.enclosure(&Rational::new(BigInt::one(), BigInt::one() << 100usize));
            Ball::new(ComplexRat::real((&iv.lo + &iv.hi) / Rational::from_integer(2.into())), iv.width())
        }
        Eigenvalue::Complex(b) => b.clone(),
    }
}

/// Upper bound on `|c_j|` for the root in `ball`.
fn coeff_upper(nump: &IntPoly, dr: &IntPoly, scale: &Rational, ball: &Ball) -> Option<Rational> {
    let num = eval_ball(nump, ball, BALL_BITS);
    let den = eval_ball(dr, ball, BALL_BITS);
    let low = den.abs_lower();
    if !low.is_positive() {
        return None;
    }
    Some(num.abs_upper() / low * scale.abs())
}

fn coeff_ball(nump: &IntPoly, dr: &IntPoly, scale: &Rational, ball: &Ball) -> Option<Ball> {
    let num = eval_ball(nump, ball, BALL_BITS);
    let den = eval_ball(dr, ball, BALL_BITS).inv()?;
    Some(num.mul(&den).scale(scale))
}

fn dominant_bound(a: &[Rational], y: &[Rational], report: &SpectrumReport, budget: &Budget) -> Bound {
    let dom = report.unique_dominant.as_ref().expect("unique dominant");
    let (nump, dn) = int_multiple(&numerator(a, y));
    let (rp, dr) = int_multiple(&rec_poly(a));
    let drp = rp.derivative();
    // c = (N_int / dn) / (R_int' / dr)
    let scale = &dr / &dn;
    let sign = dom.value.sign_of_poly(&nump) * dom.value.sign_of_poly(&drp) * if scale.is_negative() { -1 } else { 1 };
    if sign < 0 {
        return Bound::Negative;
    }
    let mut x = dom.value.clone();
    let c1_lower = loop {
        let iv = x.interval();
        let n = crate::exactnum::interval::eval_interval(&nump, &iv);
        let d = crate::exactnum::interval::eval_interval(&drp, &iv);
        if !n.contains_zero() && !d.contains_zero() {
            let nl = n.lo.abs().min(n.hi.abs());
            break nl / d.abs_upper() * scale.abs();
        }
        x.refine_to(&(iv.width() / Rational::from_integer(1024.into())));
    };
    let rest = &report.peripheral()[1..];
    let Some(second) = rest.first() else {
        return Bound::Eventually(Some(0));
    };
    let mut total = Rational::zero();
    for class in rest {
        for m in &class.members {
            match coeff_upper(&nump, &drp, &scale, &member_ball(&m.value)) {
                Some(c) => total += c,
                None => return Bound::Eventually(None),
            }
        }
    }
    let ratio = total / c1_lower;
    if ratio <= Rational::one() {
        return Bound::Eventually(Some(0));
    }
    let bits = budget.bits();
    let num = ln_upper(&ratio, bits);
    let den = ln_ratio_lower(&dom.value, &second.modulus, bits);
    Bound::Eventually(ceil_bound(&(num / den), budget.max_moment_index))
}

/// Ball around `exp(2 pi i k / o)`.
fn torsion_ball(k: u64, o: u64) -> Ball {
    let (c, s) = root_of_unity(k as i64, o, BALL_BITS);
    let two = Rational::from_integer(2.into());
    let center = ComplexRat::new((&c.lo + &c.hi) / &two, (&s.lo + &s.hi) / &two);
    Ball::new(center, (c.width() + s.width()) / two)
}

/// Certified positive lower bound for a sequence whose roots are simple and
/// of modulus one. Non-torsion roots are bounded over the full circle.
fn unit_lower_bound(a: &[Rational], y: &[Rational], report: &SpectrumReport) -> Option<Rational> {
    let (nump, dn) = int_multiple(&numerator(a, y));
    let (rp, dr) = int_multiple(&rec_poly(a));
    let drp = rp.derivative();
    let scale = &dr / &dn;
    let class = report.peripheral().first()?;
    let mut generic = Rational::zero();
    let mut torsion = Vec::new();
    let mut period = 1u64;
    for m in &class.members {
        let ball = member_ball(&m.value);
        match m.unit.torsion() {
            Some((o, k)) if !matches!(m.unit, UnitArg::Generic(_)) => {
                torsion.push((coeff_ball(&nump, &drp, &scale, &ball)?, o, k));
                period = num_integer::Integer::lcm(&period, &o);
            }
            _ => generic += coeff_upper(&nump, &drp, &scale, &ball)?,
        }
    }
    if period > 720 {
        return None;
    }
    let mut low: Option<Rational> = None;
    for r in 0..period {
        let mut acc = Ball::exact(ComplexRat::zero());
        for (c, o, k) in &torsion {
            acc = acc.add(&c.mul(&torsion_ball(k * r % o, *o)));
        }
        let v = acc.re_interval().0 - &generic;
        low = Some(match low {
            Some(l) if l < v => l,
            _ => v,
        });
    }
    low.filter(|l| l.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::int;

    fn lrs(a: &[i64], u: &[i64]) -> LrsSpec {
        LrsSpec::Rational(Lrs::new(a.iter().map(|&x| int(x)).collect(), u.iter().map(|&x| int(x)).collect()).unwrap())
    }

    fn witness(d: &Decision) -> Option<(u64, Rational)> {
        d.witness().map(|(n, v)| (n, v.re.clone()))
    }

    #[test]
    fn lrs_examples() {
        let b = Budget::default();
        let d = decide_lrs(&lrs(&[1, 1], &[1, 1]), &b).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        let d = decide_lrs(&lrs(&[-1], &[1]), &b).unwrap();
        assert_eq!(witness(&d), Some((2, int(-1))));
        let d = decide_lrs(&lrs(&[0, -1], &[1, 0]), &b).unwrap();
        assert_eq!(witness(&d), Some((3, int(-1))));
    }

    #[test]
    fn dominant_with_late_sign() {
        // u_n = 2^n - 100: first nonnegative at n = 7
        let d = decide_lrs(&lrs(&[3, -2], &[-98, -96]), &Budget::default()).unwrap();
        assert_eq!(witness(&d), Some((1, int(-98))));
        // u_n = 3^n - 2^(n+1) + 1 > 0 for n >= 1... u_1 = 0
        let d = decide_lrs(&lrs(&[6, -11, 6], &[0, 2, 12]), &Budget::default()).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
    }

    #[test]
    fn real_roots_of_equal_modulus() {
        // u_n = 2^n + (-2)^n + 1: roots 2, -2, 1
        let a = [1, 4, -4];
        let u: Vec<i64> = (1..=3).map(|n: u32| 2i64.pow(n) + (-2i64).pow(n) + 1).collect();
        let d = decide_lrs(&lrs(&a, &u), &Budget::default()).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        // u_n = 2^n + (-2)^n - 1 is negative at n = 1
        let u: Vec<i64> = (1..=3).map(|n: u32| 2i64.pow(n) + (-2i64).pow(n) - 1).collect();
        let d = decide_lrs(&lrs(&a, &u), &Budget::default()).unwrap();
        assert_eq!(witness(&d), Some((1, int(-1))));
    }

    #[test]
    fn gaussian_sequences() {
        let i = ComplexRat::new(int(0), int(1));
        let l = Lrs::new(vec![i.clone()], vec![i.clone()]).unwrap();
        let d = decide_lrs(&LrsSpec::Gaussian(l), &Budget::default()).unwrap();
        assert_eq!(d.witness().map(|(n, _)| n), Some(1));
        // u_n = i^(2n) = (-1)^n realised over Q(i)
        let l = Lrs::new(vec![ComplexRat::real(int(-1))], vec![ComplexRat::real(int(1))]).unwrap();
        let d = decide_lrs(&LrsSpec::Gaussian(l), &Budget::default()).unwrap();
        assert_eq!(d.witness().map(|(n, _)| n), Some(2));
    }

    #[test]
    fn periodic_and_unit() {
        // u_n = u_(n-3) with pattern 1, 1, 4
        let d = decide_lrs(&lrs(&[0, 0, 1], &[1, 1, 4]), &Budget::default()).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        assert!(matches!(d.certificate, Certificate::Periodic { period: 3, .. }));
        // u_n = 3 + 2 cos(n theta) with cos theta = 3/5: roots 1, (3 +- 4i)/5
        let v: Vec<Rational> = {
            let rot = RatMatrix::new(vec![vec![Rational::new(3.into(), 5.into()), Rational::new((-4).into(), 5.into())], vec![Rational::new(4.into(), 5.into()), Rational::new(3.into(), 5.into())]]).unwrap();
            let m = RatMatrix::identity(1).block_diag(&rot);
            let t = crate::matrix::moments(&m, &crate::matrix::LinearFunctional::Trace, 6).unwrap();
            t.iter().map(|x| x + int(2)).collect()
        };
        let rec = minimal_recurrence(&v[1..]);
        let l = Lrs::new(rec.clone(), v[1..=rec.len()].to_vec()).unwrap();
        let d = decide_lrs(&LrsSpec::Rational(l), &Budget::default()).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        assert!(matches!(d.certificate, Certificate::TorusLowerBound { .. }));
    }
}
