//! Certified spectral classification of rational matrices.
//!
//! Eigenvalues are grouped by exact modulus. For spectra with non-real
//! eigenvalues, every `|lambda|^2` is a real root of the pairwise-product
//! polynomial of the characteristic polynomial; each eigenvalue enclosure is
//! matched against the isolated roots of that polynomial, so equal moduli are
//! detected exactly rather than numerically.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::complex::isolate_complex_roots_from;
use crate::exactnum::rational::{approx_f64, int};
use crate::exactnum::{
    isolate_real_roots, pairwise_product_poly, roots_of_unity_order, AlgebraicReal, Ball, ComplexRat, IntPoly,
    RatInterval, Rational,
};
use crate::matrix::RatMatrix;

/// Precision ceiling for complex root isolation.
const MAX_BITS: u32 = 1 << 13;
/// Largest root-of-unity order tried when certifying unit arguments.
const MAX_UNIT_ORDER: u64 = 720;

#[derive(Clone, Debug)]
pub enum Eigenvalue {
    Real(AlgebraicReal),
    /// A non-real eigenvalue, enclosed in a ball isolating it from the other
    /// roots of its squarefree factor.
    Complex(Ball),
}

/// The unit argument `lambda / |lambda|` of an eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitArg {
    /// The eigenvalue is zero.
    Zero,
    Plus,
    Minus,
    /// `exp(2 pi i index / order)`, certified exactly.
    RootOfUnity { order: u64, index: u64 },
    /// No torsion certified; `ball` encloses the unit argument.
    Generic(Ball),
}

impl UnitArg {
    /// `(order, index)` for torsion arguments, with `+1 = (1, 0)`, `-1 = (2, 1)`.
    pub fn torsion(&self) -> Option<(u64, u64)> {
        match self {
            UnitArg::Plus => Some((1, 0)),
            UnitArg::Minus => Some((2, 1)),
            UnitArg::RootOfUnity { order, index } => Some((*order, *index)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Member {
    pub value: Eigenvalue,
    pub multiplicity: usize,
    pub unit: UnitArg,
}

impl Member {
    pub fn is_real(&self) -> bool {
        matches!(self.value, Eigenvalue::Real(_))
    }
}

#[derive(Clone, Debug)]
pub struct ModulusClass {
    pub modulus: AlgebraicReal,
    pub members: Vec<Member>,
}

impl ModulusClass {
    pub fn multiplicity(&self) -> usize {
        self.members.iter().map(|m| m.multiplicity).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.modulus.sign() == 0
    }

    /// Common order of all unit arguments, when every one is certified torsion.
    pub fn torsion_order(&self) -> Option<u64> {
        self.members
            .iter()
            .map(|m| m.unit.torsion().map(|t| t.0))
            .try_fold(1u64, |acc, o| o.map(|o| acc.lcm(&o)))
    }

    /// Unit arguments as `(exponent mod order, multiplicity)` over the common order.
    pub fn torsion_exponents(&self) -> Option<(u64, Vec<(u64, usize)>)> {
        let order = self.torsion_order()?;
        let ex = self
            .members
            .iter()
            .map(|m| {
                let (o, k) = m.unit.torsion().expect("torsion");
                (k * (order / o) % order, m.multiplicity)
            })
            .collect();
        Some((order, ex))
    }
}

#[derive(Clone, Debug)]
pub struct Dominant {
    pub value: AlgebraicReal,
    pub multiplicity: usize,
    pub positive: bool,
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub size: usize,
    /// Least common denominator `c`; `char_poly` is that of `c * A`.
    pub scale: BigInt,
    pub char_poly: IntPoly,
    /// Strictly decreasing moduli; a zero class, if any, comes last.
    pub classes: Vec<ModulusClass>,
    pub unique_dominant: Option<Dominant>,
    pub all_real: bool,
    pub all_unit_modulus: bool,
    /// Least `o` with `lambda^o = 1` for all eigenvalues, if they are all roots of unity.
    pub roots_of_unity_order: Option<u64>,
    pub nilpotent: bool,
}

impl SpectrumReport {
    /// The nonzero classes, i.e. the peripheral partition without empty or zero parts.
    pub fn peripheral(&self) -> &[ModulusClass] {
        match self.classes.last() {
            Some(c) if c.is_zero() => &self.classes[..self.classes.len() - 1],
            _ => &self.classes,
        }
    }
}

/// An eigenvalue of the scaled matrix `cA` with an enclosure of `|rho|^2`.
struct Scaled {
    value: Eigenvalue,
    multiplicity: usize,
    norm_sqr: RatInterval,
}

pub fn analyze(a: &RatMatrix) -> Result<SpectrumReport> {
    let s = a.size();
    let (p, c) = a.char_poly();
    let zeros = p.coeffs().iter().take_while(|x| x.is_zero()).count();
    let p0 = IntPoly::new(p.coeffs()[zeros..].to_vec());
    let roots_of_unity_order = if zeros == 0 { unit_order(a) } else { None };
    let inv_c = Rational::new(BigInt::one(), c.clone());

    let mut classes = Vec::new();
    if !p0.is_constant() {
        let factors = p0.squarefree_decomposition();
        let all_real_count: usize = factors
            .iter()
            .map(|(f, _)| isolate_real_roots(f).map(|r| r.len()))
            .sum::<Result<usize>>()?;
        let all_real = all_real_count == factors.iter().map(|(f, _)| f.deg()).sum::<usize>();
        let scaled_classes = if all_real { real_classes(&factors)? } else { general_classes(&factors, &p0)? };
        for (modulus, members) in scaled_classes {
            let modulus_a = modulus.mul_rational(&inv_c);
            let members = unit_arguments(a, &modulus, members);
            let members = members
                .into_iter()
                .map(|(value, multiplicity, unit)| Member {
                    value: match value {
                        Eigenvalue::Real(x) => Eigenvalue::Real(x.mul_rational(&inv_c)),
                        Eigenvalue::Complex(b) => Eigenvalue::Complex(b.scale(&inv_c)),
                    },
                    multiplicity,
                    unit,
                })
                .collect();
            classes.push(ModulusClass { modulus: modulus_a, members });
        }
    }
    if zeros > 0 {
        classes.push(ModulusClass {
            modulus: AlgebraicReal::from_int(0),
            members: vec![Member {
                value: Eigenvalue::Real(AlgebraicReal::from_int(0)),
                multiplicity: zeros,
                unit: UnitArg::Zero,
            }],
        });
    }
    let nilpotent = zeros == s;
    let all_real = classes.iter().all(|k| k.members.iter().all(Member::is_real));
    let unique_dominant = match classes.first() {
        Some(top) if !top.is_zero() && top.members.len() == 1 => match &top.members[0].value {
            Eigenvalue::Real(v) => Some(Dominant {
                value: v.clone(),
                multiplicity: top.members[0].multiplicity,
                positive: v.sign() > 0,
            }),
            Eigenvalue::Complex(_) => None,
        },
        _ => None,
    };
    let all_unit_modulus =
        zeros == 0 && classes.len() == 1 && classes[0].modulus.cmp_rational(&Rational::one()) == Ordering::Equal;
    Ok(SpectrumReport {
        size: s,
        scale: c,
        char_poly: p,
        classes,
        unique_dominant,
        all_real,
        all_unit_modulus,
        roots_of_unity_order,
        nilpotent,
    })
}

/// Root-of-unity order of the whole spectrum, from the monic characteristic
/// polynomial (which must then have integer coefficients).
fn unit_order(a: &RatMatrix) -> Option<u64> {
    let cp = a.char_poly_rational();
    if !cp.iter().all(|x| x.is_integer()) {
        return None;
    }
    roots_of_unity_order(&IntPoly::new(cp.iter().map(|x| x.to_integer()).collect()))
}

type RawClass = (AlgebraicReal, Vec<(Eigenvalue, usize)>);

/// Classes for an all-real spectrum: moduli are `|rho|`, compared exactly.
fn real_classes(factors: &[(IntPoly, usize)]) -> Result<Vec<RawClass>> {
    let mut roots: Vec<(AlgebraicReal, usize)> = Vec::new();
    for (f, m) in factors {
        for r in isolate_real_roots(f)? {
            roots.push((r.value, *m));
        }
    }
    let mut classes: Vec<RawClass> = Vec::new();
    for (r, m) in roots {
        let modulus = r.abs();
        match classes.iter_mut().find(|(k, _)| *k == modulus) {
            Some((_, members)) => members.push((Eigenvalue::Real(r), m)),
            None => classes.push((modulus, vec![(Eigenvalue::Real(r), m)])),
        }
    }
    classes.sort_by(|a, b| b.0.compare(&a.0));
    for (_, members) in &mut classes {
        // positive member first
        members.sort_by_key(|(e, _)| match e {
            Eigenvalue::Real(x) => -x.sign(),
            Eigenvalue::Complex(_) => 0,
        });
    }
    Ok(classes)
}

/// Classes for a spectrum with non-real eigenvalues.
fn general_classes(factors: &[(IntPoly, usize)], p0: &IntPoly) -> Result<Vec<RawClass>> {
    let q = pairwise_product_poly(&p0.squarefree_part()).squarefree_part();
    let mut q_roots: Vec<AlgebraicReal> =
        isolate_real_roots(&q)?.into_iter().map(|r| r.value).filter(|r| r.sign() > 0).collect();
    let mut bits = 64u32;
    loop {
        let eig = enclose_all(factors, bits)?;
        let mut assignment = Vec::with_capacity(eig.len());
        for e in &eig {
            let hits: Vec<usize> = q_roots
                .iter()
                .enumerate()
                .filter(|(_, r)| r.lo() <= &e.norm_sqr.hi && &e.norm_sqr.lo <= r.hi())
                .map(|(i, _)| i)
                .collect();
            if hits.len() != 1 {
                break;
            }
            assignment.push(hits[0]);
        }
        if assignment.len() == eig.len() {
            let mut used: Vec<usize> = assignment.clone();
            used.sort_unstable();
            used.dedup();
            // q's roots are isolated in ascending order; report descending
            used.reverse();
            let mut classes = Vec::new();
            for qi in used {
                let members = eig
                    .iter()
                    .zip(&assignment)
                    .filter(|(_, &a)| a == qi)
                    .map(|(e, _)| (e.value.clone(), e.multiplicity))
                    .collect();
                classes.push((q_roots[qi].sqrt(), members));
            }
            return Ok(classes);
        }
        if bits >= MAX_BITS {
            return Err(Error::Precondition("modulus classification did not converge".into()));
        }
        bits *= 2;
        for r in &mut q_roots {
            r.refine_to(&Rational::new(BigInt::one(), BigInt::one() << (bits / 2) as usize));
        }
    }
}

/// Enclosures of every eigenvalue of the scaled matrix at precision `bits`.
fn enclose_all(factors: &[(IntPoly, usize)], bits: u32) -> Result<Vec<Scaled>> {
    let width = Rational::new(BigInt::one(), BigInt::one() << bits as usize);
    let mut out = Vec::new();
    for (f, m) in factors {
        let real = isolate_real_roots(f)?;
        let nonreal = f.deg() - real.len();
        for r in real {
            let mut v = r.value;
            v.refine_to(&width);
            let iv = v.interval();
            let sq = &iv * &iv;
            let lo = if iv.contains_zero() { Rational::zero() } else { sq.lo.clone().min(sq.hi.clone()) };
            out.push(Scaled {
                value: Eigenvalue::Real(v),
                multiplicity: *m,
                norm_sqr: RatInterval::new(lo, sq.hi.max(sq.lo)),
            });
        }
        if nonreal > 0 {
            for b in isolate_nonreal(f, nonreal, bits)? {
                let (lo, hi) = b.norm_sqr_interval();
                out.push(Scaled { value: Eigenvalue::Complex(b), multiplicity: *m, norm_sqr: RatInterval::new(lo, hi) });
            }
        }
    }
    Ok(out)
}

/// Balls around the non-real roots of squarefree `f`, in conjugate pairs
/// (upper half-plane member first).
fn isolate_nonreal(f: &IntPoly, count: usize, start_bits: u32) -> Result<Vec<Ball>> {
    let mut bits = start_bits;
    while bits <= MAX_BITS {
        if let Some(balls) = isolate_complex_roots_from(f, bits, MAX_BITS) {
            let mut upper: Vec<Ball> = balls.into_iter().filter(|b| b.im_interval().0.is_positive()).collect();
            if 2 * upper.len() == count {
                upper.sort_by(|a, b| a.center.re.cmp(&b.center.re).then(a.center.im.cmp(&b.center.im)));
                let mut out = Vec::with_capacity(count);
                for b in upper {
                    out.push(b.conj());
                    out.push(b);
                }
                // the upper member of each pair first
                for pair in out.chunks_mut(2) {
                    pair.swap(0, 1);
                }
                return Ok(out);
            }
        }
        bits *= 2;
    }
    Err(Error::Precondition("complex root isolation did not converge".into()))
}

/// Unit arguments of one class of the scaled matrix `cA` with modulus `modulus`.
fn unit_arguments(
    a: &RatMatrix,
    modulus: &AlgebraicReal,
    members: Vec<(Eigenvalue, usize)>,
) -> Vec<(Eigenvalue, usize, UnitArg)> {
    let units: Vec<Option<UnitArg>> = members
        .iter()
        .map(|(v, _)| match v {
            Eigenvalue::Real(x) if x.sign() == 0 => Some(UnitArg::Zero),
            Eigenvalue::Real(x) if x.sign() > 0 => Some(UnitArg::Plus),
            Eigenvalue::Real(_) => Some(UnitArg::Minus),
            Eigenvalue::Complex(_) => None,
        })
        .collect();
    if units.iter().all(Option::is_some) {
        return members.into_iter().zip(units).map(|((v, m), u)| (v, m, u.unwrap())).collect();
    }
    let mut r = modulus.clone();
    r.refine_to(&Rational::new(BigInt::one(), BigInt::one() << 80usize));
    let generic: Vec<UnitArg> = members
        .iter()
        .map(|(v, _)| match v {
            Eigenvalue::Complex(b) => UnitArg::Generic(unit_ball(b, &r.interval())),
            Eigenvalue::Real(_) => UnitArg::Zero,
        })
        .collect();
    let certified = certify_torsion(a, &r, &members);
    members
        .into_iter()
        .enumerate()
        .map(|(i, (v, m))| {
            let u = units[i]
                .clone()
                .or_else(|| certified.as_ref().and_then(|cert| cert[i].clone()))
                .unwrap_or_else(|| generic[i].clone());
            (v, m, u)
        })
        .collect()
}

/// Ball enclosing `z / r` for `z` in `b` and `r` in the positive interval `r`.
fn unit_ball(b: &Ball, r: &RatInterval) -> Ball {
    let mid = (&r.lo + &r.hi) / int(2);
    let center = b.center.scale(&(Rational::one() / &mid));
    let cabs = b.center.abs_upper(64);
    let radius = &b.radius / &r.lo + cabs * (Rational::one() / &r.lo - Rational::one() / &r.hi);
    Ball::new(center, radius)
}

fn numeric_order(z: &ComplexRat) -> Option<(u64, u64)> {
    let w = z.to_c64();
    let theta = w.im.atan2(w.re) / std::f64::consts::TAU;
    let theta = theta.rem_euclid(1.0);
    (1..=MAX_UNIT_ORDER).find_map(|m| {
        let x = theta * m as f64;
        let k = x.round();
        ((x - k).abs() < 1e-7).then(|| (m, (k as u64) % m))
    })
}

/// Certifies `(rho / R)^m = 1` for members of a class of `cA` with modulus `R`.
///
/// With `t = R^m`, the eigenvalues `rho` of `cA` with `rho^m = t` are exactly
/// the roots of multiplicity `mult(t)` in the characteristic polynomial of
/// `(cA)^m`. Every true one has `rho^m` inside its computed enclosure, so when
/// the members whose enclosures can reach `t` account for exactly `mult(t)`
/// eigenvalues, all of them are certified.
fn certify_torsion(
    a: &RatMatrix,
    r: &AlgebraicReal,
    members: &[(Eigenvalue, usize)],
) -> Option<Vec<Option<UnitArg>>> {
    let orders: Vec<Option<(u64, u64)>> = members
        .iter()
        .map(|(v, _)| match v {
            Eigenvalue::Real(x) => Some(if x.sign() > 0 { (1, 0) } else { (2, 1) }),
            Eigenvalue::Complex(b) => numeric_order(&b.center),
        })
        .collect();
    let m = orders.iter().flatten().fold(1u64, |acc, (o, _)| acc.lcm(o));
    if m > MAX_UNIT_ORDER || orders.iter().all(Option::is_none) {
        return None;
    }
    let (_, ca) = a.scaled_integer();
    let g = ca.pow(m).char_poly();
    let bits = 96 + 4 * m.ilog2();
    let r_m = r.interval().pow(m as u32);
    let roots = isolate_real_roots(&g).ok()?;
    let mut hit = None;
    for root in roots {
        if root.value.sign() <= 0 {
            continue;
        }
        let mut v = root.value.clone();
        v.refine_to(&Rational::new(BigInt::one(), BigInt::one() << bits as usize));
        if v.lo() <= &r_m.hi && &r_m.lo <= v.hi() {
            if hit.is_some() {
                return None;
            }
            hit = Some((v, root.multiplicity));
        }
    }
    let (t, mult) = hit?;
    let t_iv = t.interval();
    let mut count = 0;
    let mut reach = vec![false; members.len()];
    for (i, (v, k)) in members.iter().enumerate() {
        let ball = match v {
            Eigenvalue::Real(x) => {
                let mut x = x.clone();
                x.refine_to(&Rational::new(BigInt::one(), BigInt::one() << bits as usize));
                let iv = x.interval();
                Ball::new(ComplexRat::real((&iv.lo + &iv.hi) / int(2)), iv.width() / int(2))
            }
            Eigenvalue::Complex(b) => b.clone(),
        };
        let pm = ball.pow(m, bits + 32);
        let (re_lo, re_hi) = pm.re_interval();
        let (im_lo, im_hi) = pm.im_interval();
        if re_lo <= t_iv.hi && t_iv.lo <= re_hi && !im_lo.is_positive() && !im_hi.is_negative() {
            reach[i] = true;
            count += k;
        }
    }
    if count != mult {
        return None;
    }
    Some(
        members
            .iter()
            .enumerate()
            .map(|(i, (v, _))| match (v, reach[i], orders[i]) {
                (Eigenvalue::Complex(_), true, Some((o, k))) => {
                    // u^m = 1 is certified; reduce the numeric (o, k) reading to lowest terms
                    let g = o.gcd(&k).max(1);
                    Some(UnitArg::RootOfUnity { order: o / g, index: k / g })
                }
                _ => None,
            })
            .collect(),
    )
}

/// Decimal approximation used only for display.
pub fn display_value(x: &AlgebraicReal) -> f64 {
    x.approx()
}

pub fn ball_display(b: &Ball) -> (f64, f64) {
    (approx_f64(&b.center.re), approx_f64(&b.center.im))
}

/// `det(A)^2` compared with the product of `modulus^(2 * multiplicity)`.
pub fn modulus_product_matches_det(a: &RatMatrix, report: &SpectrumReport) -> bool {
    let det2 = {
        let d = a.det();
        &d * &d
    };
    let mut acc = AlgebraicReal::from_int(1);
    for class in &report.classes {
        let m = class.multiplicity() as u32;
        if class.is_zero() {
            return det2.is_zero();
        }
        acc = acc.mul(&class.modulus.pow(2 * m));
    }
    acc.cmp_rational(&det2) == Ordering::Equal
}
