//! Cyclotomic polynomials, root-of-unity detection and an exact irreducibility test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::complex::{isolate_complex_roots_from, Ball, ComplexRat};
use super::poly::IntPoly;
use super::rational::{ceil, floor, Rational};
use crate::error::{Error, Result};

pub fn totient(n: u64) -> u64 {
    let mut n0 = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n0 {
        if n0.is_multiple_of(p) {
            while n0.is_multiple_of(p) {
                n0 /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n0 > 1 {
        result -= result / n0;
    }
    result
}

/// The `n`-th cyclotomic polynomial, by dividing `x^n - 1` by `Phi_d` for the
/// proper divisors `d` of `n`.
pub fn cyclotomic_poly(n: u64) -> IntPoly {
    assert!(n >= 1);
    let mut p = IntPoly::monomial(BigInt::one(), n as usize);
    p = &p - &IntPoly::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.exact_div(&cyclotomic_poly(d)).expect("Phi_d divides x^n - 1");
        }
    }
    p
}

/// All `n` with `totient(n) <= deg`; `totient(n) >= sqrt(n / 2)` bounds the search.
fn orders_up_to_totient(deg: u64) -> impl Iterator<Item = u64> {
    (1..=2 * deg * deg + 2).filter(move |&n| totient(n) <= deg)
}

/// Returns `n` when the irreducible polynomial `p` is the `n`-th cyclotomic
/// polynomial, `None` when it is irreducible but not cyclotomic.
pub fn cyclotomic_order(p: &IntPoly) -> Result<Option<u64>> {
    if p.is_constant() {
        return Err(Error::Reducible);
    }
    let prim = p.primitive();
    if !is_irreducible(&prim)? {
        return Err(Error::Reducible);
    }
    let deg = prim.deg() as u64;
    for n in orders_up_to_totient(deg).filter(|&n| totient(n) == deg) {
        if cyclotomic_poly(n) == prim {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// If every root of `p` is a root of unity, the least `o` with all roots
/// satisfying `z^o = 1`; otherwise `None`. Works on the squarefree part, so no
/// factorisation is needed.
pub fn roots_of_unity_order(p: &IntPoly) -> Option<u64> {
    let mut q = p.squarefree_part();
    if q.is_constant() {
        return Some(1);
    }
    let mut order = 1u64;
    let deg = q.deg() as u64;
    for n in orders_up_to_totient(deg) {
        let phi = cyclotomic_poly(n);
        if let Some(rest) = q.exact_div(&phi) {
            q = rest;
            order = order.lcm(&n);
            if q.is_constant() {
                return Some(order);
            }
        }
    }
    None
}

/// Degrees above this are rejected by the irreducibility test.
pub const MAX_IRREDUCIBILITY_DEGREE: usize = 14;

/// Exact irreducibility over Q.
///
/// Any factor `g` of `p` in Z[x] is `prim(lc(p) * prod_{r in S} (x - r))` for a
/// subset `S` of the complex roots. Certified root balls bound the coefficients
/// of each such product; a candidate is accepted only after exact trial division.
pub fn is_irreducible(p: &IntPoly) -> Result<bool> {
    let p = p.primitive();
    let m = p.deg();
    if p.is_zero() || m == 0 {
        return Ok(false);
    }
    if m == 1 {
        return Ok(true);
    }
    if !p.is_squarefree() {
        return Ok(false);
    }
    if m > MAX_IRREDUCIBILITY_DEGREE {
        return Err(Error::Precondition(format!(
            "irreducibility test limited to degree {MAX_IRREDUCIBILITY_DEGREE}"
        )));
    }
    let lc = Rational::from_integer(p.leading());
    let mut bits = 64;
    'precision: loop {
        let roots = isolate_complex_roots_from(&p, bits, 1 << 16)
            .ok_or_else(|| Error::Precondition("root isolation did not converge".into()))?;
        // The smaller factor has degree <= m / 2; fix root 0 to halve the work
        // when |S| = m / 2 exactly is covered by the complement anyway.
        for mask in 1u32..(1u32 << m) {
            let size = mask.count_ones() as usize;
            if size > m / 2 {
                continue;
            }
            match subset_candidate(&roots, mask, &lc) {
                Candidate::Excluded => {}
                Candidate::Ambiguous => {
                    bits *= 4;
                    continue 'precision;
                }
                Candidate::Integer(g) => {
                    let g = g.primitive();
                    if !g.is_constant() && g.divides(&p) {
                        return Ok(false);
                    }
                }
            }
        }
        return Ok(true);
    }
}

enum Candidate {
    Excluded,
    Ambiguous,
    Integer(IntPoly),
}

fn subset_candidate(roots: &[Ball], mask: u32, lc: &Rational) -> Candidate {
    let mut coeffs = vec![Ball::exact(ComplexRat::real(lc.clone()))];
    for (i, r) in roots.iter().enumerate() {
        if mask & (1 << i) == 0 {
            continue;
        }
        // multiply by (x - r)
        let mut next = vec![Ball::exact(ComplexRat::zero()); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(r));
        }
        coeffs = next;
    }
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let (ilo, ihi) = c.im_interval();
        if ilo > Rational::zero() || ihi < Rational::zero() {
            return Candidate::Excluded;
        }
        let (lo, hi) = c.re_interval();
        let first = ceil(&lo);
        let last = floor(&hi);
        if first > last {
            return Candidate::Excluded;
        }
        if first != last {
            return Candidate::Ambiguous;
        }
        ints.push(first);
    }
    if ints.iter().all(Zero::is_zero) {
        return Candidate::Excluded;
    }
    Candidate::Integer(IntPoly::new(ints))
}

/// Exact sign of the real number `sum_k c_k zeta^(e_k)` with
/// `zeta = exp(2 pi i / m)`. The caller guarantees the sum is real (for
/// instance, closed under conjugation).
pub fn real_cyclotomic_sign(terms: &[(Rational, u64)], m: u64) -> i32 {
    let m = m.max(1);
    let den = crate::exactnum::rational::lcm_of_denominators(terms.iter().map(|(c, _)| c));
    let mut coeffs = vec![BigInt::zero(); m as usize];
    for (c, e) in terms {
        coeffs[(e % m) as usize] += (c * Rational::from_integer(den.clone())).to_integer();
    }
    let s = IntPoly::new(coeffs);
    let (_, rem) = s.pseudo_div_rem(&cyclotomic_poly(m));
    if rem.is_zero() {
        return 0;
    }
    let mut bits = 64;
    loop {
        let mut acc = super::interval::RatInterval::point(Rational::zero());
        for (c, e) in terms {
            let (cos, _) = super::trig::root_of_unity(*e as i64, m, bits);
            let term = if c.is_negative() {
                super::interval::RatInterval::new(&cos.hi * c, &cos.lo * c)
            } else {
                super::interval::RatInterval::new(&cos.lo * c, &cos.hi * c)
            };
            acc = &acc + &term;
        }
        if let Some(sign) = acc.sign() {
            if sign != 0 {
                return sign;
            }
        }
        bits *= 2;
    }
}
