//! Monic annihilators from primitive ones in rings of finite characteristic.
//!
//! Per prime power `p^n` of the characteristic, the image of `a` in
//! `R/p^n R` is handled by splitting `q = p·s1 + s0` into base-`p` digits and
//! dividing `s1` repeatedly by `s0 + p·r`; the monic branch polynomials are
//! then glued with the cofactors `m / p^n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ext_gcd, factorize, mod_inverse};
use crate::poly::{IntPolynomial, PolyError};
use crate::ring::{quotient_by_multiples, Ring, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegralError {
    #[error("content of q is {0}, not 1")]
    ContentNotOne(BigInt),
    #[error("q(a) = {0}, not zero")]
    NotAnnihilating(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("constructed polynomial {0} does not annihilate a")]
    Internal(String),
}

pub fn content(q: &IntPolynomial) -> Result<BigInt, PolyError> {
    q.content()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub prime: u64,
    pub exponent: u32,
    /// Monic, and kills the image of `a` in `R / p^n R`.
    pub polynomial: IntPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Annihilator {
    pub polynomial: IntPolynomial,
    pub branches: Vec<Branch>,
}

/// A monic `s` with `s(a) = 0`, given `q` with content 1 and `q(a) = 0`.
/// A monic `q` is returned unchanged.
pub fn monic_annihilator(ring: &Ring, a: usize, q: &IntPolynomial) -> Result<Annihilator, IntegralError> {
    ring.check(a)?;
    if !ring.is_unital() {
        return Err(RingError::NotUnital.into());
    }
    let c = q.content()?;
    if !c.is_one() {
        return Err(IntegralError::ContentNotOne(c));
    }
    let value = q.eval_in(ring, a)?;
    if value != ring.zero() {
        return Err(IntegralError::NotAnnihilating(value));
    }
    if q.is_monic() {
        return Ok(Annihilator { polynomial: q.clone(), branches: Vec::new() });
    }
    let m = ring.characteristic();
    if m == 1 {
        return Ok(Annihilator { polynomial: IntPolynomial::x(), branches: Vec::new() });
    }

    let mut branches = Vec::new();
    for (p, n) in factorize(m) {
        let pn = p.pow(n);
        let (quotient, projection) = quotient_by_multiples(ring, pn)?;
        let polynomial = prime_power_branch(q, p, n);
        let image = polynomial.eval_in(&quotient, projection[a])?;
        if image != quotient.zero() {
            return Err(IntegralError::Internal(format!("branch {polynomial} mod {p}^{n}")));
        }
        branches.push(Branch { prime: p, exponent: n, polynomial });
    }

    let glued = recombine(m, &branches);
    let polynomial = glued.reduce_mod(&BigInt::from(m));
    if !polynomial.is_monic() || polynomial.eval_in(ring, a)? != ring.zero() {
        return Err(IntegralError::Internal(polynomial.to_string()));
    }
    Ok(Annihilator { polynomial, branches })
}

/// Monic polynomial killing `a` whenever `q(a) = 0` and `p^n·1 = 0`.
pub fn prime_power_branch(q: &IntPolynomial, p: u64, n: u32) -> IntPolynomial {
    let pn = BigInt::from(p).pow(n);
    let bp = BigInt::from(p);
    let (_, s0) = split_digits(q, &bp);
    let d = s0.degree().expect("content 1 leaves a nonzero digit polynomial");
    // Scale so the coefficient at deg s0 becomes 1 mod p^n; it is a unit
    // because its last digit is nonzero.
    let k = mod_inverse(&q.coeff(d), &pn).expect("coefficient coprime to p");
    let q = q.scale(&k).reduce_mod(&pn);
    let (s1, s0) = split_digits(&q, &bp);
    debug_assert!(s0.is_monic() && s0.degree() == Some(d));

    let mut r = IntPolynomial::zero();
    for _ in 1..n {
        let divisor = &s0 + &r.scale(&bp);
        let (_, rem) = s1.div_rem_monic(&divisor).expect("divisor is monic");
        r = rem.reduce_mod(&pn);
    }
    (&s0 + &r.scale(&bp)).reduce_mod(&pn)
}

/// `q = p·s1 + s0` with every coefficient of `s0` in `[0, p)`.
fn split_digits(q: &IntPolynomial, p: &BigInt) -> (IntPolynomial, IntPolynomial) {
    let s0 = q.reduce_mod(p);
    let s1 = IntPolynomial::new((q - &s0).coeffs().iter().map(|c| c / p).collect());
    (s1, s0)
}

/// `Σ c_i m_i q_i x^(d - d_i)` with `m_i = m / p_i^n_i` and `Σ c_i m_i = 1`.
pub fn recombine(m: u64, branches: &[Branch]) -> IntPolynomial {
    let cofactors: Vec<BigInt> = branches
        .iter()
        .map(|b| BigInt::from(m / b.prime.pow(b.exponent)))
        .collect();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(cofactors.len());
    let mut g = BigInt::zero();
    for mi in &cofactors {
        let (ng, x, y) = ext_gcd(&g, mi);
        for c in coeffs.iter_mut() {
            *c *= &x;
        }
        coeffs.push(y);
        g = ng;
    }
    debug_assert!(g.is_one() || branches.is_empty());
    let d = branches.iter().filter_map(|b| b.polynomial.degree()).max().unwrap_or(0);
    branches.iter().zip(cofactors.iter().zip(&coeffs)).fold(IntPolynomial::zero(), |acc, (b, (mi, ci))| {
        let deg = b.polynomial.degree().unwrap_or(0);
        &acc + &b.polynomial.shift(d - deg).scale(&(ci * mi))
    })
}
