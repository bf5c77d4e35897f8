//! Integer polynomials, constant term first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ring::{Ring, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("the zero polynomial has no content or degree")]
    Zero,
    #[error("cannot parse coefficient list {0:?}")]
    Parse(String),
    #[error("division by a non-monic polynomial")]
    NotMonic,
}

/// Polynomial in `Z[x]` stored as coefficients `c0, c1, ...` without trailing
/// zeros. The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().copied().map(BigInt::from).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// Greatest common divisor of the coefficients.
    pub fn content(&self) -> Result<BigInt, PolyError> {
        if self.is_zero() {
            return Err(PolyError::Zero);
        }
        Ok(self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// `self(inner(x))`, by Horner's rule.
    pub fn compose(&self, inner: &IntPolynomial) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// Quotient and remainder on division by a monic polynomial.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> Result<(Self, Self), PolyError> {
        if !divisor.is_monic() {
            return Err(PolyError::NotMonic);
        }
        let d = divisor.degree().unwrap_or(0);
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate().take(d) {
                rem[i - d + j] -= &c * dc;
            }
            quot[i - d] = c;
        }
        rem.truncate(d);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn eval_rational(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Evaluates in a finite ring. The constant term is taken as a multiple
    /// of the identity, so a nonzero constant term needs a unital ring.
    pub fn eval_in(&self, ring: &Ring, a: usize) -> Result<usize, RingError> {
        let mut acc = ring.zero();
        let c0 = self.constant_term();
        if !c0.is_zero() {
            let one = ring.identity().ok_or(RingError::NotUnital)?;
            acc = ring.scalar_mul(&c0, one);
        }
        let mut pow = a;
        for c in self.coeffs.iter().skip(1) {
            if !c.is_zero() {
                acc = ring.add(acc, ring.scalar_mul(c, pow));
            }
            pow = ring.mul(pow, a);
        }
        Ok(acc)
    }

    /// Comma-separated coefficient list, constant first (`"0,3,1"`).
    pub fn to_csv(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_csv(s: &str) -> Result<Self, PolyError> {
        let coeffs = s
            .split(',')
            .map(|t| t.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PolyError::Parse(s.to_string()))?;
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_csv())
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse_csv(&s).map_err(serde::de::Error::custom)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn content_examples() {
        assert_eq!(p(&[2, 4, 6]).content().unwrap(), BigInt::from(2));
        assert_eq!(p(&[0, 1]).content().unwrap(), BigInt::from(1));
        assert_eq!(p(&[0, 1, 3]).content().unwrap(), BigInt::from(1));
        assert_eq!(IntPolynomial::zero().content(), Err(PolyError::Zero));
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn division_by_monic() {
        // x^3 + 2x + 5 = (x^2 - x + 3)(x + 1) + 2
        let (q, r) = p(&[5, 2, 0, 1]).div_rem_monic(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[3, -1, 1]));
        assert_eq!(r, p(&[2]));
        assert_eq!(
            p(&[1, 1]).div_rem_monic(&p(&[1, 2])),
            Err(PolyError::NotMonic)
        );
    }

    #[test]
    fn compose_and_eval() {
        // (x^2 + 1) o (2x - 1) = 4x^2 - 4x + 2
        let c = p(&[1, 0, 1]).compose(&p(&[-1, 2]));
        assert_eq!(c, p(&[2, -4, 4]));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(c.eval_rational(&half), BigRational::from_integer(1.into()));
    }

    #[test]
    fn display_and_csv() {
        assert_eq!(p(&[-1, 3, 0, 1]).to_string(), "x^3 + 3x - 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        let q = IntPolynomial::parse_csv("0, 3,1").unwrap();
        assert_eq!(q, p(&[0, 3, 1]));
        assert_eq!(q.to_csv(), "0,3,1");
        assert!(IntPolynomial::parse_csv("1,a").is_err());
    }
}
