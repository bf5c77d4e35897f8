//! Exact arithmetic in `Z[1/m]` and its unital one-generated subrings.
//!
//! `<a>_1` is determined by the set of primes dividing the reduced
//! denominator of `a`: an element `t` lies in `<a>_1` iff the denominator of
//! `t` is supported on those primes. Witness polynomials for membership are
//! built in closed form rather than searched for.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{ext_gcd, factorize};
use crate::graph::{complete_with_loops, CompressedGraph};
use crate::poly::IntPolynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalizedError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{value} has a denominator prime not dividing {m}")]
    Unsupported { value: String, m: u64 },
    #[error("cannot combine elements of Z[1/{0}] and Z[1/{1}]")]
    ModulusMismatch(u64, u64),
    #[error("cannot parse {0:?}; expected num/den@m")]
    Parse(String),
}

/// Distinct primes dividing `m`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeSupport {
    primes: Vec<u64>,
}

impl PrimeSupport {
    pub fn of(m: u64) -> Self {
        Self { primes: factorize(m).into_iter().map(|(p, _)| p).collect() }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Product of the primes selected by the bits of `mask`.
    pub fn product(&self, mask: u32) -> u64 {
        self.primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).product()
    }

    /// Exponents of each support prime in `n`, and the cofactor left over.
    pub fn split(&self, n: &BigInt) -> (Vec<u32>, BigInt) {
        let mut rest = n.clone();
        let exps = self
            .primes
            .iter()
            .map(|&p| {
                let p = BigInt::from(p);
                let mut k = 0;
                while !rest.is_zero() && rest.is_multiple_of(&p) {
                    rest /= &p;
                    k += 1;
                }
                k
            })
            .collect();
        (exps, rest)
    }
}

/// Element of `Z[1/m]`, kept as a reduced fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalizedRational {
    m: u64,
    value: BigRational,
}

impl LocalizedRational {
    pub fn new(m: u64, value: BigRational) -> Result<Self, LocalizedError> {
        if m == 0 {
            return Err(LocalizedError::ZeroModulus);
        }
        let (_, rest) = PrimeSupport::of(m).split(value.denom());
        if !rest.abs().is_one() {
            return Err(LocalizedError::Unsupported { value: value.to_string(), m });
        }
        Ok(Self { m, value })
    }

    pub fn from_parts(m: u64, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, LocalizedError> {
        let den = den.into();
        if den.is_zero() {
            return Err(LocalizedError::Parse("zero denominator".into()));
        }
        Self::new(m, BigRational::new(num.into(), den))
    }

    pub fn integer(m: u64, n: impl Into<BigInt>) -> Self {
        Self::new(m, BigRational::from_integer(n.into())).expect("integers lie in every Z[1/m]")
    }

    pub fn one(m: u64) -> Self {
        Self::integer(m, 1)
    }

    pub fn zero(m: u64) -> Self {
        Self::integer(m, 0)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn support(&self) -> PrimeSupport {
        PrimeSupport::of(self.m)
    }

    /// Bitmask over [`PrimeSupport::primes`] of the primes dividing the
    /// denominator.
    pub fn denominator_mask(&self) -> u32 {
        let (exps, _) = self.support().split(self.denom());
        exps.iter().enumerate().filter(|(_, &k)| k > 0).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    fn same_ring(&self, other: &Self) -> Result<(), LocalizedError> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(LocalizedError::ModulusMismatch(self.m, other.m))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LocalizedError> {
        self.same_ring(other)?;
        Ok(Self { m: self.m, value: &self.value + &other.value })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LocalizedError> {
        self.same_ring(other)?;
        Ok(Self { m: self.m, value: &self.value - &other.value })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LocalizedError> {
        self.same_ring(other)?;
        Ok(Self { m: self.m, value: &self.value * &other.value })
    }

    pub fn neg(&self) -> Self {
        Self { m: self.m, value: -&self.value }
    }

    pub fn pow(&self, k: u32) -> Self {
        Self { m: self.m, value: num_traits::pow(self.value.clone(), k as usize) }
    }

    pub fn eval(&self, q: &IntPolynomial) -> Self {
        Self { m: self.m, value: q.eval_rational(&self.value) }
    }
}

impl fmt::Display for LocalizedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}@{}", self.numer(), self.denom(), self.m)
    }
}

impl FromStr for LocalizedRational {
    type Err = LocalizedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LocalizedError::Parse(s.to_string());
        let (frac, m) = s.trim().split_once('@').ok_or_else(bad)?;
        let m: u64 = m.trim().parse().map_err(|_| bad())?;
        let (num, den) = match frac.split_once('/') {
            Some((n, d)) => (n, d),
            None => (frac, "1"),
        };
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        Self::from_parts(m, num, den)
    }
}

impl Serialize for LocalizedRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LocalizedRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `1 / (product of the distinct primes dividing the denominator)`.
pub fn class_representative(a: &LocalizedRational) -> LocalizedRational {
    let support = a.support();
    let den = support.product(a.denominator_mask());
    LocalizedRational::from_parts(a.m, 1, den).expect("support primes divide m")
}

/// Polynomial `P` with `P(a) = class_representative(a)`:
/// `P(x) = (prod p^(k_p - 1)) (u x + v)` where `u n + v D = 1` for
/// `a = n / D`.
pub fn to_representative(a: &LocalizedRational) -> IntPolynomial {
    let n = a.numer();
    let d = a.denom();
    if d.is_one() {
        return IntPolynomial::constant(1);
    }
    let (_, u, v) = ext_gcd(n, d);
    let support = a.support();
    let squarefree = BigInt::from(support.product(a.denominator_mask()));
    let scale = d / squarefree;
    IntPolynomial::new(vec![v * &scale, u * &scale])
}

/// Polynomial `Q` with `Q(b) = target`, where `b = 1/prod(primes in mask)`
/// and the denominator of `target` is supported on `mask`:
/// `Q(y) = N y^k` with `k` the largest exponent in the denominator.
fn from_squarefree(mask: u32, target: &LocalizedRational) -> IntPolynomial {
    let support = target.support();
    let (exps, _) = support.split(target.denom());
    let k = exps.iter().copied().max().unwrap_or(0);
    let mut n = target.numer().clone();
    for (i, &p) in support.primes().iter().enumerate() {
        if mask >> i & 1 == 1 {
            n *= num_traits::pow(BigInt::from(p), (k - exps[i]) as usize);
        }
    }
    IntPolynomial::monomial(n, k as usize)
}

/// `q` with `q(a) = target`, or `None` when `target` is not in `<a>_1`.
/// Membership is decided exactly by denominator support, and witnesses
/// come from closed-form formulas, so no search bound is involved. Every
/// returned witness has been checked by evaluation.
pub fn membership_witness(a: &LocalizedRational, target: &LocalizedRational) -> Option<IntPolynomial> {
    if a.m != target.m {
        return None;
    }
    let (ma, mt) = (a.denominator_mask(), target.denominator_mask());
    if mt & !ma != 0 {
        return None;
    }
    let q = from_squarefree(ma, target).compose(&to_representative(a));
    assert_eq!(&a.eval(&q), target, "witness {q} failed to evaluate");
    Some(q)
}

/// Exhaustive search over polynomials of degree at most `degree` with
/// coefficients in `[-coef, coef]`.
pub fn search_witness(
    a: &LocalizedRational,
    target: &LocalizedRational,
    degree: usize,
    coef: i64,
) -> Option<IntPolynomial> {
    let powers: Vec<BigRational> = (0..=degree).map(|i| num_traits::pow(a.value.clone(), i)).collect();
    let mut c = vec![-coef; degree + 1];
    loop {
        let sum: BigRational = c.iter().zip(&powers).map(|(&ci, p)| p * BigInt::from(ci)).sum();
        if sum == target.value {
            return Some(IntPolynomial::from_i64(&c));
        }
        let mut i = 0;
        loop {
            if i > degree {
                return None;
            }
            if c[i] < coef {
                c[i] += 1;
                break;
            }
            c[i] = -coef;
            i += 1;
        }
    }
}

/// `Λ¹(Z[1/m]) = K°_(2^s)`, vertex `T` labeled by its representative
/// `1/prod(T)`, with `T` enumerated as a bitmask over the ascending primes.
pub fn lambda1_localized(m: u64) -> Result<CompressedGraph, LocalizedError> {
    if m == 0 {
        return Err(LocalizedError::ZeroModulus);
    }
    let support = PrimeSupport::of(m);
    let mut g = complete_with_loops(1 << support.len());
    for (mask, label) in g.vertex_labels.iter_mut().enumerate() {
        *label = format!("1/{}", support.product(mask as u32));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lr(s: &str) -> LocalizedRational {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(lr("1/2@2").try_add(&lr("1/2@2")).unwrap(), lr("1@2"));
        assert_eq!(lr("1/6@6").try_mul(&lr("3@6")).unwrap(), lr("1/2@6"));
        assert_eq!(lr("5/12@6").neg(), lr("-5/12@6"));
        assert_eq!(lr("1/2@2").try_add(&lr("1/2@6")), Err(LocalizedError::ModulusMismatch(2, 6)));
    }

    #[test]
    fn parsing_and_validation() {
        assert_eq!(lr("10/4@2").to_string(), "5/2@2");
        assert!(matches!("1/3@2".parse::<LocalizedRational>(), Err(LocalizedError::Unsupported { .. })));
        assert!("1/0@2".parse::<LocalizedRational>().is_err());
        assert!("1/2".parse::<LocalizedRational>().is_err());
        assert!("1/2@0".parse::<LocalizedRational>().is_err());
        assert_eq!(lr("7@5"), LocalizedRational::integer(5, 7));
    }

    #[test]
    fn representatives() {
        assert_eq!(class_representative(&lr("5/12@6")), lr("1/6@6"));
        assert_eq!(class_representative(&lr("-9@6")), lr("1@6"));
        assert_eq!(class_representative(&lr("1/6@6")), lr("1/6@6"));
        assert_eq!(class_representative(&lr("7/8@30")), lr("1/2@30"));
    }

    #[test]
    fn witnesses() {
        let q = membership_witness(&lr("1/6@6"), &lr("5/12@6")).unwrap();
        assert_eq!(lr("1/6@6").eval(&q), lr("5/12@6"));
        let q = membership_witness(&lr("5/12@6"), &lr("1/6@6")).unwrap();
        assert_eq!(lr("5/12@6").eval(&q), lr("1/6@6"));
        assert_eq!(membership_witness(&lr("2@2"), &lr("2@2")).unwrap().eval_rational(lr("2@2").value()), *lr("2@2").value());
        assert_eq!(membership_witness(&lr("1/2@6"), &lr("1/3@6")), None);
        assert_eq!(membership_witness(&lr("1/2@2"), &lr("1/2@6")), None);
    }

    #[test]
    fn search_agrees_on_small_cases() {
        let a = lr("1/2@2");
        assert!(search_witness(&a, &lr("3/4@2"), 2, 3).is_some());
        assert!(search_witness(&a, &lr("1/8@2"), 2, 3).is_none());
        let found = search_witness(&lr("2@2"), &lr("2@2"), 1, 1).unwrap();
        assert_eq!(found, IntPolynomial::x());
    }

    #[test]
    fn graphs() {
        assert_eq!(lambda1_localized(6).unwrap().vertex_count(), 4);
        assert_eq!(lambda1_localized(1).unwrap().vertex_count(), 1);
        let g = lambda1_localized(30).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.vertex_labels[7], "1/30");
        assert!(g.all_looped() && g.edge_count() == 28);
    }
}
