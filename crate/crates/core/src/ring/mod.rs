//! Finite rings with dense element ids.
//!
//! A [`Ring`] is an immutable, cheaply clonable handle. Elements are the ids
//! `0..order`. Small rings carry materialized addition and multiplication
//! tables; rings above [`Budget::table_max`] evaluate a closed-form
//! [`RingRule`] on every operation instead.

mod construct;
mod validate;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith;

pub use construct::{
    direct_product, galois_field, matrix_ring, null_ring, quotient_by_multiples,
    realize_complete_graph, smallest_irreducible, table_ring, z_mod, MatrixShape, TableSpec,
};
pub use validate::{validate_ring, validate_ring_with, Axiom, AxiomFailure, RingReport, ValidateOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{what} needs {order} elements, over the budget of {limit}")]
    BudgetExceeded {
        what: String,
        order: u128,
        limit: usize,
    },
    #[error("operation requires a unital ring")]
    NotUnital,
    #[error("element id {id} out of range for a ring of order {order}")]
    ElementOutOfRange { id: usize, order: usize },
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Size limits for constructed rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Largest order that gets materialized operation tables.
    pub table_max: usize,
    /// Largest order accepted at all (rule-backed above `table_max`).
    pub rule_max: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            table_max: 4096,
            rule_max: 1 << 20,
        }
    }
}

impl Budget {
    pub(crate) fn admit(&self, what: &str, order: u128) -> Result<usize, RingError> {
        if order == 0 || order > self.rule_max as u128 {
            return Err(RingError::BudgetExceeded {
                what: what.to_string(),
                order,
                limit: self.rule_max,
            });
        }
        Ok(order as usize)
    }
}

/// Closed-form arithmetic on dense element ids.
pub trait RingRule: Send + Sync {
    fn order(&self) -> usize;
    fn zero(&self) -> usize;
    fn identity(&self) -> Option<usize>;
    fn add(&self, a: usize, b: usize) -> usize;
    fn neg(&self, a: usize) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn descriptor(&self) -> String;
    fn name(&self, a: usize) -> String {
        a.to_string()
    }
}

struct Tables {
    add: Vec<u32>,
    neg: Vec<u32>,
    mul: Vec<u32>,
}

struct Inner {
    order: usize,
    zero: usize,
    identity: Option<usize>,
    descriptor: String,
    tables: Option<Tables>,
    rule: Option<Arc<dyn RingRule>>,
    characteristic: OnceLock<u64>,
}

#[derive(Clone)]
pub struct Ring(Arc<Inner>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring")
            .field("descriptor", &self.0.descriptor)
            .field("order", &self.0.order)
            .field("identity", &self.0.identity)
            .finish()
    }
}

impl Ring {
    /// Wraps a rule, materializing tables when the order is within
    /// `budget.table_max`.
    pub fn from_rule(rule: impl RingRule + 'static, budget: &Budget) -> Result<Ring, RingError> {
        let rule: Arc<dyn RingRule> = Arc::new(rule);
        let order = budget.admit(&rule.descriptor(), rule.order() as u128)?;
        let tables = (order <= budget.table_max).then(|| {
            let n = order;
            let (add, mul): (Vec<Vec<u32>>, Vec<Vec<u32>>) = (0..n)
                .into_par_iter()
                .map(|a| {
                    let add_row = (0..n).map(|b| rule.add(a, b) as u32).collect();
                    let mul_row = (0..n).map(|b| rule.mul(a, b) as u32).collect();
                    (add_row, mul_row)
                })
                .unzip();
            Tables {
                add: add.concat(),
                neg: (0..n).map(|a| rule.neg(a) as u32).collect(),
                mul: mul.concat(),
            }
        });
        Ok(Ring(Arc::new(Inner {
            order,
            zero: rule.zero(),
            identity: rule.identity(),
            descriptor: rule.descriptor(),
            tables,
            rule: Some(rule),
            characteristic: OnceLock::new(),
        })))
    }

    /// Builds a ring from raw row-major tables without checking the axioms
    /// (see [`validate_ring`]). The zero is the additive identity when one
    /// exists; an identity is searched for when none is declared.
    pub fn from_tables(
        order: usize,
        add: Vec<u32>,
        mul: Vec<u32>,
        identity: Option<usize>,
        descriptor: impl Into<String>,
    ) -> Result<Ring, RingError> {
        if order == 0 {
            return Err(RingError::InvalidTable("order must be positive".into()));
        }
        for (name, t) in [("add", &add), ("mul", &mul)] {
            if t.len() != order * order {
                return Err(RingError::InvalidTable(format!(
                    "{name} table has {} entries, expected {}",
                    t.len(),
                    order * order
                )));
            }
            if let Some(bad) = t.iter().find(|&&v| v as usize >= order) {
                return Err(RingError::InvalidTable(format!(
                    "{name} table entry {bad} out of range"
                )));
            }
        }
        if let Some(id) = identity.filter(|&id| id >= order) {
            return Err(RingError::ElementOutOfRange { id, order });
        }
        let zero = (0..order)
            .find(|&z| (0..order).all(|x| add[z * order + x] as usize == x))
            .unwrap_or(0);
        let neg = (0..order)
            .map(|x| {
                (0..order)
                    .find(|&y| add[x * order + y] as usize == zero)
                    .unwrap_or(zero) as u32
            })
            .collect();
        let identity = identity.or_else(|| {
            (0..order).find(|&e| {
                (0..order).all(|x| {
                    mul[e * order + x] as usize == x && mul[x * order + e] as usize == x
                })
            })
        });
        Ok(Ring(Arc::new(Inner {
            order,
            zero,
            identity,
            descriptor: descriptor.into(),
            tables: Some(Tables { add, neg, mul }),
            rule: None,
            characteristic: OnceLock::new(),
        })))
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn zero(&self) -> usize {
        self.0.zero
    }

    pub fn identity(&self) -> Option<usize> {
        self.0.identity
    }

    pub fn is_unital(&self) -> bool {
        self.0.identity.is_some()
    }

    pub fn descriptor(&self) -> &str {
        &self.0.descriptor
    }

    pub fn is_table_backed(&self) -> bool {
        self.0.tables.is_some()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.order
    }

    pub fn element(&self, id: usize) -> Result<Element<'_>, RingError> {
        self.check(id)?;
        Ok(Element { ring: self, id })
    }

    pub fn check(&self, id: usize) -> Result<(), RingError> {
        if id < self.0.order {
            Ok(())
        } else {
            Err(RingError::ElementOutOfRange {
                id,
                order: self.0.order,
            })
        }
    }

    /// Human-readable name of an element.
    pub fn name(&self, a: usize) -> String {
        match &self.0.rule {
            Some(rule) => rule.name(a),
            None => a.to_string(),
        }
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.0.tables {
            Some(t) => t.add[a * self.0.order + b] as usize,
            None => self.rule().add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        match &self.0.tables {
            Some(t) => t.neg[a] as usize,
            None => self.rule().neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.0.tables {
            Some(t) => t.mul[a * self.0.order + b] as usize,
            None => self.rule().mul(a, b),
        }
    }

    fn rule(&self) -> &dyn RingRule {
        self.0.rule.as_deref().expect("rule-backed ring without a rule")
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| (a + 1..self.order()).all(|b| self.commutes(a, b)))
    }

    /// `n·x` for a nonnegative machine integer.
    pub fn scalar_mul_u64(&self, n: u64, x: usize) -> usize {
        let c = self.characteristic();
        let mut k = if c > 0 { n % c } else { n };
        let mut acc = self.zero();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// `n·x` for an arbitrary integer, reduced modulo the characteristic.
    pub fn scalar_mul(&self, n: &BigInt, x: usize) -> usize {
        let c = self.characteristic();
        if c == 0 {
            // Only reachable for tables that fail the group axioms.
            let k = u64::try_from(n.magnitude()).unwrap_or(u64::MAX);
            let y = self.scalar_mul_u64(k, x);
            return if n.sign() == num_bigint::Sign::Minus { self.neg(y) } else { y };
        }
        self.scalar_mul_u64(arith::reduce_big(n, c), x)
    }

    /// `n·1`; requires an identity.
    pub fn int_element(&self, n: &BigInt) -> Result<usize, RingError> {
        let one = self.identity().ok_or(RingError::NotUnital)?;
        Ok(self.scalar_mul(n, one))
    }

    /// Least `m > 0` with `m·x = 0` for every `x`, or 0 when some element
    /// has no finite additive order (malformed tables only).
    pub fn characteristic(&self) -> u64 {
        *self.0.characteristic.get_or_init(|| self.compute_characteristic())
    }

    fn compute_characteristic(&self) -> u64 {
        let zero = self.zero();
        let mut acc: u64 = 1;
        for x in self.elements() {
            if self.mul_by_u64_raw(acc, x) == zero {
                continue;
            }
            let mut k = 1u64;
            let mut y = x;
            while y != zero {
                y = self.add(y, x);
                k += 1;
                if k > self.order() as u64 {
                    return 0;
                }
            }
            acc = arith::lcm(acc, k);
        }
        acc
    }

    fn mul_by_u64_raw(&self, mut k: u64, x: usize) -> usize {
        let mut acc = self.zero();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// `a^k` for `k ≥ 1`.
    pub fn pow(&self, a: usize, k: u64) -> usize {
        assert!(k >= 1, "pow needs a positive exponent");
        let mut acc = a;
        for _ in 1..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// True when both rings have identical operation tables on their ids.
    pub fn same_tables(&self, other: &Ring) -> bool {
        self.order() == other.order()
            && self.zero() == other.zero()
            && self.identity() == other.identity()
            && self.elements().all(|a| {
                self.elements()
                    .all(|b| self.add(a, b) == other.add(a, b) && self.mul(a, b) == other.mul(a, b))
            })
    }
}

/// An element paired with its ring, for readable arithmetic.
#[derive(Clone, Copy)]
pub struct Element<'r> {
    ring: &'r Ring,
    id: usize,
}

impl<'r> Element<'r> {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn ring(&self) -> &'r Ring {
        self.ring
    }
}

impl fmt::Debug for Element<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.name(self.id))
    }
}

impl PartialEq for Element<'_> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring.0, &other.ring.0) && self.id == other.id
    }
}

impl Eq for Element<'_> {}

impl<'r> Add for Element<'r> {
    type Output = Element<'r>;
    fn add(self, rhs: Self) -> Self {
        Element { ring: self.ring, id: self.ring.add(self.id, rhs.id) }
    }
}

impl<'r> Sub for Element<'r> {
    type Output = Element<'r>;
    fn sub(self, rhs: Self) -> Self {
        Element { ring: self.ring, id: self.ring.sub(self.id, rhs.id) }
    }
}

impl<'r> Mul for Element<'r> {
    type Output = Element<'r>;
    fn mul(self, rhs: Self) -> Self {
        Element { ring: self.ring, id: self.ring.mul(self.id, rhs.id) }
    }
}

impl<'r> Neg for Element<'r> {
    type Output = Element<'r>;
    fn neg(self) -> Self {
        Element { ring: self.ring, id: self.ring.neg(self.id) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z6_element_arithmetic() {
        let r = z_mod(6, &Budget::default()).unwrap();
        let two = r.element(2).unwrap();
        assert_eq!((two * two).id(), 4);
        assert_eq!((two * r.element(4).unwrap()).id(), 2);
        assert_eq!((-two).id(), 4);
        assert!(r.element(6).is_err());
    }

    #[test]
    fn characteristic_of_small_rings() {
        let b = Budget::default();
        assert_eq!(z_mod(1, &b).unwrap().characteristic(), 1);
        assert_eq!(z_mod(4, &b).unwrap().characteristic(), 4);
        let z2 = z_mod(2, &b).unwrap();
        let z3 = z_mod(3, &b).unwrap();
        let z4 = z_mod(4, &b).unwrap();
        assert_eq!(direct_product(&z2, &z3, &b).unwrap().characteristic(), 6);
        assert_eq!(direct_product(&z2, &z4, &b).unwrap().characteristic(), 4);
        assert_eq!(galois_field(3, 2, &b).unwrap().characteristic(), 3);
    }

    #[test]
    fn scalar_mul_reduces_negative_multiples() {
        let r = z_mod(7, &Budget::default()).unwrap();
        assert_eq!(r.scalar_mul(&BigInt::from(-3), 1), 4);
        assert_eq!(r.scalar_mul(&BigInt::from(100), 2), 200 % 7);
    }

    #[test]
    fn rule_backed_above_table_threshold() {
        let budget = Budget { table_max: 8, rule_max: 1 << 20 };
        let small = z_mod(8, &budget).unwrap();
        let big = z_mod(9, &budget).unwrap();
        assert!(small.is_table_backed());
        assert!(!big.is_table_backed());
        assert_eq!(big.mul(4, 7), 1);
        assert!(z_mod(1 << 21, &Budget::default()).is_err());
    }
}
