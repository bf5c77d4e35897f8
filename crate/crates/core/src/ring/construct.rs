use serde::{Deserialize, Serialize};

use super::{Budget, Ring, RingError, RingRule};
use crate::arith::is_prime;

struct ZMod {
    n: usize,
}

impl RingRule for ZMod {
    fn order(&self) -> usize {
        self.n
    }
    fn zero(&self) -> usize {
        0
    }
    fn identity(&self) -> Option<usize> {
        Some(1 % self.n)
    }
    fn add(&self, a: usize, b: usize) -> usize {
        (a + b) % self.n
    }
    fn neg(&self, a: usize) -> usize {
        (self.n - a) % self.n
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        ((a as u64 * b as u64) % self.n as u64) as usize
    }
    fn descriptor(&self) -> String {
        format!("Z_{}", self.n)
    }
}

/// `Z_n` with every product zero.
struct NullRing {
    n: usize,
}

impl RingRule for NullRing {
    fn order(&self) -> usize {
        self.n
    }
    fn zero(&self) -> usize {
        0
    }
    fn identity(&self) -> Option<usize> {
        (self.n == 1).then_some(0)
    }
    fn add(&self, a: usize, b: usize) -> usize {
        (a + b) % self.n
    }
    fn neg(&self, a: usize) -> usize {
        (self.n - a) % self.n
    }
    fn mul(&self, _: usize, _: usize) -> usize {
        0
    }
    fn descriptor(&self) -> String {
        format!("Z_{}^0", self.n)
    }
}

/// Returns `Z_n` (the zero ring for `n = 1`).
pub fn z_mod(n: usize, budget: &Budget) -> Result<Ring, RingError> {
    if n == 0 {
        return Err(RingError::InvalidArgument("Z_0 is infinite".into()));
    }
    budget.admit(&format!("Z_{n}"), n as u128)?;
    Ring::from_rule(ZMod { n }, budget)
}

/// The additive group `Z_n` with zero multiplication.
pub fn null_ring(n: usize, budget: &Budget) -> Result<Ring, RingError> {
    if n == 0 {
        return Err(RingError::InvalidArgument("order must be positive".into()));
    }
    Ring::from_rule(NullRing { n }, budget)
}

// Dense polynomials over Z_p, constant term first, used only while
// searching for a field modulus.
fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    // `m` monic
    let mut r = a.to_vec();
    let d = m.len() - 1;
    while r.len() > d {
        let c = r.pop().unwrap();
        if c == 0 {
            continue;
        }
        let off = r.len() - d;
        for (j, &mc) in m.iter().enumerate().take(d) {
            r[off + j] = (r[off + j] + (p - c) * mc) % p;
        }
    }
    poly_trim(r)
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    // Trial division by every monic polynomial of degree 1..=n/2.
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                g.push(t % p);
                t /= p;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `n`
/// over `Z_p`, comparing coefficient tuples `(c0, c1, ..., c_{n-1})` with
/// the constant term most significant. Returned constant term first,
/// including the leading 1.
pub fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    assert!(n >= 1 && is_prime(p));
    let total = p.pow(n as u32);
    for idx in 0..total {
        let mut coeffs = vec![0u64; n + 1];
        let mut t = idx;
        for i in (0..n).rev() {
            coeffs[i] = t % p;
            t /= p;
        }
        coeffs[n] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

struct GaloisField {
    p: u64,
    n: usize,
    order: usize,
    modulus: Vec<u64>,
}

impl GaloisField {
    fn digits(&self, mut a: usize) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            d.push(a as u64 % self.p);
            a /= self.p as usize;
        }
        d
    }

    fn encode(&self, d: &[u64]) -> usize {
        d.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }
}

impl RingRule for GaloisField {
    fn order(&self) -> usize {
        self.order
    }
    fn zero(&self) -> usize {
        0
    }
    fn identity(&self) -> Option<usize> {
        Some(1)
    }
    fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&s)
    }
    fn neg(&self, a: usize) -> usize {
        let s: Vec<u64> = self
            .digits(a)
            .iter()
            .map(|u| (self.p - u) % self.p)
            .collect();
        self.encode(&s)
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.n];
        for (i, &u) in x.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.n, 0);
        self.encode(&r)
    }
    fn descriptor(&self) -> String {
        format!("GF({}^{})", self.p, self.n)
    }
    fn name(&self, a: usize) -> String {
        let d = self.digits(a);
        let terms: Vec<String> = d
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// `GF(p^n)` as `Z_p[x]` modulo [`smallest_irreducible`]`(p, n)`. Element
/// ids are the coefficient vectors read as base-`p` numbers, constant
/// digit least significant.
pub fn galois_field(p: u64, n: usize, budget: &Budget) -> Result<Ring, RingError> {
    if !is_prime(p) {
        return Err(RingError::NotPrime(p));
    }
    if n == 0 {
        return Err(RingError::InvalidArgument("extension degree must be positive".into()));
    }
    let what = format!("GF({p}^{n})");
    let order = (p as u128)
        .checked_pow(n as u32)
        .ok_or(RingError::BudgetExceeded { what: what.clone(), order: u128::MAX, limit: budget.rule_max })?;
    let order = budget.admit(&what, order)?;
    let modulus = smallest_irreducible(p, n);
    Ring::from_rule(GaloisField { p, n, order, modulus }, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixShape {
    Full,
    UpperTriangular,
}

struct MatrixRing {
    base: Ring,
    k: usize,
    shape: MatrixShape,
    positions: Vec<(usize, usize)>,
    order: usize,
}

impl MatrixRing {
    fn decode(&self, mut a: usize) -> Vec<usize> {
        let q = self.base.order();
        let mut m = vec![self.base.zero(); self.k * self.k];
        for &(i, j) in &self.positions {
            m[i * self.k + j] = a % q;
            a /= q;
        }
        m
    }

    fn encode(&self, m: &[usize]) -> usize {
        let q = self.base.order();
        self.positions
            .iter()
            .rev()
            .fold(0usize, |acc, &(i, j)| acc * q + m[i * self.k + j])
    }
}

impl RingRule for MatrixRing {
    fn order(&self) -> usize {
        self.order
    }
    fn zero(&self) -> usize {
        self.encode(&vec![self.base.zero(); self.k * self.k])
    }
    fn identity(&self) -> Option<usize> {
        let one = self.base.identity()?;
        let mut m = vec![self.base.zero(); self.k * self.k];
        for i in 0..self.k {
            m[i * self.k + i] = one;
        }
        Some(self.encode(&m))
    }
    fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<usize> = x.iter().zip(&y).map(|(&u, &v)| self.base.add(u, v)).collect();
        self.encode(&s)
    }
    fn neg(&self, a: usize) -> usize {
        let s: Vec<usize> = self.decode(a).iter().map(|&u| self.base.neg(u)).collect();
        self.encode(&s)
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let k = self.k;
        let mut out = vec![self.base.zero(); k * k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = self.base.zero();
                for l in 0..k {
                    acc = self.base.add(acc, self.base.mul(x[i * k + l], y[l * k + j]));
                }
                out[i * k + j] = acc;
            }
        }
        self.encode(&out)
    }
    fn descriptor(&self) -> String {
        let tag = match self.shape {
            MatrixShape::Full => "M",
            MatrixShape::UpperTriangular => "T",
        };
        format!("{tag}_{}({})", self.k, self.base.descriptor())
    }
    fn name(&self, a: usize) -> String {
        let m = self.decode(a);
        let rows: Vec<String> = (0..self.k)
            .map(|i| {
                let cells: Vec<String> =
                    (0..self.k).map(|j| self.base.name(m[i * self.k + j])).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

/// All `k×k` matrices, or the upper-triangular ones, over a unital base.
/// Element ids are base-`|base|` numbers over the stored positions in
/// row-major order, first position least significant.
pub fn matrix_ring(base: &Ring, k: usize, shape: MatrixShape, budget: &Budget) -> Result<Ring, RingError> {
    if !base.is_unital() {
        return Err(RingError::NotUnital);
    }
    if k == 0 {
        return Err(RingError::InvalidArgument("matrix size must be positive".into()));
    }
    let positions: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .filter(|&(i, j)| shape == MatrixShape::Full || i <= j)
        .collect();
    let tag = if shape == MatrixShape::Full { "M" } else { "T" };
    let what = format!("{tag}_{k}({})", base.descriptor());
    let order = (base.order() as u128)
        .checked_pow(positions.len() as u32)
        .unwrap_or(u128::MAX);
    let order = budget.admit(&what, order)?;
    Ring::from_rule(
        MatrixRing { base: base.clone(), k, shape, positions, order },
        budget,
    )
}

struct Product {
    left: Ring,
    right: Ring,
}

impl Product {
    fn split(&self, a: usize) -> (usize, usize) {
        (a / self.right.order(), a % self.right.order())
    }
    fn join(&self, l: usize, r: usize) -> usize {
        l * self.right.order() + r
    }
}

impl RingRule for Product {
    fn order(&self) -> usize {
        self.left.order() * self.right.order()
    }
    fn zero(&self) -> usize {
        self.join(self.left.zero(), self.right.zero())
    }
    fn identity(&self) -> Option<usize> {
        Some(self.join(self.left.identity()?, self.right.identity()?))
    }
    fn add(&self, a: usize, b: usize) -> usize {
        let ((a1, a2), (b1, b2)) = (self.split(a), self.split(b));
        self.join(self.left.add(a1, b1), self.right.add(a2, b2))
    }
    fn neg(&self, a: usize) -> usize {
        let (a1, a2) = self.split(a);
        self.join(self.left.neg(a1), self.right.neg(a2))
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let ((a1, a2), (b1, b2)) = (self.split(a), self.split(b));
        self.join(self.left.mul(a1, b1), self.right.mul(a2, b2))
    }
    fn descriptor(&self) -> String {
        format!("{} x {}", self.left.descriptor(), self.right.descriptor())
    }
    fn name(&self, a: usize) -> String {
        let (l, r) = self.split(a);
        format!("({},{})", self.left.name(l), self.right.name(r))
    }
}

/// Componentwise product; id of `(l, r)` is `l·|S| + r`.
pub fn direct_product(left: &Ring, right: &Ring, budget: &Budget) -> Result<Ring, RingError> {
    let order = left.order() as u128 * right.order() as u128;
    budget.admit(&format!("{} x {}", left.descriptor(), right.descriptor()), order)?;
    Ring::from_rule(Product { left: left.clone(), right: right.clone() }, budget)
}

/// A unital ring whose unital compressed commuting graph is the complete
/// looped graph on `alpha` vertices: the zero ring for `alpha = 1`, else
/// `GF(2^(2^(alpha-1)))`, which has `2^(alpha-1)` with exactly `alpha`
/// divisors. The field must fit the table budget.
pub fn realize_complete_graph(alpha: u32, budget: &Budget) -> Result<Ring, RingError> {
    match alpha {
        0 => Err(RingError::InvalidArgument("alpha must be at least 1".into())),
        1 => z_mod(1, budget),
        _ => {
            let n = 1u128.checked_shl(alpha - 1).unwrap_or(u128::MAX);
            let order = 2u128.checked_pow(n.min(128) as u32).unwrap_or(u128::MAX);
            let what = format!("GF(2^{n})");
            if order > budget.table_max as u128 {
                return Err(RingError::BudgetExceeded { what, order, limit: budget.table_max });
            }
            galois_field(2, n as usize, budget)
        }
    }
}

/// Row-major tables as read from a `table:<path>` JSON file. Rows may be
/// given flat (`order²` entries) or nested.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableSpec {
    pub order: usize,
    pub add: TableData,
    pub mul: TableData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableData {
    Flat(Vec<u32>),
    Rows(Vec<Vec<u32>>),
}

impl TableData {
    fn flatten(self) -> Vec<u32> {
        match self {
            TableData::Flat(v) => v,
            TableData::Rows(rows) => rows.concat(),
        }
    }
}

pub fn table_ring(spec: TableSpec, descriptor: &str) -> Result<Ring, RingError> {
    Ring::from_tables(spec.order, spec.add.flatten(), spec.mul.flatten(), spec.identity, descriptor)
}

/// The quotient `R / kR` on additive cosets, together with the projection
/// of every element of `R` to its coset id. Coset ids follow the order of
/// their least member.
pub fn quotient_by_multiples(ring: &Ring, k: u64) -> Result<(Ring, Vec<usize>), RingError> {
    let ideal: std::collections::BTreeSet<usize> =
        ring.elements().map(|x| ring.scalar_mul_u64(k, x)).collect();
    let mut coset_of = vec![usize::MAX; ring.order()];
    let mut reps = Vec::new();
    for x in ring.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &h in &ideal {
            coset_of[ring.add(x, h)] = id;
        }
    }
    let n = reps.len();
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for &a in &reps {
        for &b in &reps {
            add.push(coset_of[ring.add(a, b)] as u32);
            mul.push(coset_of[ring.mul(a, b)] as u32);
        }
    }
    let identity = ring.identity().map(|e| coset_of[e]);
    let q = Ring::from_tables(n, add, mul, identity, format!("{} / {k}R", ring.descriptor()))?;
    Ok((q, coset_of))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::validate_ring;

    fn budget() -> Budget {
        Budget::default()
    }

    /// Oracle: a monic quadratic over Z_2 is irreducible iff it has no root.
    #[test]
    fn gf4_modulus_is_the_only_irreducible_quadratic() {
        let mut irreducible = Vec::new();
        for c0 in 0..2u64 {
            for c1 in 0..2u64 {
                let has_root = (0..2u64).any(|x| (c0 + c1 * x + x * x) % 2 == 0);
                if !has_root {
                    irreducible.push(vec![c0, c1, 1]);
                }
            }
        }
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(galois_field(2, 2, &budget()).unwrap().order(), 4);
    }

    #[test]
    fn gf8_multiplicative_group_is_cyclic_of_order_7() {
        let f = galois_field(2, 3, &budget()).unwrap();
        assert_eq!(f.order(), 8);
        let generator = (2..8).find(|&g| {
            let mut seen = std::collections::BTreeSet::new();
            let mut x = g;
            for _ in 0..7 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            seen.len() == 7
        });
        assert!(generator.is_some());
    }

    #[test]
    fn prime_field_is_z_p() {
        let f = galois_field(5, 1, &budget()).unwrap();
        let z = z_mod(5, &budget()).unwrap();
        assert!(f.same_tables(&z));
    }

    #[test]
    fn galois_field_is_deterministic() {
        let a = galois_field(3, 2, &budget()).unwrap();
        let b = galois_field(3, 2, &budget()).unwrap();
        assert!(a.same_tables(&b));
    }

    #[test]
    fn galois_field_rejects_composite_and_oversize() {
        assert_eq!(galois_field(4, 2, &budget()).unwrap_err(), RingError::NotPrime(4));
        assert!(matches!(
            galois_field(2, 30, &budget()),
            Err(RingError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn frobenius_fixed_fields_have_expected_size() {
        for (p, n) in [(2u64, 4usize), (2, 6), (3, 2), (3, 4)] {
            let f = galois_field(p, n, &budget()).unwrap();
            for d in (1..=n).filter(|d| n % d == 0) {
                let q = p.pow(d as u32);
                let fixed = f.elements().filter(|&x| x == 0 || f.pow(x, q) == x).count();
                assert_eq!(fixed as u64, q, "GF({p}^{n}) fixed field of degree {d}");
            }
        }
    }

    #[test]
    fn matrix_ring_orders() {
        let gf2 = galois_field(2, 1, &budget()).unwrap();
        let t2 = matrix_ring(&gf2, 2, MatrixShape::UpperTriangular, &budget()).unwrap();
        let m2 = matrix_ring(&gf2, 2, MatrixShape::Full, &budget()).unwrap();
        assert_eq!((t2.order(), m2.order()), (8, 16));
        assert!(t2.is_unital() && m2.is_unital());
        assert!(!m2.is_commutative());
        let z2 = z_mod(2, &budget()).unwrap();
        let m1 = matrix_ring(&z2, 1, MatrixShape::Full, &budget()).unwrap();
        assert!(m1.same_tables(&z2));
        let null = null_ring(2, &budget()).unwrap();
        assert_eq!(
            matrix_ring(&null, 2, MatrixShape::Full, &budget()).unwrap_err(),
            RingError::NotUnital
        );
    }

    #[test]
    fn products_and_unitality() {
        let z2 = z_mod(2, &budget()).unwrap();
        let null = null_ring(2, &budget()).unwrap();
        let p = direct_product(&z2, &z2, &budget()).unwrap();
        assert_eq!((p.order(), p.characteristic()), (4, 2));
        assert!(p.is_unital());
        assert!(!direct_product(&z2, &null, &budget()).unwrap().is_unital());
        let zero = z_mod(1, &budget()).unwrap();
        let padded = direct_product(&zero, &z2, &budget()).unwrap();
        assert!(padded.same_tables(&z2));
    }

    #[test]
    fn every_constructor_yields_a_ring() {
        let b = budget();
        let gf2 = galois_field(2, 1, &b).unwrap();
        let rings = vec![
            z_mod(1, &b).unwrap(),
            z_mod(12, &b).unwrap(),
            null_ring(3, &b).unwrap(),
            galois_field(2, 4, &b).unwrap(),
            galois_field(3, 2, &b).unwrap(),
            matrix_ring(&gf2, 2, MatrixShape::Full, &b).unwrap(),
            matrix_ring(&z_mod(3, &b).unwrap(), 2, MatrixShape::UpperTriangular, &b).unwrap(),
            direct_product(&z_mod(2, &b).unwrap(), &z_mod(4, &b).unwrap(), &b).unwrap(),
        ];
        for r in rings {
            let report = validate_ring(&r);
            assert!(report.is_ring, "{}: {:?}", r.descriptor(), report.failures);
        }
    }

    #[test]
    fn realized_graph_rings() {
        let b = budget();
        assert_eq!(realize_complete_graph(1, &b).unwrap().order(), 1);
        assert_eq!(realize_complete_graph(3, &b).unwrap().order(), 16);
        assert_eq!(realize_complete_graph(4, &b).unwrap().order(), 256);
        assert!(matches!(
            realize_complete_graph(5, &b),
            Err(RingError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn quotient_of_z12_by_4() {
        let z12 = z_mod(12, &budget()).unwrap();
        let (q, proj) = quotient_by_multiples(&z12, 4).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.characteristic(), 4);
        assert_eq!(proj[5], proj[1]);
        assert!(validate_ring(&q).is_ring);
    }
}
