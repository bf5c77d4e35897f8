use serde::{Deserialize, Serialize};

use super::SemidirectError;
use crate::graph::CompressedGraph;
use crate::ring::{Budget, Ring, RingError, RingRule};
use crate::subring::{compress_classes, graph_of_partition, Mode};

struct Unitalization {
    base: Ring,
    m: u64,
}

impl Unitalization {
    fn split(&self, id: usize) -> (u64, usize) {
        let n = self.base.order();
        ((id / n) as u64, id % n)
    }

    fn join(&self, k: u64, a: usize) -> usize {
        (k % self.m) as usize * self.base.order() + a
    }
}

impl RingRule for Unitalization {
    fn order(&self) -> usize {
        self.m as usize * self.base.order()
    }
    fn zero(&self) -> usize {
        self.join(0, self.base.zero())
    }
    fn identity(&self) -> Option<usize> {
        Some(self.join(1, self.base.zero()))
    }
    fn add(&self, x: usize, y: usize) -> usize {
        let ((k, a), (n, b)) = (self.split(x), self.split(y));
        self.join(k + n, self.base.add(a, b))
    }
    fn neg(&self, x: usize) -> usize {
        let (k, a) = self.split(x);
        self.join(self.m - k, self.base.neg(a))
    }
    fn mul(&self, x: usize, y: usize) -> usize {
        let ((k, a), (n, b)) = (self.split(x), self.split(y));
        let r = &self.base;
        let second = r.add(r.add(r.scalar_mul_u64(n, a), r.scalar_mul_u64(k, b)), r.mul(a, b));
        self.join(k * n, second)
    }
    fn descriptor(&self) -> String {
        format!("({})^1", self.base.descriptor())
    }
    fn name(&self, x: usize) -> String {
        let (k, a) = self.split(x);
        format!("({k},{})", self.base.name(a))
    }
}

/// `R¹` on `Z_m × R` with `m = char R`; element `(k, a)` has id
/// `k·|R| + a`, so `a ↦ (0, a)` is the identity on ids below `|R|`.
pub fn unitalization(ring: &Ring, budget: &Budget) -> Result<Ring, RingError> {
    let m = ring.characteristic();
    if m == 0 {
        return Err(RingError::InvalidArgument("characteristic undefined".into()));
    }
    Ring::from_rule(Unitalization { base: ring.clone(), m }, budget)
}

#[derive(Debug, Clone)]
pub struct PropIso {
    pub nonunital: CompressedGraph,
    pub unitalized: CompressedGraph,
    /// `map[i]` is the vertex of `Λ¹(R¹)` holding `(0, a)` for the
    /// representative `a` of vertex `i` of `Λ(R)`.
    pub map: Vec<usize>,
    pub holds: bool,
}

/// Checks that `[a] ↦ [(0, a)]_1` is an isomorphism `Λ(R) → Λ¹(R¹)`.
pub fn check_prop_iso(ring: &Ring, budget: &Budget) -> Result<PropIso, RingError> {
    let r1 = unitalization(ring, budget)?;
    let p = compress_classes(ring, Mode::Nonunital)?;
    let p1 = compress_classes(&r1, Mode::Unital)?;
    let g = graph_of_partition(ring, &p);
    let g1 = graph_of_partition(&r1, &p1);
    let class1 = p1.class_of();
    // ids of (0, a) coincide with ids of a
    let map: Vec<usize> = p.classes.iter().map(|c| class1[c.representative]).collect();

    let mut seen = vec![false; g1.vertex_count()];
    let mut bijective = map.len() == g1.vertex_count();
    for &t in &map {
        bijective &= !std::mem::replace(&mut seen[t], true);
    }
    // A class map is well defined only if every member lands in one class.
    let well_defined = p
        .classes
        .iter()
        .zip(&map)
        .all(|(c, &t)| c.members.iter().all(|&a| class1[a] == t));
    let preserves = bijective
        && (0..map.len()).all(|i| (i..map.len()).all(|j| g.has_edge(i, j) == g1.has_edge(map[i], map[j])));
    let holds = bijective && well_defined && preserves;
    Ok(PropIso { nonunital: g, unitalized: g1, map, holds })
}

/// Two-sided action of a finite ring `Z` on a finite ring `I`, row-major:
/// `left[z·|I| + x] = z·x`, `right[x·|Z| + z] = x·z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionTables {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl ActionTables {
    /// `n·x` from both sides for `Z = Z_m`.
    pub fn natural(z: &Ring, i: &Ring) -> Self {
        let left = (0..z.order() * i.order())
            .map(|k| i.scalar_mul_u64((k / i.order()) as u64, k % i.order()))
            .collect();
        let right = (0..i.order() * z.order())
            .map(|k| i.scalar_mul_u64((k % z.order()) as u64, k / z.order()))
            .collect();
        Self { left, right }
    }

    pub fn zero(z: &Ring, i: &Ring) -> Self {
        Self { left: vec![i.zero(); z.order() * i.order()], right: vec![i.zero(); z.order() * i.order()] }
    }
}

struct Acting<'a> {
    z: &'a Ring,
    i: &'a Ring,
    act: &'a ActionTables,
}

impl Acting<'_> {
    fn l(&self, z: usize, x: usize) -> usize {
        self.act.left[z * self.i.order() + x]
    }
    fn r(&self, x: usize, z: usize) -> usize {
        self.act.right[x * self.z.order() + z]
    }

    fn validate(&self) -> Result<(), SemidirectError> {
        let (z, i) = (self.z, self.i);
        let (nz, ni) = (z.order(), i.order());
        if self.act.left.len() != nz * ni || self.act.right.len() != nz * ni {
            return Err(SemidirectError::invalid("action table size", vec![]));
        }
        if let Some(&v) = self.act.left.iter().chain(&self.act.right).find(|&&v| v >= ni) {
            return Err(SemidirectError::invalid("action value out of range", vec![v]));
        }
        let fail = |what: &str, w: Vec<usize>| Err(SemidirectError::invalid(what, w));
        for a in 0..nz {
            for b in 0..nz {
                for x in 0..ni {
                    if self.l(z.add(a, b), x) != i.add(self.l(a, x), self.l(b, x)) {
                        return fail("(z+z')·x = z·x + z'·x", vec![a, b, x]);
                    }
                    if self.r(x, z.add(a, b)) != i.add(self.r(x, a), self.r(x, b)) {
                        return fail("x·(z+z') = x·z + x·z'", vec![x, a, b]);
                    }
                    if self.l(z.mul(a, b), x) != self.l(a, self.l(b, x)) {
                        return fail("(zz')·x = z·(z'·x)", vec![a, b, x]);
                    }
                    if self.r(x, z.mul(a, b)) != self.r(self.r(x, a), b) {
                        return fail("x·(zz') = (x·z)·z'", vec![x, a, b]);
                    }
                    if self.r(self.l(a, x), b) != self.l(a, self.r(x, b)) {
                        return fail("(z·x)·z' = z·(x·z')", vec![a, x, b]);
                    }
                }
            }
        }
        for a in 0..nz {
            for x in 0..ni {
                for y in 0..ni {
                    if self.l(a, i.add(x, y)) != i.add(self.l(a, x), self.l(a, y)) {
                        return fail("z·(x+y) = z·x + z·y", vec![a, x, y]);
                    }
                    if self.r(i.add(x, y), a) != i.add(self.r(x, a), self.r(y, a)) {
                        return fail("(x+y)·z = x·z + y·z", vec![x, y, a]);
                    }
                    if self.l(a, i.mul(x, y)) != i.mul(self.l(a, x), y) {
                        return fail("z·(xy) = (z·x)y", vec![a, x, y]);
                    }
                    if i.mul(x, self.l(a, y)) != i.mul(self.r(x, a), y) {
                        return fail("x(z·y) = (x·z)y", vec![x, a, y]);
                    }
                    if self.r(i.mul(x, y), a) != i.mul(x, self.r(y, a)) {
                        return fail("(xy)·z = x(y·z)", vec![x, y, a]);
                    }
                }
            }
        }
        Ok(())
    }

    /// Idempotent `e` with `1·x = x - ex` and `x·1 = x - xe` for all `x`.
    fn unit_idempotent(&self) -> Option<usize> {
        let one = self.z.identity()?;
        let i = self.i;
        i.elements().find(|&e| {
            i.mul(e, e) == e
                && i.elements().all(|x| {
                    self.l(one, x) == i.sub(x, i.mul(e, x)) && self.r(x, one) == i.sub(x, i.mul(x, e))
                })
        })
    }
}

struct FiniteSemidirect {
    z: Ring,
    i: Ring,
    act: ActionTables,
    identity: Option<usize>,
}

impl FiniteSemidirect {
    fn split(&self, id: usize) -> (usize, usize) {
        (id / self.i.order(), id % self.i.order())
    }
    fn join(&self, z: usize, x: usize) -> usize {
        z * self.i.order() + x
    }
    fn acting(&self) -> Acting<'_> {
        Acting { z: &self.z, i: &self.i, act: &self.act }
    }
}

impl RingRule for FiniteSemidirect {
    fn order(&self) -> usize {
        self.z.order() * self.i.order()
    }
    fn zero(&self) -> usize {
        self.join(self.z.zero(), self.i.zero())
    }
    fn identity(&self) -> Option<usize> {
        self.identity
    }
    fn add(&self, a: usize, b: usize) -> usize {
        let ((z1, x1), (z2, x2)) = (self.split(a), self.split(b));
        self.join(self.z.add(z1, z2), self.i.add(x1, x2))
    }
    fn neg(&self, a: usize) -> usize {
        let (z, x) = self.split(a);
        self.join(self.z.neg(z), self.i.neg(x))
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let ((z1, x1), (z2, x2)) = (self.split(a), self.split(b));
        let act = self.acting();
        let i = &self.i;
        let second = i.add(i.add(act.l(z1, x2), act.r(x1, z2)), i.mul(x1, x2));
        self.join(self.z.mul(z1, z2), second)
    }
    fn descriptor(&self) -> String {
        format!("{} ⋉ {}", self.z.descriptor(), self.i.descriptor())
    }
    fn name(&self, a: usize) -> String {
        let (z, x) = self.split(a);
        format!("({},{})", self.z.name(z), self.i.name(x))
    }
}

/// `Z ⋉ I` on ids `z·|I| + x`. The identity, when it exists, is
/// `(1_Z, e)` for the idempotent `e` found by exhaustive search.
pub fn semidirect_finite(z: &Ring, i: &Ring, act: ActionTables, budget: &Budget) -> Result<Ring, SemidirectError> {
    let acting = Acting { z, i, act: &act };
    acting.validate()?;
    let e = acting.unit_idempotent();
    let identity = match (z.identity(), e) {
        (Some(one), Some(e)) => Some(one * i.order() + e),
        _ => None,
    };
    Ok(Ring::from_rule(FiniteSemidirect { z: z.clone(), i: i.clone(), act, identity }, budget)?)
}

/// All additive endomorphisms of `ring`, as value arrays indexed by id.
pub fn additive_endomorphisms(ring: &Ring) -> Vec<Vec<usize>> {
    // Greedy generating set, with each element written as a coefficient
    // vector over it.
    let n = ring.order();
    let mut gens: Vec<usize> = Vec::new();
    let mut coords: Vec<Option<Vec<u64>>> = vec![None; n];
    coords[ring.zero()] = Some(Vec::new());
    for x in ring.elements() {
        if coords[x].is_some() {
            continue;
        }
        let g = gens.len();
        gens.push(x);
        let known: Vec<usize> = ring.elements().filter(|&y| coords[y].is_some()).collect();
        for y in known {
            let base = coords[y].clone().unwrap();
            let mut k = 1u64;
            let mut s = ring.add(y, x);
            while coords[s].is_none() {
                let mut c = base.clone();
                c.resize(g, 0);
                c.push(k);
                coords[s] = Some(c);
                s = ring.add(s, x);
                k += 1;
            }
        }
    }
    let coords: Vec<Vec<u64>> = coords.into_iter().map(|c| c.unwrap()).collect();

    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    loop {
        let f: Vec<usize> = coords
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&images)
                    .fold(ring.zero(), |acc, (&k, &img)| ring.add(acc, ring.scalar_mul_u64(k, img)))
            })
            .collect();
        let additive = ring.elements().all(|x| ring.elements().all(|y| f[ring.add(x, y)] == ring.add(f[x], f[y])));
        if additive {
            out.push(f);
        }
        let mut i = 0;
        loop {
            if i == images.len() {
                return out;
            }
            images[i] += 1;
            if images[i] < n {
                break;
            }
            images[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_with_loops, isomorphic};
    use crate::ring::{direct_product, galois_field, matrix_ring, null_ring, validate_ring, z_mod, MatrixShape};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn unitalization_examples() {
        let z2 = z_mod(2, &b()).unwrap();
        let u = unitalization(&z2, &b()).unwrap();
        assert_eq!(u.order(), 4);
        assert_eq!(u.identity(), Some(2));
        assert_eq!(u.name(2), "(1,0)");
        assert!(validate_ring(&u).is_ring);

        let zero = z_mod(1, &b()).unwrap();
        assert_eq!(unitalization(&zero, &b()).unwrap().order(), 1);

        // {0,2} in Z4 is Z2 with zero multiplication
        let two_z4 = null_ring(2, &b()).unwrap();
        let u = unitalization(&two_z4, &b()).unwrap();
        assert_eq!(u.order(), 4);
        assert!(validate_ring(&u).is_ring);
        assert_eq!(u.mul(1, 1), u.zero());
        assert_ne!(1, u.zero());
    }

    #[test]
    fn prop_iso_small() {
        let z2 = z_mod(2, &b()).unwrap();
        let r = check_prop_iso(&z2, &b()).unwrap();
        assert!(r.holds);
        assert!(isomorphic(&r.nonunital, &complete_with_loops(2)).is_found());
        let z4 = z_mod(4, &b()).unwrap();
        let r = check_prop_iso(&z4, &b()).unwrap();
        assert!(r.holds);
        assert!(isomorphic(&r.unitalized, &complete_with_loops(3)).is_found());
        let gf2 = galois_field(2, 1, &b()).unwrap();
        let t2 = matrix_ring(&gf2, 2, MatrixShape::UpperTriangular, &b()).unwrap();
        let r = check_prop_iso(&t2, &b()).unwrap();
        assert!(r.holds && r.unitalized.vertex_count() == 8);
    }

    #[test]
    fn natural_action_reproduces_unitalization() {
        for i in [z_mod(6, &b()).unwrap(), null_ring(3, &b()).unwrap()] {
            let zm = z_mod(i.characteristic() as usize, &b()).unwrap();
            let s = semidirect_finite(&zm, &i, ActionTables::natural(&zm, &i), &b()).unwrap();
            let u = unitalization(&i, &b()).unwrap();
            assert!(s.same_tables(&u));
        }
    }

    #[test]
    fn zero_action_on_null_ring_is_not_unital() {
        let z2 = z_mod(2, &b()).unwrap();
        let i = null_ring(2, &b()).unwrap();
        let s = semidirect_finite(&z2, &i, ActionTables::zero(&z2, &i), &b()).unwrap();
        assert_eq!(s.order(), 4);
        assert!(!s.is_unital());
        assert!(validate_ring(&s).is_ring);
        assert!(!validate_ring(&s).is_unital);
    }

    #[test]
    fn identity_action_finds_zero_idempotent() {
        let z2 = z_mod(2, &b()).unwrap();
        let f2 = galois_field(2, 1, &b()).unwrap();
        let s = semidirect_finite(&z2, &f2, ActionTables::natural(&z2, &f2), &b()).unwrap();
        assert_eq!(s.identity(), Some(2));
        let report = validate_ring(&s);
        assert!(report.is_ring && report.is_unital);
        let prod = direct_product(&z2, &z2, &b()).unwrap();
        assert_eq!(s.order(), prod.order());
    }

    #[test]
    fn invalid_action_is_reported() {
        let z2 = z_mod(2, &b()).unwrap();
        let f2 = galois_field(2, 1, &b()).unwrap();
        // 0·1 = 1 breaks additivity in z
        let mut act = ActionTables::natural(&z2, &f2);
        act.left[1] = 1;
        assert!(matches!(
            semidirect_finite(&z2, &f2, act, &b()),
            Err(SemidirectError::Invalid { .. })
        ));
    }

    #[test]
    fn endomorphism_counts() {
        // End(Z_n) = Z_n, End(Z2×Z2) = M_2(Z2)
        assert_eq!(additive_endomorphisms(&z_mod(6, &b()).unwrap()).len(), 6);
        let z2 = z_mod(2, &b()).unwrap();
        assert_eq!(additive_endomorphisms(&direct_product(&z2, &z2, &b()).unwrap()).len(), 16);
        let z3 = z_mod(3, &b()).unwrap();
        assert_eq!(additive_endomorphisms(&direct_product(&z3, &z3, &b()).unwrap()).len(), 81);
        let z4 = z_mod(4, &b()).unwrap();
        let p = direct_product(&z2, &z4, &b()).unwrap();
        let brute = brute_endomorphisms(&p);
        assert_eq!(additive_endomorphisms(&p).len(), brute);
    }

    fn brute_endomorphisms(r: &Ring) -> usize {
        let n = r.order();
        let mut count = 0;
        let mut f = vec![0usize; n];
        loop {
            if r.elements().all(|x| r.elements().all(|y| f[r.add(x, y)] == r.add(f[x], f[y]))) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return count;
                }
                f[i] += 1;
                if f[i] < n {
                    break;
                }
                f[i] = 0;
                i += 1;
            }
        }
    }
}
