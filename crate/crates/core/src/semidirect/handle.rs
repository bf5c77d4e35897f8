use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::{additive_endomorphisms, SemidirectError};
use crate::localized::{class_representative, membership_witness, LocalizedRational, PrimeSupport};
use crate::poly::IntPolynomial;
use crate::ring::Ring;

/// `(m, I, e, L, Rm)`: `L` and `Rm` give the left and right actions of
/// `1/m` on `I` as value arrays indexed by element id.
#[derive(Debug, Clone)]
pub struct SemidirectData {
    pub m: u64,
    pub ideal: Ring,
    pub e: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl SemidirectData {
    /// Checks every condition needed for `Z[1/m] ⋉ I` to be a unital ring
    /// with identity `(1, e)`; the first violation is returned with its
    /// witness ids.
    pub fn validate(&self) -> Result<(), SemidirectError> {
        let i = &self.ideal;
        let n = i.order();
        if self.m == 0 {
            return Err(SemidirectError::invalid("m must be positive", vec![]));
        }
        if self.e >= n {
            return Err(SemidirectError::invalid("e out of range", vec![self.e]));
        }
        for (what, map) in [("L", &self.left), ("Rm", &self.right)] {
            if map.len() != n {
                return Err(SemidirectError::invalid(&format!("{what} must list {n} values"), vec![map.len()]));
            }
            if let Some(&v) = map.iter().find(|&&v| v >= n) {
                return Err(SemidirectError::invalid(&format!("{what} value out of range"), vec![v]));
            }
        }
        let (l, r, e) = (&self.left, &self.right, self.e);
        let fail = |what: &str, w: Vec<usize>| Err(SemidirectError::invalid(what, w));
        if i.mul(e, e) != e {
            return fail("e·e = e", vec![e]);
        }
        for x in i.elements() {
            if i.scalar_mul_u64(self.m, l[x]) != i.sub(x, i.mul(e, x)) {
                return fail("m·L(x) = x - ex", vec![x]);
            }
            if i.scalar_mul_u64(self.m, r[x]) != i.sub(x, i.mul(x, e)) {
                return fail("m·Rm(x) = x - xe", vec![x]);
            }
            if i.mul(e, l[x]) != i.zero() {
                return fail("e·L(x) = 0", vec![x]);
            }
            if l[i.mul(e, x)] != i.zero() {
                return fail("L(ex) = 0", vec![x]);
            }
            if i.mul(r[x], e) != i.zero() {
                return fail("Rm(x)·e = 0", vec![x]);
            }
            if r[i.mul(x, e)] != i.zero() {
                return fail("Rm(xe) = 0", vec![x]);
            }
            if l[r[x]] != r[l[x]] {
                return fail("L(Rm(x)) = Rm(L(x))", vec![x]);
            }
            for y in i.elements() {
                if l[i.add(x, y)] != i.add(l[x], l[y]) {
                    return fail("L(x+y) = L(x) + L(y)", vec![x, y]);
                }
                if r[i.add(x, y)] != i.add(r[x], r[y]) {
                    return fail("Rm(x+y) = Rm(x) + Rm(y)", vec![x, y]);
                }
                if l[i.mul(x, y)] != i.mul(l[x], y) {
                    return fail("L(xy) = L(x)y", vec![x, y]);
                }
                if r[i.mul(x, y)] != i.mul(x, r[y]) {
                    return fail("Rm(xy) = x Rm(y)", vec![x, y]);
                }
                if i.mul(x, l[y]) != i.mul(r[x], y) {
                    return fail("x L(y) = Rm(x) y", vec![x, y]);
                }
            }
        }
        Ok(())
    }

    /// Every valid `(e, L, Rm)` on `ideal` for the given `m`.
    pub fn enumerate(ideal: &Ring, m: u64) -> Vec<SemidirectData> {
        let i = ideal;
        let endos = additive_endomorphisms(i);
        let mut out = Vec::new();
        for e in i.elements().filter(|&e| i.mul(e, e) == e) {
            let lefts: Vec<&Vec<usize>> = endos
                .iter()
                .filter(|l| {
                    i.elements().all(|x| {
                        i.scalar_mul_u64(m, l[x]) == i.sub(x, i.mul(e, x))
                            && i.mul(e, l[x]) == i.zero()
                            && l[i.mul(e, x)] == i.zero()
                            && i.elements().all(|y| l[i.mul(x, y)] == i.mul(l[x], y))
                    })
                })
                .collect();
            let rights: Vec<&Vec<usize>> = endos
                .iter()
                .filter(|r| {
                    i.elements().all(|x| {
                        i.scalar_mul_u64(m, r[x]) == i.sub(x, i.mul(x, e))
                            && i.mul(r[x], e) == i.zero()
                            && r[i.mul(x, e)] == i.zero()
                            && i.elements().all(|y| r[i.mul(x, y)] == i.mul(x, r[y]))
                    })
                })
                .collect();
            for l in &lefts {
                for r in &rights {
                    let data = SemidirectData { m, ideal: i.clone(), e, left: (*l).clone(), right: (*r).clone() };
                    if data.validate().is_ok() {
                        out.push(data);
                    }
                }
            }
        }
        out
    }
}

/// Element `(z, x)` of `Z[1/m] ⋉ I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SdElement {
    pub z: LocalizedRational,
    pub x: usize,
}

impl fmt::Display for SdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.z.value();
        write!(f, "({z}, {})", self.x)
    }
}

/// Validated `Z[1/m] ⋉ I`. The action of `a/m^k` (with `k ≥ 1`) is
/// `a·L^k` on the left and `a·Rm^k` on the right; integers need `k ≥ 1`
/// too, since `1 = m·(1/m)` acts as `x ↦ x - ex`.
#[derive(Debug, Clone)]
pub struct LocalizedSemidirect {
    data: SemidirectData,
    support: PrimeSupport,
}

impl LocalizedSemidirect {
    pub fn new(data: SemidirectData) -> Result<Self, SemidirectError> {
        data.validate()?;
        let support = PrimeSupport::of(data.m);
        Ok(Self { data, support })
    }

    pub fn data(&self) -> &SemidirectData {
        &self.data
    }

    pub fn ideal(&self) -> &Ring {
        &self.data.ideal
    }

    pub fn m(&self) -> u64 {
        self.data.m
    }

    pub fn support(&self) -> &PrimeSupport {
        &self.support
    }

    pub fn element(&self, z: LocalizedRational, x: usize) -> Result<SdElement, SemidirectError> {
        if z.modulus() != self.data.m {
            return Err(SemidirectError::invalid("element modulus differs from m", vec![z.modulus() as usize]));
        }
        self.data.ideal.check(x)?;
        Ok(SdElement { z, x })
    }

    pub fn identity(&self) -> SdElement {
        SdElement { z: LocalizedRational::one(self.data.m), x: self.data.e }
    }

    pub fn name(&self, a: &SdElement) -> String {
        format!("({}, {})", a.z.value(), self.data.ideal.name(a.x))
    }

    pub fn zero(&self) -> SdElement {
        SdElement { z: LocalizedRational::zero(self.data.m), x: self.data.ideal.zero() }
    }

    /// `n·(1, e)`.
    pub fn integer(&self, n: &BigInt) -> SdElement {
        SdElement {
            z: LocalizedRational::integer(self.data.m, n.clone()),
            x: self.data.ideal.scalar_mul(n, self.data.e),
        }
    }

    pub fn add(&self, a: &SdElement, b: &SdElement) -> SdElement {
        SdElement { z: a.z.try_add(&b.z).expect("same modulus"), x: self.data.ideal.add(a.x, b.x) }
    }

    pub fn neg(&self, a: &SdElement) -> SdElement {
        SdElement { z: a.z.neg(), x: self.data.ideal.neg(a.x) }
    }

    pub fn sub(&self, a: &SdElement, b: &SdElement) -> SdElement {
        self.add(a, &self.neg(b))
    }

    /// Writes `z = a/m^k` with `k ≥ 1` as small as possible.
    fn scaled(&self, z: &LocalizedRational) -> (BigInt, usize) {
        let m = BigInt::from(self.data.m);
        let mut pow = m.clone();
        let mut k = 1;
        while !pow.is_multiple_of(z.denom()) {
            pow *= &m;
            k += 1;
        }
        (z.numer() * (pow / z.denom()), k)
    }

    fn iterate(map: &[usize], x: usize, k: usize) -> usize {
        (0..k).fold(x, |y, _| map[y])
    }

    pub fn act_left(&self, z: &LocalizedRational, x: usize) -> usize {
        let (a, k) = self.scaled(z);
        self.data.ideal.scalar_mul(&a, Self::iterate(&self.data.left, x, k))
    }

    pub fn act_right(&self, x: usize, z: &LocalizedRational) -> usize {
        let (a, k) = self.scaled(z);
        self.data.ideal.scalar_mul(&a, Self::iterate(&self.data.right, x, k))
    }

    pub fn mul(&self, a: &SdElement, b: &SdElement) -> SdElement {
        let i = &self.data.ideal;
        let x = i.add(i.add(self.act_left(&a.z, b.x), self.act_right(a.x, &b.z)), i.mul(a.x, b.x));
        SdElement { z: a.z.try_mul(&b.z).expect("same modulus"), x }
    }

    pub fn commutes(&self, a: &SdElement, b: &SdElement) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// `a^k` for `k ≥ 1`, by repeated right multiplication.
    pub fn pow(&self, a: &SdElement, k: usize) -> SdElement {
        assert!(k >= 1, "pow needs a positive exponent");
        let mut acc = a.clone();
        for _ in 1..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `q(a)`, the constant term acting as a multiple of `(1, e)`.
    pub fn eval(&self, q: &IntPolynomial, a: &SdElement) -> SdElement {
        let mut acc = self.zero();
        for c in q.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, a), &self.integer(c));
        }
        acc
    }

    /// Applies `chain[0]`, then `chain[1]`, and so on.
    pub fn eval_chain(&self, chain: &[IntPolynomial], a: &SdElement) -> SdElement {
        chain.iter().fold(a.clone(), |acc, q| self.eval(q, &acc))
    }

    /// Least `v < u` with `f_{a,u} = f_{a,v}` on all of `I`, where
    /// `(a, r)^k = (a^k, f_{a,k}(r))`.
    pub fn stabilize_power_functions(&self, a: &LocalizedRational) -> PowerCycle {
        let i = &self.data.ideal;
        let base: Vec<SdElement> = i.elements().map(|r| SdElement { z: a.clone(), x: r }).collect();
        let mut current = base.clone();
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut k = 1;
        loop {
            let f: Vec<usize> = current.iter().map(|p| p.x).collect();
            if let Some(&v) = seen.get(&f) {
                return PowerCycle { u: k, v };
            }
            seen.insert(f, k);
            current = current.iter().zip(&base).map(|(p, b)| self.mul(p, b)).collect();
            k += 1;
        }
    }

    /// `(b, r + g1·e)` for `(a, r)`, with `b` the squarefree class
    /// representative of `a`. Both directions are checked by evaluating the
    /// polynomial chains on the actual elements.
    pub fn canonicalize(&self, elem: &SdElement) -> Result<Canonical, SemidirectError> {
        let a = &elem.z;
        let b = class_representative(a);
        let (s1, g1) = self.shift_polynomial(a, &b)?;
        let (s2, _) = self.shift_polynomial(&b, a)?;

        let representative = self.eval(&s1, elem);
        let expected = SdElement { z: b.clone(), x: self.data.ideal.add(elem.x, self.data.ideal.scalar_mul(&g1, self.data.e)) };
        if representative != expected {
            return Err(SemidirectError::WitnessFailed(format!("S1{elem} = {representative}, expected {expected}")));
        }
        // (S2∘S1)^(c-1)∘S2 undoes S1.
        let c = self.data.ideal.characteristic().max(1) as usize;
        let mut back = vec![s2.clone()];
        for _ in 1..c {
            back.push(s1.clone());
            back.push(s2.clone());
        }
        let returned = self.eval_chain(&back, &representative);
        if &returned != elem {
            return Err(SemidirectError::WitnessFailed(format!("chain returned {returned}, expected {elem}")));
        }
        Ok(Canonical { representative, g1, forward: s1, backward: back })
    }

    /// `S(x) = K(G(H_a(x))) + x` with `K = P - x` for `P(a) = b` and
    /// `G(H_a(a)) = a`, together with the constant term `g` of `K∘G`.
    fn shift_polynomial(
        &self,
        a: &LocalizedRational,
        b: &LocalizedRational,
    ) -> Result<(IntPolynomial, BigInt), SemidirectError> {
        let p = membership_witness(a, b).ok_or_else(|| SemidirectError::WitnessFailed(format!("{b} not in <{a}>_1")))?;
        let cycle = self.stabilize_power_functions(a);
        let h = cycle.polynomial();
        let ha = a.eval(&h);
        let g = membership_witness(&ha, a).ok_or_else(|| SemidirectError::WitnessFailed(format!("{a} not in <{ha}>_1")))?;
        let k = &p - &IntPolynomial::x();
        let kg = k.compose(&g);
        let shift = kg.constant_term();
        let s = &kg.compose(&h) + &IntPolynomial::x();
        Ok((s, shift))
    }
}

/// `x^u - x^v` kills the `I`-component of every power of `(a, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PowerCycle {
    pub u: usize,
    pub v: usize,
}

impl PowerCycle {
    pub fn polynomial(&self) -> IntPolynomial {
        &IntPolynomial::monomial(1, self.u) - &IntPolynomial::monomial(1, self.v)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Canonical {
    pub representative: SdElement,
    pub g1: BigInt,
    /// Maps the input to the representative.
    pub forward: IntPolynomial,
    /// Applied in order, maps the representative back to the input.
    pub backward: Vec<IntPolynomial>,
}
