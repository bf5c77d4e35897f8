use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    AddAssociative,
    AddCommutative,
    AddIdentity,
    AddInverse,
    MulAssociative,
    LeftDistributive,
    RightDistributive,
    /// The declared identity is not a two-sided identity.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RingReport {
    pub is_ring: bool,
    pub is_unital: bool,
    pub characteristic: u64,
    pub failures: Vec<AxiomFailure>,
    /// False when triple axioms were sampled rather than enumerated.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    pub exhaustive_max: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            exhaustive_max: 256,
            samples: 100_000,
            seed: 0x5eed,
        }
    }
}

pub fn validate_ring(ring: &Ring) -> RingReport {
    validate_ring_with(ring, &ValidateOptions::default())
}

/// Checks the ring axioms, recording the first (lexicographically least,
/// when exhaustive) witness of each violated axiom.
pub fn validate_ring_with(ring: &Ring, opts: &ValidateOptions) -> RingReport {
    let n = ring.order();
    let zero = ring.zero();
    let mut failures: Vec<AxiomFailure> = Vec::new();
    let record = |axiom: Axiom, witness: Vec<usize>, failures: &mut Vec<AxiomFailure>| {
        if !failures.iter().any(|f| f.axiom == axiom) {
            failures.push(AxiomFailure { axiom, witness });
        }
    };

    if let Some(x) = ring.elements().find(|&x| ring.add(zero, x) != x || ring.add(x, zero) != x) {
        record(Axiom::AddIdentity, vec![x], &mut failures);
    }
    if let Some(x) = ring.elements().find(|&x| ring.add(x, ring.neg(x)) != zero) {
        record(Axiom::AddInverse, vec![x], &mut failures);
    }

    let exhaustive = n <= opts.exhaustive_max;
    let check_pair = |a: usize, b: usize, failures: &mut Vec<AxiomFailure>| {
        if ring.add(a, b) != ring.add(b, a) {
            record(Axiom::AddCommutative, vec![a, b], failures);
        }
    };
    let check_triple = |a: usize, b: usize, c: usize, failures: &mut Vec<AxiomFailure>| {
        if ring.add(ring.add(a, b), c) != ring.add(a, ring.add(b, c)) {
            record(Axiom::AddAssociative, vec![a, b, c], failures);
        }
        if ring.mul(ring.mul(a, b), c) != ring.mul(a, ring.mul(b, c)) {
            record(Axiom::MulAssociative, vec![a, b, c], failures);
        }
        if ring.mul(a, ring.add(b, c)) != ring.add(ring.mul(a, b), ring.mul(a, c)) {
            record(Axiom::LeftDistributive, vec![a, b, c], failures);
        }
        if ring.mul(ring.add(a, b), c) != ring.add(ring.mul(a, c), ring.mul(b, c)) {
            record(Axiom::RightDistributive, vec![a, b, c], failures);
        }
    };

    if exhaustive {
        for a in 0..n {
            for b in 0..n {
                check_pair(a, b, &mut failures);
                for c in 0..n {
                    check_triple(a, b, c, &mut failures);
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            check_pair(a, b, &mut failures);
            check_triple(a, b, c, &mut failures);
        }
    }

    let is_unital = match ring.identity() {
        Some(e) => {
            if let Some(x) = ring.elements().find(|&x| ring.mul(e, x) != x || ring.mul(x, e) != x) {
                record(Axiom::Identity, vec![e, x], &mut failures);
                find_identity(ring).is_some()
            } else {
                true
            }
        }
        None => find_identity(ring).is_some(),
    };

    failures.sort_by_key(|f| f.axiom as u8);
    RingReport {
        is_ring: failures.iter().all(|f| f.axiom == Axiom::Identity),
        is_unital,
        characteristic: ring.characteristic(),
        failures,
        exhaustive,
    }
}

fn find_identity(ring: &Ring) -> Option<usize> {
    ring.elements().find(|&e| {
        ring.mul(e, e) == e && ring.elements().all(|x| ring.mul(e, x) == x && ring.mul(x, e) == x)
    })
}
