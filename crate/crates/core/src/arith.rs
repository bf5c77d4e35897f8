//! Small-integer number theory shared by the ring constructors and the
//! localization code. Everything here works on `u64`; big values go through
//! `num-bigint` at the call sites.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of positive divisors of `n`.
///
/// ```
/// assert_eq!(ringlab_core::divisor_count(12), 6);
/// ```
pub fn divisor_count(n: u64) -> u64 {
    assert!(n >= 1, "divisor_count needs n >= 1");
    factorize(n).iter().map(|&(_, e)| u64::from(e) + 1).product()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = ext_gcd(&a.mod_floor(m), m);
    if g.is_one() {
        Some(x.mod_floor(m))
    } else {
        None
    }
}

/// `n mod m` as a `u64`, with `m > 0`.
pub fn reduce_big(n: &BigInt, m: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(m));
    if r.is_zero() {
        0
    } else {
        u64::try_from(r).expect("residue fits in u64")
    }
}
