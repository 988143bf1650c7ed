//! Reduction of Q(ζ_N) modulo a degree-one prime p ≡ 1 (mod N).
//!
//! Evaluating the power-basis polynomial at a primitive N-th root of unity
//! in F_p is a ring homomorphism on the p-integral elements. It is used to
//! screen large word searches cheaply: whatever fails modulo p fails exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::number::CycloNum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeEmbedding {
    pub p: u64,
    pub root: u64,
    pub conductor: u32,
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PrimeEmbedding {
    /// The `index`-th prime p ≡ 1 (mod N) below 2^62, counting downward, with
    /// the smallest primitive N-th root of unity of the form a^((p−1)/N).
    pub fn nth(conductor: u32, index: usize) -> Self {
        let n = conductor as u64;
        let mut k = ((1u64 << 62) - 1) / n;
        let mut seen = 0;
        loop {
            let p = k * n + 1;
            if is_prime_u64(p) {
                if seen == index {
                    return Self {
                        p,
                        root: primitive_root_of_order(n, p),
                        conductor,
                    };
                }
                seen += 1;
            }
            k -= 1;
        }
    }

    /// Image of `a`, or `None` when a denominator vanishes modulo p.
    pub fn reduce(&self, a: &CycloNum) -> Option<u64> {
        assert_eq!(a.conductor(), self.conductor, "conductor mismatch");
        let p = self.p;
        let den = bigint_mod(a.denominator(), p);
        let den_inv = inv_mod(den, p)?;
        let mut acc = 0u64;
        let mut zk = 1u64;
        for c in a.numerators() {
            if !c.is_zero() {
                acc = (acc + mul_mod(bigint_mod(c, p), zk, p)) % p;
            }
            zk = mul_mod(zk, self.root, p);
        }
        Some(mul_mod(acc, den_inv, p))
    }
}

fn primitive_root_of_order(n: u64, p: u64) -> u64 {
    let factors = prime_factors(n);
    for a in 2.. {
        let z = pow_mod(a, (p - 1) / n, p);
        if z == 1 && n > 1 {
            continue;
        }
        if factors.iter().all(|&q| pow_mod(z, n / q, p) != 1) {
            return z;
        }
    }
    unreachable!()
}

pub fn bigint_mod(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}
