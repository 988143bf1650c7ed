use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Static data for Q(ζ_N): the cyclotomic polynomial and the power basis
/// expansion of every ζ_N^j, j < N.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u32,
    degree: usize,
    modulus: Vec<BigInt>,
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicField {
    fn build(conductor: u32) -> Self {
        let modulus = cyclotomic_polynomial(conductor);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(conductor as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..conductor {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic modulus
            let top = cur[degree - 1].clone();
            for k in (1..degree).rev() {
                cur[k] = cur[k - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for k in 0..degree {
                    cur[k] -= &top * &modulus[k];
                }
            }
        }
        Self {
            conductor,
            degree,
            modulus,
            powers,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// φ(N), the dimension of the power basis.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of Φ_N, lowest degree first.
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Power-basis coordinates of ζ_N^k for any integer k.
    pub fn power(&self, k: i64) -> &[BigInt] {
        let n = self.conductor as i64;
        &self.powers[k.rem_euclid(n) as usize]
    }
}

static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
static CYCLOTOMIC_POLYS: OnceLock<RwLock<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();

/// Shared handle to Q(ζ_N). Fields are built once and cached process-wide.
pub fn field(conductor: u32) -> Arc<CyclotomicField> {
    assert!(conductor >= 1, "conductor must be positive");
    let cache = FIELDS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(f) = cache.read().unwrap().get(&conductor) {
        return Arc::clone(f);
    }
    let built = Arc::new(CyclotomicField::build(conductor));
    let mut w = cache.write().unwrap();
    Arc::clone(w.entry(conductor).or_insert(built))
}

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first,
/// from Φ_n = (x^n - 1) / ∏_{d | n, d < n} Φ_d.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    let cache = CYCLOTOMIC_POLYS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_monic_division(&num, &phi_d);
        }
    }
    cache.write().unwrap().insert(n, num.clone());
    num
}

fn exact_monic_division(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}
