//! Rigorous complex enclosures of cyclotomic numbers under the embedding
//! ζ_N ↦ exp(2π√−1/N).
//!
//! All transcendental quantities are computed in binary fixed point with an
//! explicit error count in units of the last place (ulps), so every returned
//! interval is a proof, not an estimate.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::number::CycloNum;

/// Disk enclosure: the true value lies within `radius` of `(re_mid, im_mid)`
/// in the max norm of each coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedApprox {
    pub re_mid: BigRational,
    pub im_mid: BigRational,
    pub radius: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl CertifiedApprox {
    pub fn re_excludes_zero(&self) -> bool {
        self.re_mid.abs() > self.radius
    }

    pub fn excludes_zero(&self) -> bool {
        self.re_mid.abs() > self.radius || self.im_mid.abs() > self.radius
    }

    pub fn contains(&self, re: &BigRational, im: &BigRational) -> bool {
        (&self.re_mid - re).abs() <= self.radius && (&self.im_mid - im).abs() <= self.radius
    }

    /// True when the two enclosures share a point.
    pub fn overlaps(&self, other: &CertifiedApprox) -> bool {
        let r = &self.radius + &other.radius;
        (&self.re_mid - &other.re_mid).abs() <= r && (&self.im_mid - &other.im_mid).abs() <= r
    }

    pub fn conjugate(&self) -> CertifiedApprox {
        CertifiedApprox {
            re_mid: self.re_mid.clone(),
            im_mid: -&self.im_mid,
            radius: self.radius.clone(),
        }
    }
}

/// Fixed-point value `mid / 2^bits` with `|true - mid/2^bits| ≤ err / 2^bits`.
#[derive(Clone, Debug)]
struct Fixed {
    mid: BigInt,
    err: BigInt,
}

fn atan_inv(q: u64, bits: u64) -> Fixed {
    // atan(1/q) = Σ (−1)^k / ((2k+1) q^(2k+1))
    let scale = BigInt::one() << bits;
    let q2 = BigInt::from(q * q);
    let mut power = BigInt::from(q);
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    for k in 0u64.. {
        let term = &scale / (&power * BigInt::from(2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        terms += 1;
        power *= &q2;
    }
    // one ulp of floor error per term plus one for the alternating tail
    Fixed {
        mid: sum,
        err: BigInt::from(terms + 1),
    }
}

fn pi_fixed(bits: u64) -> Fixed {
    let a = atan_inv(5, bits);
    let b = atan_inv(239, bits);
    Fixed {
        mid: a.mid * 16 - b.mid * 4,
        err: a.err * 16 + b.err * 4,
    }
}

/// cos and sin of 2πk/N with `k` reduced into (−N/2, N/2].
fn cos_sin_fixed(k: i64, n: i64, bits: u64) -> (Fixed, Fixed) {
    let mut k = k.rem_euclid(n);
    if 2 * k > n {
        k -= n;
    }
    let pi = pi_fixed(bits);
    // θ = 2πk/N, rounded to the fixed-point grid
    let num = &pi.mid * BigInt::from(2 * k);
    let den = BigInt::from(n);
    let (x, r) = num.div_rem(&den);
    let x = if (r.abs() * 2) > den {
        x + num.signum()
    } else {
        x
    };
    // |θ − x| ≤ π_err·2|k|/N + 1/2 ≤ π_err + 1
    let theta_err = &pi.err + BigInt::one();
    let scale = BigInt::one() << bits;
    // terms t_j ≈ x^j/j!·scale; |x| < 4·scale so e_j ≤ 4·e_{j−1}/j + 1
    let mut t = scale.clone();
    let mut e = BigInt::zero();
    let mut cos = Fixed {
        mid: BigInt::zero(),
        err: BigInt::zero(),
    };
    let mut sin = cos.clone();
    for j in 0u64.. {
        let target = if j % 2 == 0 { &mut cos } else { &mut sin };
        if (j / 2) % 2 == 0 {
            target.mid += &t;
        } else {
            target.mid -= &t;
        }
        target.err += &e;
        let next = j + 1;
        let prod = &t * &x;
        let div = &scale * BigInt::from(next);
        t = prod.div_floor(&div);
        e = (&e * 4u32 + BigInt::from(next - 1)) / BigInt::from(next) + BigInt::one();
        if next >= 8 && t.is_zero() {
            // true remainder of the series is bounded by e (ratio < 1/2 from here)
            cos.err += &e * 2u32;
            sin.err += &e * 2u32;
            break;
        }
    }
    cos.err += &theta_err;
    sin.err += &theta_err;
    (cos, sin)
}

type TrigTable = Arc<Vec<(Fixed, Fixed)>>;
static TRIG: OnceLock<RwLock<HashMap<(u32, u64), TrigTable>>> = OnceLock::new();

fn trig_table(conductor: u32, degree: usize, bits: u64) -> TrigTable {
    let cache = TRIG.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().unwrap().get(&(conductor, bits)) {
        return Arc::clone(t);
    }
    let table: Vec<_> = (0..degree)
        .map(|k| cos_sin_fixed(k as i64, conductor as i64, bits))
        .collect();
    let table = Arc::new(table);
    cache.write().unwrap().insert((conductor, bits), Arc::clone(&table));
    table
}

fn ilog2_ceil(q: &BigRational) -> i64 {
    if q.is_zero() {
        return i64::MIN / 2;
    }
    let n = q.numer().abs();
    let d = q.denom();
    n.bits() as i64 - d.bits() as i64 + 1
}

impl CycloNum {
    /// Certified enclosure with radius ≤ 2^(−precision_bits).
    pub fn approximate(&self, precision_bits: u32) -> CertifiedApprox {
        let target = BigRational::new(BigInt::one(), BigInt::one() << precision_bits as usize);
        if self.is_zero() {
            return CertifiedApprox {
                re_mid: BigRational::zero(),
                im_mid: BigRational::zero(),
                radius: BigRational::zero(),
            };
        }
        let coeffs = self.coeffs();
        let weight: BigRational = coeffs.iter().map(|c| c.abs()).sum();
        let mut bits = (precision_bits as i64 + ilog2_ceil(&weight).max(0) + 24) as u64;
        loop {
            let table = trig_table(self.conductor(), self.degree(), bits);
            let scale = BigInt::one() << bits;
            let mut re = BigRational::zero();
            let mut im = BigRational::zero();
            let mut err = BigRational::zero();
            for (c, (cos, sin)) in coeffs.iter().zip(table.iter()) {
                if c.is_zero() {
                    continue;
                }
                re += c * BigRational::new(cos.mid.clone(), scale.clone());
                im += c * BigRational::new(sin.mid.clone(), scale.clone());
                let e = cos.err.clone().max(sin.err.clone());
                err += c.abs() * BigRational::new(e, scale.clone());
            }
            if err <= target {
                return CertifiedApprox {
                    re_mid: re,
                    im_mid: im,
                    radius: err,
                };
            }
            bits += 32;
        }
    }

    /// Sign of a real element, refining the enclosure until it excludes zero.
    ///
    /// Panics if called on a non-real element.
    pub fn real_sign(&self, start_bits: u32) -> Sign {
        assert!(self.is_real(), "real_sign on a non-real element");
        if self.is_zero() {
            return Sign::Zero;
        }
        if let Some(q) = self.to_rational() {
            return if q.is_positive() {
                Sign::Positive
            } else {
                Sign::Negative
            };
        }
        let mut bits = start_bits.max(16);
        loop {
            let a = self.approximate(bits);
            if a.re_excludes_zero() {
                return if a.re_mid.is_positive() {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
            }
            bits *= 2;
        }
    }
}
