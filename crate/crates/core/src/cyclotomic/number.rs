use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{field, lcm, CyclotomicField};
use crate::error::{Error, Result};

/// An element of Q(ζ_N) in the power basis {ζ_N^k : 0 ≤ k < φ(N)}.
///
/// Stored as integer numerators over one positive common denominator with
/// gcd(content, den) = 1, so the representation at a fixed conductor is
/// canonical.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloNum {
    pub fn zero(conductor: u32) -> Self {
        let field = field(conductor);
        let num = vec![BigInt::zero(); field.degree()];
        Self {
            field,
            num,
            den: BigInt::one(),
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_int(conductor, 1)
    }

    pub fn from_int(conductor: u32, value: i64) -> Self {
        Self::from_bigint(conductor, BigInt::from(value))
    }

    pub fn from_bigint(conductor: u32, value: BigInt) -> Self {
        let mut z = Self::zero(conductor);
        z.num[0] = value;
        z
    }

    pub fn from_rational(conductor: u32, value: &BigRational) -> Self {
        let mut z = Self::zero(conductor);
        z.num[0] = value.numer().clone();
        z.den = value.denom().clone();
        z.normalize();
        z
    }

    pub fn from_ratio(conductor: u32, numer: i64, denom: i64) -> Self {
        Self::from_rational(conductor, &BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// ζ_N^k.
    pub fn root_of_unity(conductor: u32, k: i64) -> Self {
        let field = field(conductor);
        let num = field.power(k).to_vec();
        Self {
            field,
            num,
            den: BigInt::one(),
        }
    }

    /// √−1 = ζ_4, realized inside Q(ζ_N) for the given multiple N of 4.
    pub fn imaginary_unit(conductor: u32) -> Self {
        assert!(conductor.is_multiple_of(4), "√−1 needs a conductor divisible by 4");
        Self::root_of_unity(conductor, (conductor / 4) as i64)
    }

    /// Builds an element from rational power-basis coordinates.
    pub fn from_coeffs(conductor: u32, coeffs: &[BigRational]) -> Result<Self> {
        let field = field(conductor);
        if coeffs.len() != field.degree() {
            return Err(Error::Parse(format!(
                "conductor {conductor} needs {} coefficients, got {}",
                field.degree(),
                coeffs.len()
            )));
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut z = Self { field, num, den };
        z.normalize();
        Ok(z)
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor()
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.den.is_one() && self.num[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Bit size of the representation; used to rank elimination pivots.
    pub fn size(&self) -> u64 {
        self.num.iter().map(|c| c.bits()).sum::<u64>() + self.den.bits()
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for c in &mut self.num {
                *c = &*c / &g;
            }
        }
    }

    /// Re-expresses the element in Q(ζ_M) for a multiple M of the conductor.
    pub fn lift(&self, conductor: u32) -> Self {
        let own = self.conductor();
        if own == conductor {
            return self.clone();
        }
        assert!(conductor.is_multiple_of(own), "cannot lift conductor {own} to {conductor}");
        let step = (conductor / own) as i64;
        let target = field(conductor);
        let mut num = vec![BigInt::zero(); target.degree()];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (dst, p) in num.iter_mut().zip(target.power(k as i64 * step)) {
                if !p.is_zero() {
                    *dst += c * p;
                }
            }
        }
        let mut z = Self {
            field: target,
            num,
            den: self.den.clone(),
        };
        z.normalize();
        z
    }

    /// Lifts both operands to the lcm of their conductors.
    pub fn unify(a: &Self, b: &Self) -> (Self, Self) {
        let n = lcm(a.conductor(), b.conductor());
        (a.lift(n), b.lift(n))
    }

    fn zip_with<F: Fn(&BigInt, &BigInt) -> BigInt>(&self, other: &Self, f: F) -> Self {
        if self.conductor() != other.conductor() {
            let (a, b) = Self::unify(self, other);
            return a.zip_with(&b, f);
        }
        let mut z = if self.den == other.den {
            Self {
                field: Arc::clone(&self.field),
                num: self.num.iter().zip(&other.num).map(|(x, y)| f(x, y)).collect(),
                den: self.den.clone(),
            }
        } else {
            let l = &self.den * &other.den;
            Self {
                field: Arc::clone(&self.field),
                num: self
                    .num
                    .iter()
                    .zip(&other.num)
                    .map(|(x, y)| f(&(x * &other.den), &(y * &self.den)))
                    .collect(),
                den: l,
            }
        };
        z.normalize();
        z
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.conductor() != other.conductor() {
            let (a, b) = Self::unify(self, other);
            return a.mul_ref(&b);
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.conductor());
        }
        if other.is_rational() {
            return self.scale_parts(&other.num[0], &other.den);
        }
        if self.is_rational() {
            return other.scale_parts(&self.num[0], &self.den);
        }
        let d = self.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod.drain(..d).collect();
        for (k, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (dst, p) in num.iter_mut().zip(self.field.power((k + d) as i64)) {
                if !p.is_zero() {
                    *dst += &c * p;
                }
            }
        }
        let mut z = Self {
            field: Arc::clone(&self.field),
            num,
            den: &self.den * &other.den,
        };
        z.normalize();
        z
    }

    fn scale_parts(&self, numer: &BigInt, denom: &BigInt) -> Self {
        let mut z = Self {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| c * numer).collect(),
            den: &self.den * denom,
        };
        z.normalize();
        z
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.scale_parts(q.numer(), q.denom())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(self.conductor(), &q.recip()));
        }
        let a: Vec<BigRational> = self.num.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let m: Vec<BigRational> = self
            .field
            .modulus()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let s = poly_inverse_mod(&a, &m);
        let mut coeffs = vec![BigRational::zero(); self.degree()];
        let den = BigRational::from_integer(self.den.clone());
        for (dst, c) in coeffs.iter_mut().zip(s) {
            *dst = c * &den;
        }
        Self::from_coeffs(self.conductor(), &coeffs)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.conductor());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Applies the Galois automorphism ζ_N ↦ ζ_N^a, gcd(a, N) = 1.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.conductor() as i64;
        assert!(a.gcd(&n) == 1, "{a} is not a unit modulo {n}");
        let mut num = vec![BigInt::zero(); self.degree()];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (dst, p) in num.iter_mut().zip(self.field.power(k as i64 * a)) {
                if !p.is_zero() {
                    *dst += c * p;
                }
            }
        }
        let mut z = Self {
            field: Arc::clone(&self.field),
            num,
            den: self.den.clone(),
        };
        z.normalize();
        z
    }

    /// Complex conjugation, ζ_N ↦ ζ_N^{−1}.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }
}

/// s with s·a ≡ 1 mod m over Q; requires gcd(a, m) = 1.
pub(crate) fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let deg = m.len() - 1;
    let mut r0 = trim(m.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut s0: Vec<BigRational> = vec![];
    let mut s1 = vec![BigRational::one()];
    while r1.len() > 1 {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    assert!(!r1.is_empty(), "element not invertible modulo Φ_N");
    let c = r1[0].recip();
    let mut out: Vec<BigRational> = s1.into_iter().map(|x| x * &c).collect();
    let (_, rem) = poly_divrem(&out, m);
    out = rem;
    out.resize(deg, BigRational::zero());
    out
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let lead_inv = b.last().unwrap().recip();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = Self::unify(self, other);
            a == b
        }
    }
}

impl Eq for CycloNum {}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => format!("{c}"),
                1 => format!("({c})*z{}", self.conductor()),
                _ => format!("({c})*z{}^{k}", self.conductor()),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                let f: fn(&CycloNum, &CycloNum) -> CycloNum = $body;
                f(self, rhs)
            }
        }
        impl $trait<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.zip_with(b, |x, y| x + y));
forward_binop!(Sub, sub, |a, b| a.zip_with(b, |x, y| x - y));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        *self = &*self - rhs;
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycloNum {
        CycloNum::root_of_unity(n, k)
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        assert_eq!(&z(4, 1) * &z(4, 1), CycloNum::from_int(4, -1));
        assert_eq!(z(4, 2), CycloNum::from_int(4, -1));
    }

    #[test]
    fn norm_of_one_minus_zeta3() {
        let one = CycloNum::one(3);
        let p = (&one - &z(3, 1)) * (&one - &z(3, 2));
        assert_eq!(p, CycloNum::from_int(3, 3));
    }

    #[test]
    fn roots_of_unity() {
        for n in 1..=12 {
            assert!(z(n, n as i64).is_one());
            assert!(z(n, 0).is_one());
        }
        assert_eq!(&z(3, 1) + &z(3, 2), CycloNum::from_int(3, -1));
    }

    #[test]
    fn inverse_and_division() {
        let a = &z(7, 1) + &CycloNum::from_ratio(7, 3, 2) - z(7, 4);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert!(a.try_div(&a).unwrap().is_one());
        assert_eq!(CycloNum::zero(5).inv(), Err(Error::DivByZero));
        assert_eq!(CycloNum::one(5).try_div(&CycloNum::zero(5)), Err(Error::DivByZero));
    }

    #[test]
    fn mixed_conductor_lifts_to_lcm() {
        let s = &z(3, 1) + &z(4, 1);
        assert_eq!(s.conductor(), 12);
        assert_eq!(s, &z(12, 4) + &z(12, 3));
        // equality across conductors compares at the lcm
        assert_eq!(z(6, 2), z(3, 1));
    }

    #[test]
    fn conjugation() {
        for n in [3u32, 5, 8, 12] {
            assert_eq!(z(n, 1).conjugate(), z(n, n as i64 - 1));
        }
        let q = CycloNum::from_ratio(9, 3, 7);
        assert_eq!(q.conjugate(), q);
        let a = &z(12, 1) + &CycloNum::from_int(12, 2);
        let b = &z(12, 5) - &z(12, 2);
        assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
    }

    #[test]
    fn negative_powers() {
        let a = &z(5, 1) + &CycloNum::one(5);
        let p = a.pow(-3).unwrap();
        assert!((&p * &a.pow(3).unwrap()).is_one());
    }
}
