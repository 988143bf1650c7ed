//! Exact arithmetic in cyclotomic fields Q(ζ_N).

mod approx;
mod field;
pub mod modp;
mod number;

pub use approx::{CertifiedApprox, Sign};
pub use field::{cyclotomic_polynomial, euler_phi, field, lcm, CyclotomicField};
pub use number::CycloNum;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl CycloNum {
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(format_rational).collect()
    }

    pub fn from_coeff_strings(conductor: u32, coeffs: &[String]) -> Result<Self> {
        let qs = coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(conductor, &qs)
    }
}

#[derive(Serialize, Deserialize)]
struct CycloNumRepr {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloNumRepr {
            conductor: self.conductor(),
            coeffs: self.coeff_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloNumRepr::deserialize(d)?;
        if repr.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        CycloNum::from_coeff_strings(repr.conductor, &repr.coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_cyclo(conductor: u32) -> impl Strategy<Value = CycloNum> {
        let deg = field(conductor).degree();
        prop::collection::vec((-20i64..20, 1i64..6), deg).prop_map(move |cs| {
            let qs: Vec<_> = cs
                .into_iter()
                .map(|(n, d)| BigRational::new(n.into(), d.into()))
                .collect();
            CycloNum::from_coeffs(conductor, &qs).unwrap()
        })
    }

    fn arb_pair() -> impl Strategy<Value = (CycloNum, CycloNum)> {
        prop::sample::select(vec![3u32, 4, 5, 8, 12]).prop_flat_map(|n| (arb_cyclo(n), arb_cyclo(n)))
    }

    #[test]
    fn json_shape() {
        let a = &CycloNum::root_of_unity(3, 1) + &CycloNum::from_ratio(3, -1, 2);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"conductor":3,"coeffs":["-1/2","1/1"]}"#);
        let b: CycloNum = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<CycloNum>(r#"{"conductor":3,"coeffs":["1"]}"#).is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact((a, _) in arb_pair()) {
            let s = serde_json::to_string(&a).unwrap();
            let b: CycloNum = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(serde_json::to_string(&b).unwrap(), s);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn difference_vanishes_iff_equal((a, b) in arb_pair()) {
            prop_assert_eq!((&a - &b).is_zero(), a == b);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn lifting_is_a_ring_embedding((a, b) in arb_pair()) {
            let m = a.conductor() * 3;
            prop_assert_eq!((&a * &b).lift(m), &a.lift(m) * &b.lift(m));
            prop_assert_eq!((&a + &b).lift(m), &a.lift(m) + &b.lift(m));
        }

        #[test]
        fn conjugation_is_an_involutive_automorphism((a, b) in arb_pair()) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
            prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
        }

        #[test]
        fn nonzero_elements_invert((a, _) in arb_pair()) {
            prop_assume!(!a.is_zero());
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }

        #[test]
        fn approximation_of_conjugate_is_conjugate_interval((a, _) in arb_pair()) {
            let x = a.approximate(64);
            let y = a.conjugate().approximate(64);
            prop_assert!(x.conjugate().overlaps(&y));
            prop_assert!(x.radius <= BigRational::new(1.into(), BigInt::from(1u8) << 64usize));
        }

        #[test]
        fn nonzero_is_eventually_separated((a, _) in arb_pair()) {
            prop_assume!(!a.is_zero());
            let mut bits = 16;
            while !a.approximate(bits).excludes_zero() {
                bits *= 2;
                prop_assert!(bits < 4096);
            }
        }

        #[test]
        fn root_of_unity_order(n in 1u32..=24, k in -30i64..30) {
            let z = CycloNum::root_of_unity(n, k);
            let g = num_integer::Integer::gcd(&(n as i64), &k);
            let order = if k == 0 { 1 } else { n as i64 / g };
            prop_assert!(z.pow(order).unwrap().is_one());
            for d in 1..order {
                if order % d == 0 {
                    prop_assert!(!z.pow(d).unwrap().is_one());
                }
            }
        }
    }
}
