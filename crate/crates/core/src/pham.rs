//! The Milnor lattice of the Fermat singularity z₁^r + … + z_{n+1}^r in its
//! character-diagonal model, and the vanishing-cycle constants of the
//! one-parameter cyclic-cover degeneration.
//!
//! All constants live in Q(ζ_r, √−1), handled at conductor lcm(r, 4) with
//! √−1 = ζ₄.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{lcm, CycloNum};
use crate::error::{Error, Result};

/// Conductor housing ζ_r and √−1.
pub fn working_conductor(r: u32) -> u32 {
    lcm(r, 4)
}

/// A character (μ₁, …, μ_{n+1}) of (Z/rZ)^{n+1}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharTuple {
    r: u32,
    entries: Vec<u32>,
}

impl CharTuple {
    pub fn new(r: u32, entries: &[i64]) -> Result<Self> {
        if r < 2 {
            return Err(Error::BadParameters(format!("r = {r} must be at least 2")));
        }
        if entries.is_empty() {
            return Err(Error::BadParameters("empty character".into()));
        }
        Ok(Self {
            r,
            entries: entries.iter().map(|&a| a.rem_euclid(r as i64) as u32).collect(),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// The n of the singularity, one less than the number of entries.
    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_supported(&self) -> bool {
        self.entries.iter().all(|&a| a != 0)
    }

    pub fn sum(&self) -> u32 {
        (self.entries.iter().map(|&a| a as u64).sum::<u64>() % self.r as u64) as u32
    }

    pub fn negate(&self) -> Self {
        Self {
            r: self.r,
            entries: self.entries.iter().map(|&a| (self.r - a) % self.r).collect(),
        }
    }

    fn require_support(&self) -> Result<()> {
        if self.is_supported() {
            Ok(())
        } else {
            Err(Error::ZeroCharacter)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhamLattice {
    pub n: usize,
    pub r: u32,
    pub support: Vec<CharTuple>,
}

/// Picard–Lefschetz constants of one vanishing cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLDatum {
    pub c: CycloNum,
    pub self_pairing: CycloNum,
    pub eigenvalue: CycloNum,
}

impl PLDatum {
    /// self_pairing · c = eigenvalue − 1.
    pub fn is_consistent(&self) -> bool {
        &self.self_pairing * &self.c == &self.eigenvalue - &CycloNum::one(self.eigenvalue.conductor())
    }

    pub fn is_transvection(&self) -> bool {
        self.self_pairing.is_zero()
    }
}

/// All characters with every entry nonzero, lexicographically.
pub fn character_support(n: usize, r: u32) -> Result<PhamLattice> {
    if r < 2 {
        return Err(Error::BadParameters(format!("r = {r} must be at least 2")));
    }
    let len = n + 1;
    let mut support = Vec::new();
    let mut cur = vec![1i64; len];
    loop {
        support.push(CharTuple::new(r, &cur)?);
        let mut k = len;
        loop {
            if k == 0 {
                return Ok(PhamLattice { n, r, support });
            }
            k -= 1;
            if cur[k] < r as i64 - 1 {
                cur[k] += 1;
                break;
            }
            cur[k] = 1;
        }
    }
}

/// ∏ (1 − ζ_r^{−a_j}) at the working conductor.
fn conjugate_factor_product(r: u32, exps: impl Iterator<Item = u32>) -> CycloNum {
    let n = working_conductor(r);
    let step = (n / r) as i64;
    let one = CycloNum::one(n);
    exps.fold(one.clone(), |acc, a| {
        &acc * &(&one - &CycloNum::root_of_unity(n, -(a as i64) * step))
    })
}

fn zeta_r(r: u32, k: i64) -> CycloNum {
    let n = working_conductor(r);
    CycloNum::root_of_unity(n, k * (n / r) as i64)
}

/// −(−1)^{n(n+1)/2} / √−1^n.
fn pl_prefactor(n: usize, conductor: u32) -> CycloNum {
    let sign = if (n * (n + 1) / 2).is_multiple_of(2) { -1 } else { 1 };
    let inv_i_pow = CycloNum::root_of_unity(conductor, -((n % 4) as i64) * (conductor / 4) as i64);
    &CycloNum::from_int(conductor, sign) * &inv_i_pow
}

/// Q(ε_μ, e_{−μ}) = r^{−(n+1)} ∏ (1 − ζ_r^{−μ_j}).
pub fn intersection_number(mu: &CharTuple) -> Result<CycloNum> {
    mu.require_support()?;
    let r = mu.r;
    let prod = conjugate_factor_product(r, mu.entries.iter().copied());
    let scale = num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(r).pow(mu.entries.len() as u32));
    Ok(prod.scale(&scale))
}

pub fn pl_coefficient(mu: &CharTuple) -> Result<PLDatum> {
    mu.require_support()?;
    let (r, n) = (mu.r, mu.n());
    let conductor = working_conductor(r);
    let rpow = CycloNum::from_bigint(conductor, num_bigint::BigInt::from(r).pow(n as u32 + 1));
    let denom = conjugate_factor_product(r, mu.entries.iter().copied());
    let c = (&pl_prefactor(n, conductor) * &rpow).try_div(&denom)?;
    let eigenvalue = zeta_r(r, mu.sum() as i64);
    let self_pairing = (&eigenvalue - &CycloNum::one(conductor)).try_div(&c)?;
    Ok(PLDatum {
        c,
        self_pairing,
        eigenvalue,
    })
}

/// Eigenvalue ζ_r^{Σμ_j} of the geometric monodromy on each character line.
pub fn monodromy_eigenvalues(n: usize, r: u32) -> Result<BTreeMap<CharTuple, CycloNum>> {
    Ok(character_support(n, r)?
        .support
        .into_iter()
        .map(|mu| {
            let ev = zeta_r(r, mu.sum() as i64);
            (mu, ev)
        })
        .collect())
}

pub fn check_cyclic_params(m: usize, r: u32, i: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::BadParameters(format!("r = {r} must be at least 2")));
    }
    if m == 0 || !m.is_multiple_of(r as usize) {
        return Err(Error::BadParameters(format!("r = {r} does not divide m = {m}")));
    }
    if i == 0 || i >= r {
        return Err(Error::BadParameters(format!("i = {i} outside 1..={}", r - 1)));
    }
    Ok(())
}

/// Constants of the vanishing cycle e_(i) in the i-th eigenspace of the
/// cyclic cover degeneration.
pub fn cyclic_pl_data(n: usize, m: usize, r: u32, i: u32) -> Result<PLDatum> {
    check_cyclic_params(m, r, i)?;
    let conductor = working_conductor(r);
    let rpow = CycloNum::from_bigint(conductor, num_bigint::BigInt::from(r).pow((n + m) as u32));
    let denom = conjugate_factor_product(r, std::iter::repeat_n(i, n + 1));
    let c = (&pl_prefactor(n, conductor) * &rpow).try_div(&denom)?;
    let eigenvalue = zeta_r(r, ((n as i64 + 1) * i as i64) % r as i64);
    let self_pairing = (&eigenvalue - &CycloNum::one(conductor)).try_div(&c)?;
    Ok(PLDatum {
        c,
        self_pairing,
        eigenvalue,
    })
}

/// Number of Kummer index tuples (a_1, …, a_{m−1}) with a_1, …, a_{n+1}
/// nonzero.
pub fn kummer_support_size(n: usize, m: usize, r: u32) -> u128 {
    if m < n + 2 {
        return 0;
    }
    (r as u128 - 1).pow(n as u32 + 1) * (r as u128).pow((m - n - 2) as u32)
}

/// Count of vanishing-cycle classes that survive passage to the N₁-quotient in
/// eigenspace i: tuples need a_1 = … = a_{n+1} = i, and the upper indices
/// (a_{n+2}, …, a_{m−1}) are counted up to the translation action of N₁.
pub fn n1_projection_support(n: usize, m: usize, r: u32, i: u32) -> Result<u64> {
    if i == 0 {
        return Ok(0);
    }
    check_cyclic_params(m, r, i)?;
    if m < n + 2 {
        return Err(Error::BadParameters(format!("m = {m} too small for n = {n}")));
    }
    let upper = m - n - 2;
    // N₁ is generated by e_0 − e_j; b ↦ (b_k − b_0) on the upper indices.
    let gens: Vec<Vec<i64>> = (1..m)
        .map(|j| (n + 2..m).map(|k| if k == j { -2 } else { -1 }).collect())
        .collect();
    let orbit = translation_subgroup_order(&gens, upper, r as i64);
    let total = (r as u128).pow(upper as u32);
    Ok((total / orbit) as u64)
}

/// Order of the subgroup of (Z/r)^k generated by `gens`, via a Smith-style
/// diagonalisation over Z.
fn translation_subgroup_order(gens: &[Vec<i64>], k: usize, r: i64) -> u128 {
    let mut a: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| g.iter().map(|x| x.rem_euclid(r)).collect())
        .collect();
    for row in 0..k {
        a.push((0..k).map(|c| if c == row { r } else { 0 }).collect());
    }
    let rows = a.len();
    let mut order: u128 = 1;
    let mut top = 0;
    for col in 0..k {
        loop {
            let pivot = (top..rows).filter(|&i| a[i][col] != 0).min_by_key(|&i| a[i][col].abs());
            let Some(p) = pivot else { break };
            a.swap(top, p);
            let mut done = true;
            for i in top + 1..rows {
                if a[i][col] != 0 {
                    let q = a[i][col].div_euclid(a[top][col]);
                    for c in col..k {
                        a[i][c] -= q * a[top][c];
                    }
                    if a[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        let d = a[top][col].abs();
        order *= (r / num_integer::gcd(d, r)) as u128;
        top += 1;
    }
    order
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhamEntry {
    pub mu: Vec<u32>,
    #[serde(flatten)]
    pub datum: PLDatum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhamReport {
    pub n: usize,
    pub r: u32,
    pub support_size: usize,
    pub entries: Vec<PhamEntry>,
}

pub fn pham_report(n: usize, r: u32) -> Result<PhamReport> {
    let lattice = character_support(n, r)?;
    let entries = lattice
        .support
        .iter()
        .map(|mu| {
            Ok(PhamEntry {
                mu: mu.entries.clone(),
                datum: pl_coefficient(mu)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhamReport {
        n,
        r,
        support_size: entries.len(),
        entries,
    })
}
