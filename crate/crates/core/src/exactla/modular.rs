//! Square matrices over F_p, images of exact matrices under a
//! [`PrimeEmbedding`].

use num_bigint::BigUint;

use super::matrix::FieldMatrix;
use crate::cyclotomic::modp::{inv_mod, mul_mod, PrimeEmbedding};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModpMatrix {
    dim: usize,
    p: u64,
    data: Vec<u64>,
}

impl ModpMatrix {
    pub fn identity(dim: usize, p: u64) -> Self {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1;
        }
        Self { dim, p, data }
    }

    /// `None` when some entry is not p-integral.
    pub fn reduce(m: &FieldMatrix, e: &PrimeEmbedding) -> Option<Self> {
        assert!(m.is_square());
        let m = m.lift(e.conductor);
        let data = m.entries().iter().map(|c| e.reduce(c)).collect::<Option<Vec<_>>>()?;
        Some(Self {
            dim: m.rows(),
            p: e.p,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.dim, self.p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (d, p) = (self.dim, self.p);
        let mut data = vec![0u64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let b = other.data[k * d + j];
                    if b != 0 {
                        let t = &mut data[i * d + j];
                        *t = (*t + mul_mod(a, b, p)) % p;
                    }
                }
            }
        }
        Self { dim: d, p, data }
    }

    pub fn minus_identity(&self) -> Self {
        let mut out = self.clone();
        let d = self.dim;
        for i in 0..d {
            out.data[i * d + i] = (out.data[i * d + i] + self.p - 1) % self.p;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn rank(&self) -> usize {
        let (d, p) = (self.dim, self.p);
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..d {
            let Some(piv) = (rank..d).find(|&i| a[i * d + col] != 0) else {
                continue;
            };
            for j in 0..d {
                a.swap(rank * d + j, piv * d + j);
            }
            let s = inv_mod(a[rank * d + col], p).unwrap();
            for i in rank + 1..d {
                let f = mul_mod(a[i * d + col], s, p);
                if f != 0 {
                    for j in col..d {
                        a[i * d + j] = (a[i * d + j] + p - mul_mod(f, a[rank * d + j], p)) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Monic minimal polynomial over F_p, lowest degree first.
    pub fn minimal_polynomial(&self) -> Vec<u64> {
        let p = self.p;
        let width = self.dim * self.dim;
        // rows: reduced vectors with their pivot, and the combination of
        // powers that produced them
        let mut rows: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
        let mut power = Self::identity(self.dim, p);
        for k in 0..=width {
            let mut v = power.data.clone();
            let mut combo = vec![0u64; k + 1];
            combo[k] = 1;
            for (piv, r, c) in &rows {
                let f = v[*piv];
                if f != 0 {
                    for j in 0..width {
                        v[j] = (v[j] + p - mul_mod(f, r[j], p)) % p;
                    }
                    for (j, cj) in c.iter().enumerate() {
                        combo[j] = (combo[j] + p - mul_mod(f, *cj, p)) % p;
                    }
                }
            }
            match v.iter().position(|&x| x != 0) {
                None => return combo,
                Some(piv) => {
                    let s = inv_mod(v[piv], p).unwrap();
                    v.iter_mut().for_each(|x| *x = mul_mod(*x, s, p));
                    combo.iter_mut().for_each(|x| *x = mul_mod(*x, s, p));
                    rows.push((piv, v, combo));
                }
            }
            power = power.mul(self);
        }
        unreachable!("Cayley–Hamilton bounds the degree")
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let deg = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    for k in (deg..prod.len()).rev() {
        let c = prod[k];
        if c != 0 {
            for j in 0..deg {
                let t = &mut prod[k - deg + j];
                *t = (*t + p - mul_mod(c, f[j], p)) % p;
            }
            prod[k] = 0;
        }
    }
    prod.truncate(deg);
    prod
}

/// Whether the monic polynomial `f` divides X^K − 1 over F_p.
pub fn divides_x_pow_minus_one(f: &[u64], k: &BigUint, p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return true;
    }
    let mut x = vec![0u64; deg];
    let mut acc = vec![0u64; deg];
    acc[0] = 1;
    if deg == 1 {
        x[0] = (p - f[0]) % p;
    } else {
        x[1] = 1;
    }
    for bit in (0..k.bits()).rev() {
        acc = poly_mulmod(&acc, &acc, f, p);
        if k.bit(bit) {
            acc = poly_mulmod(&acc, &x, f, p);
        }
    }
    acc[0] = (acc[0] + p - 1) % p;
    acc.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CycloNum;

    #[test]
    fn reduction_respects_products() {
        let e = PrimeEmbedding::nth(12, 0);
        let a = FieldMatrix::from_rows(vec![
            vec![CycloNum::root_of_unity(12, 1), CycloNum::from_int(12, 2)],
            vec![CycloNum::from_ratio(12, 1, 3), CycloNum::root_of_unity(12, 5)],
        ])
        .unwrap();
        let b = a.adjoint();
        let lhs = ModpMatrix::reduce(&(&a * &b), &e).unwrap();
        let rhs = ModpMatrix::reduce(&a, &e)
            .unwrap()
            .mul(&ModpMatrix::reduce(&b, &e).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn torsion_detection() {
        let e = PrimeEmbedding::nth(3, 0);
        let rot = FieldMatrix::from_int_rows(3, &[&[0, -1], &[1, -1]]);
        let f = ModpMatrix::reduce(&rot, &e).unwrap().minimal_polynomial();
        assert_eq!(f, vec![1, 1, 1]);
        assert!(divides_x_pow_minus_one(&f, &BigUint::from(6u32), e.p));
        assert!(!divides_x_pow_minus_one(&f, &BigUint::from(4u32), e.p));
        let j = FieldMatrix::from_int_rows(3, &[&[1, 1], &[0, 1]]);
        let fj = ModpMatrix::reduce(&j, &e).unwrap().minimal_polynomial();
        assert!(!divides_x_pow_minus_one(&fj, &BigUint::from(720720u32), e.p));
        let jm = ModpMatrix::reduce(&j, &e).unwrap().minus_identity();
        assert_eq!(jm.rank(), 1);
        assert!(jm.mul(&jm).is_zero());
    }
}
