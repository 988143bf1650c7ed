use std::fmt;
use std::ops::{Index, Mul};

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::{lcm, CycloNum};
use crate::error::{Error, Result};

/// Dense vector over a cyclotomic field; every entry shares one conductor.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldVector {
    conductor: u32,
    entries: Vec<CycloNum>,
}

impl FieldVector {
    pub fn new(entries: Vec<CycloNum>) -> Self {
        assert!(!entries.is_empty(), "use FieldVector::zeros for a typed empty vector");
        let n = entries.iter().fold(1, |acc, e| lcm(acc, e.conductor()));
        Self::with_conductor(n, entries)
    }

    pub fn with_conductor(conductor: u32, entries: Vec<CycloNum>) -> Self {
        let entries = entries.into_iter().map(|e| e.lift(conductor)).collect();
        Self { conductor, entries }
    }

    pub fn zeros(len: usize, conductor: u32) -> Self {
        Self {
            conductor,
            entries: vec![CycloNum::zero(conductor); len],
        }
    }

    pub fn unit(len: usize, index: usize, conductor: u32) -> Self {
        let mut v = Self::zeros(len, conductor);
        v.entries[index] = CycloNum::one(conductor);
        v
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CycloNum] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<CycloNum> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycloNum::is_zero)
    }

    pub fn conjugate(&self) -> Self {
        Self {
            conductor: self.conductor,
            entries: self.entries.iter().map(CycloNum::conjugate).collect(),
        }
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        Self {
            conductor: self.conductor,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            conductor: self.conductor,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            conductor: self.conductor,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    /// Bilinear dot product Σ a_k b_k (no conjugation).
    pub fn dot(&self, other: &Self) -> CycloNum {
        let mut acc = CycloNum::zero(self.conductor);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    pub fn lift(&self, conductor: u32) -> Self {
        Self::with_conductor(conductor, self.entries.clone())
    }
}

impl Index<usize> for FieldVector {
    type Output = CycloNum;
    fn index(&self, i: usize) -> &CycloNum {
        &self.entries[i]
    }
}

impl fmt::Debug for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

/// Dense row-major matrix over Q(ζ_N).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    conductor: u32,
    entries: Vec<CycloNum>,
}

/// Structural hash key of a matrix at a fixed conductor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixKey(Vec<BigInt>);

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize, conductor: u32) -> Self {
        Self {
            rows,
            cols,
            conductor,
            entries: vec![CycloNum::zero(conductor); rows * cols],
        }
    }

    pub fn identity(dim: usize, conductor: u32) -> Self {
        let mut m = Self::zeros(dim, dim, conductor);
        for i in 0..dim {
            m.entries[i * dim + i] = CycloNum::one(conductor);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, conductor: u32, mut f: impl FnMut(usize, usize) -> CycloNum) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j).lift(conductor));
            }
        }
        Self {
            rows,
            cols,
            conductor,
            entries,
        }
    }

    /// Builds a matrix from rows, lifting every entry to the lcm conductor.
    pub fn from_rows(rows: Vec<Vec<CycloNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.iter().flatten().fold(1, |acc, e| lcm(acc, e.conductor()));
        let entries = rows.into_iter().flatten().map(|e| e.lift(n)).collect();
        Ok(Self {
            rows: r,
            cols: c,
            conductor: n,
            entries,
        })
    }

    pub fn from_int_rows(conductor: u32, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| CycloNum::from_int(conductor, x)).collect())
            .collect();
        Self::from_rows(rows).unwrap().lift(conductor)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[FieldVector]) -> Self {
        let rows = cols[0].len();
        let n = cols.iter().fold(1, |acc, v| lcm(acc, v.conductor()));
        Self::from_fn(rows, cols.len(), n, |i, j| cols[j][i].clone())
    }

    pub fn diagonal(entries: &[CycloNum]) -> Self {
        let n = entries.iter().fold(1, |acc, e| lcm(acc, e.conductor()));
        let d = entries.len();
        Self::from_fn(
            d,
            d,
            n,
            |i, j| {
                if i == j {
                    entries[i].clone()
                } else {
                    CycloNum::zero(n)
                }
            },
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: CycloNum) {
        self.entries[i * self.cols + j] = value.lift(self.conductor);
    }

    pub fn entries(&self) -> &[CycloNum] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> FieldVector {
        FieldVector::with_conductor(
            self.conductor,
            self.entries[i * self.cols..(i + 1) * self.cols].to_vec(),
        )
    }

    pub fn column(&self, j: usize) -> FieldVector {
        FieldVector::with_conductor(self.conductor, (0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn lift(&self, conductor: u32) -> Self {
        if conductor == self.conductor {
            return self.clone();
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            conductor,
            entries: self.entries.iter().map(|e| e.lift(conductor)).collect(),
        }
    }

    pub fn key(&self) -> MatrixKey {
        let mut out = Vec::with_capacity(self.entries.len() * 3);
        for e in &self.entries {
            out.push(e.denominator().clone());
            out.extend(e.numerators().iter().cloned());
        }
        MatrixKey(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.conductor, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose M^†.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.conductor, |i, j| self.get(j, i).conjugate())
    }

    pub fn conjugate(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            entries: self.entries.iter().map(CycloNum::conjugate).collect(),
        }
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        let n = lcm(self.conductor, c.conductor());
        let c = c.lift(n);
        let m = self.lift(n);
        Self {
            entries: m.entries.iter().map(|e| e * &c).collect(),
            ..m
        }
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        let n = lcm(self.conductor, other.conductor);
        (self.lift(n), other.lift(n))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&CycloNum, &CycloNum) -> CycloNum) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = self.unify(other);
        Ok(Self {
            entries: a.entries.iter().zip(&b.entries).map(|(x, y)| f(x, y)).collect(),
            ..a
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.conductor != other.conductor {
            let (a, b) = self.unify(other);
            return a.checked_mul(&b);
        }
        let n = self.conductor;
        let mut out = Self::zeros(self.rows, other.cols, n);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &FieldVector) -> FieldVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let n = lcm(self.conductor, v.conductor());
        let v = v.lift(n);
        let m = self.lift(n);
        let entries = (0..self.rows)
            .map(|i| {
                let mut acc = CycloNum::zero(n);
                for j in 0..self.cols {
                    let (a, b) = (m.get(i, j), &v[j]);
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect();
        FieldVector::with_conductor(n, entries)
    }

    pub fn trace(&self) -> CycloNum {
        let mut acc = CycloNum::zero(self.conductor);
        for i in 0..self.rows.min(self.cols) {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycloNum::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// M − I.
    pub fn minus_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let e = m.get(i, i) - &CycloNum::one(self.conductor);
            m.set(i, i, e);
        }
        m
    }

    /// Row-major flattening; used as coordinates in the d²-dimensional matrix space.
    pub fn to_vector(&self) -> FieldVector {
        FieldVector::with_conductor(self.conductor, self.entries.clone())
    }

    pub fn from_vector(rows: usize, cols: usize, v: &FieldVector) -> Self {
        assert_eq!(rows * cols, v.len());
        Self {
            rows,
            cols,
            conductor: v.conductor(),
            entries: v.entries().to_vec(),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(self.rows, self.conductor);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Mul<&FieldMatrix> for &FieldMatrix {
    type Output = FieldMatrix;
    fn mul(self, rhs: &FieldMatrix) -> FieldMatrix {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FieldMatrix {}x{} over Q(z{}) [",
            self.rows, self.cols, self.conductor
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    conductor: u32,
    entries: Vec<Vec<String>>,
}

impl Serialize for FieldMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            entries: self.entries.iter().map(CycloNum::coeff_strings).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        if r.conductor == 0 || r.entries.len() != r.rows * r.cols {
            return Err(D::Error::custom("matrix shape does not match its entries"));
        }
        let entries = r
            .entries
            .iter()
            .map(|c| CycloNum::from_coeff_strings(r.conductor, c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(FieldMatrix {
            rows: r.rows,
            cols: r.cols,
            conductor: r.conductor,
            entries,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    conductor: u32,
    entries: Vec<Vec<String>>,
}

impl Serialize for FieldVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VectorRepr {
            conductor: self.conductor,
            entries: self.entries.iter().map(CycloNum::coeff_strings).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = VectorRepr::deserialize(d)?;
        if r.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let entries = r
            .entries
            .iter()
            .map(|c| CycloNum::from_coeff_strings(r.conductor, c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(FieldVector {
            conductor: r.conductor,
            entries,
        })
    }
}
