use super::matrix::{FieldMatrix, FieldVector};
use crate::cyclotomic::CycloNum;

/// Incrementally maintained reduced row echelon basis of a span.
///
/// Rows are kept fully reduced (pivot entry 1, zero in every other row's
/// pivot column), so after sorting by pivot this is the canonical RREF.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    conductor: u32,
    rows: Vec<Vec<CycloNum>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(width: usize, conductor: u32) -> Self {
        Self {
            width,
            conductor,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[CycloNum]) -> Vec<CycloNum> {
        let mut v: Vec<CycloNum> = v.iter().map(|e| e.lift(self.conductor)).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (dst, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *dst = &*dst - &(&c * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycloNum]) -> bool {
        if self.is_full() {
            return true;
        }
        self.reduce(v).iter().all(CycloNum::is_zero)
    }

    /// Adds `v` to the span; returns its new pivot column if it was independent.
    pub fn insert(&mut self, v: &[CycloNum]) -> Option<usize> {
        assert_eq!(v.len(), self.width, "echelon width mismatch");
        if self.is_full() {
            return None;
        }
        let mut r = self.reduce(v);
        let p = r.iter().position(|e| !e.is_zero())?;
        let inv = r[p].inv().expect("pivot is nonzero");
        for e in r.iter_mut() {
            if !e.is_zero() {
                *e = &*e * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (dst, x) in row.iter_mut().zip(&r) {
                if !x.is_zero() {
                    *dst = &*dst - &(&c * x);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        Some(p)
    }

    pub fn basis(&self) -> Vec<FieldVector> {
        self.rows
            .iter()
            .map(|r| FieldVector::with_conductor(self.conductor, r.clone()))
            .collect()
    }

    /// Basis of the solution space {x : row·x = 0 for every row}.
    pub fn null_space(&self) -> Vec<FieldVector> {
        let n = self.conductor;
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.width];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        for f in (0..self.width).filter(|&f| !is_pivot[f]) {
            let mut x = vec![CycloNum::zero(n); self.width];
            x[f] = CycloNum::one(n);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[f].is_zero() {
                    x[p] = -&row[f];
                }
            }
            out.push(FieldVector::with_conductor(n, x));
        }
        out
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace {
            ambient: self.width,
            conductor: self.conductor,
            echelon: self,
        }
    }
}

/// A subspace of K^d held by its canonical reduced echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    conductor: u32,
    echelon: Echelon,
}

impl Subspace {
    pub fn zero(ambient: usize, conductor: u32) -> Self {
        Echelon::new(ambient, conductor).into_subspace()
    }

    pub fn full(ambient: usize, conductor: u32) -> Self {
        let vs: Vec<_> = (0..ambient).map(|i| FieldVector::unit(ambient, i, conductor)).collect();
        Self::span(ambient, conductor, &vs)
    }

    pub fn span(ambient: usize, conductor: u32, vectors: &[FieldVector]) -> Self {
        let mut e = Echelon::new(ambient, conductor);
        for v in vectors {
            e.insert(&v.lift(conductor).into_entries());
        }
        e.into_subspace()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> Vec<FieldVector> {
        self.echelon.basis()
    }

    pub fn pivots(&self) -> &[usize] {
        self.echelon.pivots()
    }

    pub fn contains(&self, v: &FieldVector) -> bool {
        self.echelon.contains(v.entries())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &FieldVector) -> Option<Vec<CycloNum>> {
        let v = v.lift(self.conductor);
        let coords: Vec<CycloNum> = self.pivots().iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.into_entries();
        for (c, b) in coords.iter().zip(self.basis()) {
            for (dst, x) in residual.iter_mut().zip(b.entries()) {
                if !x.is_zero() {
                    *dst = &*dst - &(c * x);
                }
            }
        }
        residual.iter().all(CycloNum::is_zero).then_some(coords)
    }

    /// Basis vectors as the columns of an ambient × dim matrix.
    pub fn basis_matrix(&self) -> FieldMatrix {
        FieldMatrix::from_columns(&self.basis())
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && self.pivots() == other.pivots()
            && self
                .basis()
                .iter()
                .zip(other.basis())
                .all(|(a, b)| *a == b.lift(a.conductor()))
    }
}

/// Result of exact Gauss–Jordan elimination.
#[derive(Clone, Debug)]
pub struct RowReduction {
    pub rref: FieldMatrix,
    pub pivots: Vec<usize>,
    pub kernel: Subspace,
    pub rank: usize,
}

/// Reduced row echelon form, kernel, and rank. Among rows eligible to pivot
/// in a column the entry with the smallest representation is chosen.
pub fn rref_kernel_rank(m: &FieldMatrix) -> RowReduction {
    let (rows, cols, n) = (m.rows(), m.cols(), m.conductor());
    let mut a: Vec<Vec<CycloNum>> = (0..rows).map(|i| m.row(i).into_entries()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].size());
        let Some(best) = best else { continue };
        a.swap(r, best);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for e in a[r].iter_mut() {
            if !e.is_zero() {
                *e = &*e * &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (dst, x) in row.iter_mut().zip(&pivot_row) {
                if !x.is_zero() {
                    *dst = &*dst - &(&f * x);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rref = FieldMatrix::from_fn(rows, cols, n, |i, j| a[i][j].clone());
    let mut e = Echelon::new(cols, n);
    for row in a.iter().take(r) {
        e.insert(row);
    }
    let kernel = Subspace::span(cols, n, &e.null_space());
    RowReduction {
        rref,
        pivots,
        kernel,
        rank: r,
    }
}

pub fn rank(m: &FieldMatrix) -> usize {
    let mut e = Echelon::new(m.cols(), m.conductor());
    for i in 0..m.rows() {
        e.insert(m.row(i).entries());
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

pub fn kernel(m: &FieldMatrix) -> Subspace {
    let mut e = Echelon::new(m.cols(), m.conductor());
    for i in 0..m.rows() {
        e.insert(m.row(i).entries());
    }
    Subspace::span(m.cols(), m.conductor(), &e.null_space())
}

/// Column space of `m`.
pub fn image(m: &FieldMatrix) -> Subspace {
    let cols: Vec<_> = (0..m.cols()).map(|j| m.column(j)).collect();
    Subspace::span(m.rows(), m.conductor(), &cols)
}

pub fn inverse(m: &FieldMatrix) -> Option<FieldMatrix> {
    if !m.is_square() {
        return None;
    }
    let d = m.rows();
    let n = m.conductor();
    let aug = FieldMatrix::from_fn(d, 2 * d, n, |i, j| {
        if j < d {
            m.get(i, j).clone()
        } else if j - d == i {
            CycloNum::one(n)
        } else {
            CycloNum::zero(n)
        }
    });
    let red = rref_kernel_rank(&aug);
    if red.pivots.len() < d || red.pivots[d - 1] >= d {
        return None;
    }
    Some(FieldMatrix::from_fn(d, d, n, |i, j| red.rref.get(i, j + d).clone()))
}

/// Determinant by Gaussian elimination over the field.
pub fn determinant(m: &FieldMatrix) -> CycloNum {
    assert!(m.is_square());
    let d = m.rows();
    let n = m.conductor();
    let mut a: Vec<Vec<CycloNum>> = (0..d).map(|i| m.row(i).into_entries()).collect();
    let mut det = CycloNum::one(n);
    for c in 0..d {
        let best = (c..d).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].size());
        let Some(best) = best else {
            return CycloNum::zero(n);
        };
        if best != c {
            a.swap(c, best);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inv().expect("nonzero pivot");
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for (dst, x) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !x.is_zero() {
                    *dst = &*dst - &(&f * x);
                }
            }
        }
    }
    det
}

/// Left inverse L (L·B = I) of a matrix with independent columns.
pub fn left_inverse(b: &FieldMatrix) -> Option<FieldMatrix> {
    let (m, k, n) = (b.rows(), b.cols(), b.conductor());
    let aug = FieldMatrix::from_fn(m, k + m, n, |i, j| {
        if j < k {
            b.get(i, j).clone()
        } else if j - k == i {
            CycloNum::one(n)
        } else {
            CycloNum::zero(n)
        }
    });
    let red = rref_kernel_rank(&aug);
    if red.pivots.iter().take_while(|&&p| p < k).count() < k {
        return None;
    }
    Some(FieldMatrix::from_fn(k, m, n, |i, j| red.rref.get(i, j + k).clone()))
}
