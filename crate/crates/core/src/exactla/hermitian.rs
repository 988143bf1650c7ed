use serde::{Deserialize, Serialize};

use super::echelon::{kernel, rank, Echelon, Subspace};
use super::matrix::{FieldMatrix, FieldVector};
use crate::cyclotomic::{lcm, CycloNum, Sign};
use crate::error::{Error, Result};

/// A Hermitian form H(x, y) = y^† G x: linear in the first argument,
/// conjugate-linear in the second. Invariance under g reads g^† G g = G.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianForm {
    gram: FieldMatrix,
}

impl HermitianForm {
    pub fn new(gram: FieldMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch("Gram matrix must be square".into()));
        }
        if gram.adjoint() != gram {
            return Err(Error::InvariantViolated(
                "Gram matrix is not equal to its conjugate transpose".into(),
            ));
        }
        Ok(Self { gram })
    }

    pub fn gram(&self) -> &FieldMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn conductor(&self) -> u32 {
        self.gram.conductor()
    }

    /// H(x, y) = y^† G x.
    pub fn pair(&self, x: &FieldVector, y: &FieldVector) -> CycloNum {
        self.gram.mul_vec(x).dot(&y.conjugate())
    }

    /// The linear functional x ↦ H(x, y) as a row vector.
    pub fn functional(&self, y: &FieldVector) -> FieldVector {
        let yc = y.conjugate();
        let d = self.dim();
        let n = lcm(self.conductor(), y.conductor());
        let g = self.gram.lift(n);
        FieldVector::with_conductor(
            n,
            (0..d)
                .map(|j| {
                    let mut acc = CycloNum::zero(n);
                    for i in 0..d {
                        let (a, b) = (&yc[i], g.get(i, j));
                        if !a.is_zero() && !b.is_zero() {
                            acc += &(a * b);
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &CycloNum) -> Result<Self> {
        if !c.is_real() {
            return Err(Error::InvariantViolated("Hermitian forms scale by reals only".into()));
        }
        Ok(Self {
            gram: self.gram.scale(c),
        })
    }

    pub fn is_invariant_under(&self, g: &FieldMatrix) -> bool {
        &(&g.adjoint() * &self.gram) * g == self.gram
    }

    pub fn rank(&self) -> usize {
        rank(&self.gram)
    }

    /// Vectors x with H(x, y) = 0 for every y.
    pub fn radical(&self) -> Subspace {
        kernel(&self.gram)
    }

    /// {x : H(x, u) = 0 for all u ∈ U}.
    pub fn orthogonal_complement(&self, u: &Subspace) -> Subspace {
        let n = self.conductor();
        let rows: Vec<Vec<CycloNum>> = u
            .basis()
            .iter()
            .map(|b| self.functional(b).lift(n).into_entries())
            .collect();
        if rows.is_empty() {
            return Subspace::full(self.dim(), n);
        }
        kernel(&FieldMatrix::from_rows(rows).unwrap().lift(n))
    }

    /// The form pulled back along the columns of `basis`: B^† G B.
    pub fn restrict(&self, basis: &FieldMatrix) -> Result<Self> {
        Self::new(&(&basis.adjoint() * &self.gram) * basis)
    }
}

/// A K-basis, made of Hermitian matrices, of the solutions of g^† X g = X
/// for all generators. Over K ⊋ K⁺ this is also a K⁺-basis of the Hermitian
/// solutions.
pub fn invariant_hermitian_forms(generators: &[FieldMatrix]) -> Result<Vec<HermitianForm>> {
    let first = generators
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no generators".into()))?;
    let d = first.rows();
    if generators.iter().any(|g| g.rows() != d || g.cols() != d) {
        return Err(Error::DimensionMismatch(
            "generators must be square of equal size".into(),
        ));
    }
    // √−1 is needed to split the solution space into Hermitian parts
    let n = generators.iter().fold(4, |acc, g| lcm(acc, g.conductor()));
    let gens: Vec<FieldMatrix> = generators.iter().map(|g| g.lift(n)).collect();
    let width = d * d;
    let var = |c: usize, e: usize| c * d + e;
    let mut system = Echelon::new(width, n);
    for g in &gens {
        let cols: Vec<Vec<(usize, CycloNum)>> = (0..d)
            .map(|a| {
                (0..d)
                    .filter(|&c| !g.get(c, a).is_zero())
                    .map(|c| (c, g.get(c, a).clone()))
                    .collect()
            })
            .collect();
        let trivial: Vec<bool> = (0..d)
            .map(|a| cols[a].len() == 1 && cols[a][0].0 == a && cols[a][0].1.is_one())
            .collect();
        for a in 0..d {
            for b in 0..d {
                if trivial[a] && trivial[b] {
                    continue;
                }
                // (g^† X g)_{ab} − X_{ab} = Σ conj(g_ca) X_ce g_eb − X_ab
                let mut row = vec![CycloNum::zero(n); width];
                for (c, gca) in &cols[a] {
                    let gca = gca.conjugate();
                    for (e, geb) in &cols[b] {
                        let idx = var(*c, *e);
                        row[idx] = &row[idx] + &(&gca * geb);
                    }
                }
                let idx = var(a, b);
                row[idx] = &row[idx] - &CycloNum::one(n);
                if row.iter().any(|x| !x.is_zero()) {
                    system.insert(&row);
                }
            }
        }
    }
    let solutions = system.null_space();
    if solutions.is_empty() {
        return Err(Error::EmptySolution);
    }
    let i = CycloNum::imaginary_unit(n);
    let mut chosen = Echelon::new(width, n);
    let mut forms = Vec::new();
    for s in &solutions {
        let x = FieldMatrix::from_vector(d, d, s);
        let iy = x.scale(&i);
        for cand in [x.add(&x.adjoint())?, iy.add(&iy.adjoint())?] {
            if chosen.insert(cand.to_vector().entries()).is_some() {
                forms.push(HermitianForm::new(cand)?);
            }
        }
        if forms.len() == solutions.len() {
            break;
        }
    }
    Ok(forms)
}

/// Inertia of a non-degenerate Hermitian form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    /// Number of positive pivots.
    pub positive: usize,
    /// Number of negative pivots.
    pub negative: usize,
    /// Sign of the first pivot met during elimination.
    pub first_pivot: Sign,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.positive + self.negative
    }

    /// (max, min) of the two counts.
    pub fn unordered(&self) -> (usize, usize) {
        let (p, q) = (self.positive, self.negative);
        (p.max(q), p.min(q))
    }

    /// Counts after rescaling the form so the first pivot is positive.
    pub fn oriented(&self) -> (usize, usize) {
        match self.first_pivot {
            Sign::Negative => (self.negative, self.positive),
            _ => (self.positive, self.negative),
        }
    }

    pub fn matches_unordered(&self, p: usize, q: usize) -> bool {
        self.unordered() == (p.max(q), p.min(q))
    }
}

/// Signature by symmetric (congruence) elimination.
///
/// Each step picks the nonzero diagonal entry of smallest representation; if
/// the remaining diagonal vanishes, a congruence e_j ↦ e_j + λe_k with
/// λ = G_kj creates the real pivot 2|G_jk|². Pivot signs come from
/// certified enclosures refined until they exclude zero.
pub fn signature(form: &HermitianForm, precision_bits: u32) -> Result<Signature> {
    let dim = form.dim();
    let r = form.rank();
    if r < dim {
        return Err(Error::DegenerateForm { rank: r, dim });
    }
    let mut a: Vec<Vec<CycloNum>> = (0..dim).map(|i| form.gram().row(i).into_entries()).collect();
    let mut active: Vec<usize> = (0..dim).collect();
    let mut out = Signature {
        positive: 0,
        negative: 0,
        first_pivot: Sign::Zero,
    };
    while !active.is_empty() {
        let pick = active
            .iter()
            .copied()
            .filter(|&k| !a[k][k].is_zero())
            .min_by_key(|&k| a[k][k].size());
        let k = match pick {
            Some(k) => k,
            None => {
                let (j, k) = active
                    .iter()
                    .flat_map(|&j| active.iter().map(move |&k| (j, k)))
                    .find(|&(j, k)| j != k && !a[j][k].is_zero())
                    .expect("non-degenerate form has a nonzero entry");
                // new basis vector e_j + λ e_k with λ = a[k][j]
                let lambda = a[k][j].clone();
                let lambda_c = lambda.conjugate();
                for &i in &active {
                    let v = &a[i][j] + &(&a[i][k] * &lambda);
                    a[i][j] = v;
                }
                for &i in &active {
                    let v = &a[j][i] + &(&lambda_c * &a[k][i]);
                    a[j][i] = v;
                }
                j
            }
        };
        let d = a[k][k].clone();
        let sign = d.real_sign(precision_bits);
        if out.first_pivot == Sign::Zero {
            out.first_pivot = sign;
        }
        match sign {
            Sign::Positive => out.positive += 1,
            Sign::Negative => out.negative += 1,
            Sign::Zero => unreachable!("pivot certified nonzero"),
        }
        let inv = d.inv()?;
        active.retain(|&i| i != k);
        let col: Vec<CycloNum> = active.iter().map(|&i| &a[i][k] * &inv).collect();
        for (ci, &i) in col.iter().zip(&active) {
            if ci.is_zero() {
                continue;
            }
            for &j in &active {
                if a[k][j].is_zero() {
                    continue;
                }
                let v = &a[i][j] - &(ci * &a[k][j]);
                a[i][j] = v;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(n: u32, d: &[i64]) -> HermitianForm {
        let entries: Vec<_> = d.iter().map(|&x| CycloNum::from_int(n, x)).collect();
        HermitianForm::new(FieldMatrix::diagonal(&entries)).unwrap()
    }

    #[test]
    fn diagonal_signatures() {
        let s = signature(&diag(4, &[1, -1]), 64).unwrap();
        assert_eq!(s.unordered(), (1, 1));
        let s = signature(&diag(4, &[2, 3, 5]), 64).unwrap();
        assert_eq!((s.positive, s.negative), (3, 0));
        let s = signature(&diag(4, &[-2, -3, 5]), 64).unwrap();
        assert_eq!((s.positive, s.negative), (1, 2));
    }

    #[test]
    fn zero_diagonal_hyperbolic_plane() {
        let n = 4;
        let i = CycloNum::imaginary_unit(n);
        let g = FieldMatrix::from_rows(vec![vec![CycloNum::zero(n), i.clone()], vec![-&i, CycloNum::zero(n)]]).unwrap();
        let s = signature(&HermitianForm::new(g).unwrap(), 64).unwrap();
        assert_eq!((s.positive, s.negative), (1, 1));
    }

    #[test]
    fn degenerate_form_is_rejected() {
        assert_eq!(
            signature(&diag(4, &[1, 0]), 64),
            Err(Error::DegenerateForm { rank: 1, dim: 2 })
        );
    }

    #[test]
    fn non_hermitian_gram_is_rejected() {
        let n = 4;
        let g = FieldMatrix::from_rows(vec![
            vec![CycloNum::one(n), CycloNum::imaginary_unit(n)],
            vec![CycloNum::imaginary_unit(n), CycloNum::one(n)],
        ])
        .unwrap();
        assert!(HermitianForm::new(g).is_err());
    }

    #[test]
    fn identity_preserves_every_form() {
        let forms = invariant_hermitian_forms(&[FieldMatrix::identity(2, 4)]).unwrap();
        assert_eq!(forms.len(), 4);
    }

    #[test]
    fn unitary_diagonal_preserves_only_diagonal_forms() {
        // eigenvalues ζ8 and ζ8^3: conj(λ1)λ2 = ζ8^2 ≠ 1
        let n = 8;
        let g = FieldMatrix::diagonal(&[CycloNum::root_of_unity(n, 1), CycloNum::root_of_unity(n, 3)]);
        let forms = invariant_hermitian_forms(std::slice::from_ref(&g)).unwrap();
        assert_eq!(forms.len(), 2);
        for f in &forms {
            assert!(f.gram().get(0, 1).is_zero() && f.gram().get(1, 0).is_zero());
            assert!(f.is_invariant_under(&g));
        }
    }

    #[test]
    fn non_unitarizable_has_no_form() {
        // diag(2, 3) cannot preserve a nonzero Hermitian form
        let g = FieldMatrix::diagonal(&[CycloNum::from_int(4, 2), CycloNum::from_int(4, 3)]);
        assert_eq!(invariant_hermitian_forms(&[g]), Err(Error::EmptySolution));
    }
}
