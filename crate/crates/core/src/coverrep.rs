//! Monodromy of the curve case n = 1: the half-twist braid generators acting
//! on H¹(C)_(i) through the reduced Burau specialisation at t = ζ_r^{±i},
//! and exterior powers of it standing in for H^n(X_C)_(i).

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycloNum;
use crate::error::{Error, Result};
use crate::exactla::{
    binomial, invariant_hermitian_forms, inverse, left_inverse, rank, signature, wedge_power, FieldMatrix, FieldVector,
    HermitianForm, Signature,
};
use crate::invariants::curve_hodge_numbers;
use crate::pham::{check_cyclic_params, cyclic_pl_data, working_conductor, PLDatum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// t = ζ_r^i
    #[serde(rename = "t=zeta_r^i")]
    Direct,
    /// t = ζ_r^{−i}
    #[serde(rename = "t=zeta_r^-i")]
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveParams {
    pub m: usize,
    pub r: u32,
    pub i: u32,
}

/// How the invariant form was scaled against the cyclic-cover constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    /// Real factor applied to the solved form.
    pub scale: CycloNum,
    /// The meridian constant c, shared by every meridian after calibration.
    pub c: CycloNum,
    /// Whether the cycles are isotropic (the transvection case).
    pub isotropic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyRep {
    pub params: CurveParams,
    /// Exterior degree; 1 for the curve itself.
    pub wedge: usize,
    pub dim: usize,
    pub generators: Vec<FieldMatrix>,
    pub inverses: Vec<FieldMatrix>,
    pub form: HermitianForm,
    pub convention: Convention,
    pub calibration: Calibration,
    /// Cycles of the consecutive-collision meridians g_j², transported by
    /// e_{j+1} = g_j g_{j+1} e_j. Empty for wedge degree ≥ 2.
    pub cycles: Vec<FieldVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeridianReflection {
    pub matrix: FieldMatrix,
    pub cycle: FieldVector,
    pub datum: PLDatum,
}

impl MeridianReflection {
    /// Re-checks matrix·v = v + c·H(v, e)·e, rank one, and the eigenvalue.
    pub fn verify(&self, form: &HermitianForm) -> bool {
        let d = self.matrix.rows();
        let n = self.matrix.conductor();
        let e = self.cycle.lift(n);
        let f = form.functional(&e).lift(n);
        let outer = FieldMatrix::from_fn(d, d, n, |i, j| &(&self.datum.c * &e[i]) * &f[j]);
        let lhs = self.matrix.minus_identity();
        let ev_minus_one = &self.datum.eigenvalue - &CycloNum::one(n);
        lhs == outer
            && rank(&lhs) == 1
            && lhs.mul_vec(&e) == e.scale(&ev_minus_one)
            && form.pair(&e, &e) == self.datum.self_pairing
    }
}

pub fn burau_matrices(m: usize, t: &CycloNum) -> Result<Vec<FieldMatrix>> {
    if m < 3 {
        return Err(Error::BadParameters(format!("m = {m} must be at least 3")));
    }
    let n = t.conductor();
    let one = CycloNum::one(n);
    Ok((0..m - 1)
        .map(|j| {
            let mut g = FieldMatrix::identity(m, n);
            g.set(j, j, &one - t);
            g.set(j, j + 1, t.clone());
            g.set(j + 1, j, one.clone());
            g.set(j + 1, j + 1, CycloNum::zero(n));
            g
        })
        .collect())
}

pub fn braid_relations_hold(gens: &[FieldMatrix]) -> bool {
    for j in 0..gens.len() {
        for k in j + 1..gens.len() {
            let (a, b) = (&gens[j], &gens[k]);
            let ok = if k == j + 1 {
                &(a * b) * a == &(b * a) * b
            } else {
                a * b == b * a
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

fn quotient_by(g: &FieldMatrix, p: &FieldMatrix, p_inv: &FieldMatrix, skip: usize) -> FieldMatrix {
    let full = &(p_inv * g) * p;
    let d = g.rows() - skip;
    FieldMatrix::from_fn(d, d, g.conductor(), |i, j| full.get(i + skip, j + skip).clone())
}

struct Uncalibrated {
    generators: Vec<FieldMatrix>,
    form: HermitianForm,
}

fn reduced_rep(m: usize, t: &CycloNum) -> Result<Uncalibrated> {
    let n = t.conductor();
    let gens = burau_matrices(m, t)?;
    // kernel of the invariant covector (1, t, …, t^{m−1})
    let basis = FieldMatrix::from_fn(m, m - 1, n, |row, k| {
        if row == k + 1 {
            CycloNum::one(n)
        } else if row == k {
            -t
        } else {
            CycloNum::zero(n)
        }
    });
    let left =
        left_inverse(&basis).ok_or_else(|| Error::InvariantViolated("hyperplane basis is not injective".into()))?;
    let mut restricted = Vec::with_capacity(gens.len());
    for g in &gens {
        let gb = g * &basis;
        let h = &left * &gb;
        if &basis * &h != gb {
            return Err(Error::InvariantViolated("Burau hyperplane is not invariant".into()));
        }
        restricted.push(h);
    }
    let forms = invariant_hermitian_forms(&restricted)?;
    if forms.len() != 1 {
        return Err(Error::InvariantViolated(format!(
            "invariant Hermitian forms span dimension {}, expected 1",
            forms.len()
        )));
    }
    let form = forms.into_iter().next().unwrap();
    let radical = form.radical();
    let got = m - 1 - radical.dim();
    if got != m - 2 {
        return Err(Error::RadicalDimensionUnexpected { got, expected: m - 2 });
    }
    // radical basis first, then unit vectors off its pivots
    let mut cols = radical.basis();
    for k in 0..m - 1 {
        if !radical.pivots().contains(&k) {
            cols.push(FieldVector::unit(m - 1, k, n));
        }
    }
    let p = FieldMatrix::from_columns(&cols);
    let p_inv = inverse(&p).expect("complement of the radical");
    let skip = radical.dim();
    let generators: Vec<_> = restricted.iter().map(|g| quotient_by(g, &p, &p_inv, skip)).collect();
    let complement = FieldMatrix::from_columns(&cols[skip..]);
    let form = form.restrict(&complement)?;
    Ok(Uncalibrated { generators, form })
}

/// Writes M − I = κ·a·(a^† G) for the first nonzero column a of M − I.
fn rank_one_factor(m: &FieldMatrix, form: &HermitianForm) -> Result<(FieldVector, CycloNum)> {
    let a_mat = m.minus_identity();
    let col = (0..a_mat.cols())
        .map(|j| a_mat.column(j))
        .find(|c| !c.is_zero())
        .ok_or_else(|| Error::InvariantViolated("meridian acts trivially".into()))?;
    let f = form.functional(&col);
    let d = a_mat.rows();
    let (i, j) = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .find(|&(i, j)| !col[i].is_zero() && !f[j].is_zero())
        .ok_or_else(|| Error::InvariantViolated("meridian cycle lies in the radical".into()))?;
    let kappa = a_mat.get(i, j).try_div(&(&col[i] * &f[j]))?;
    let n = a_mat.conductor();
    let outer = FieldMatrix::from_fn(d, d, n, |i, j| &(&kappa * &col[i]) * &f[j]);
    if outer != a_mat {
        return Err(Error::InvariantViolated(
            "meridian is not a rank-one Picard–Lefschetz map".into(),
        ));
    }
    Ok((col, kappa))
}

fn calibrate(params: CurveParams, convention: Convention, raw: Uncalibrated) -> Result<MonodromyRep> {
    let Uncalibrated { generators, form } = raw;
    let dim = generators[0].rows();
    let j_index = match convention {
        Convention::Direct => params.i,
        Convention::Inverse => params.r - params.i,
    };
    let datum = cyclic_pl_data(1, params.m, params.r, j_index)?;
    let first = &generators[0] * &generators[0];
    let (e0, kappa) = rank_one_factor(&first, &form)?;
    let scale = kappa.try_div(&datum.c)?;
    if !scale.is_real() {
        return Err(Error::InvariantViolated(
            "meridian constant is not a real multiple of the cyclic-cover constant".into(),
        ));
    }
    let form = form.scale(&scale)?;
    let mut cycles = vec![e0];
    for j in 0..generators.len() - 1 {
        let t = &generators[j] * &generators[j + 1];
        let next = t.mul_vec(&cycles[j]);
        cycles.push(next);
    }
    let inverses = generators
        .iter()
        .map(|g| inverse(g).ok_or_else(|| Error::InvariantViolated("generator not invertible".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonodromyRep {
        params,
        wedge: 1,
        dim,
        generators,
        inverses,
        form,
        convention,
        calibration: Calibration {
            scale,
            c: datum.c.clone(),
            isotropic: datum.is_transvection(),
        },
        cycles,
    })
}

/// The curve representation on H¹(C)_(i), dimension m − 2.
///
/// The form is calibrated so that every consecutive meridian g_j² satisfies
/// the Picard–Lefschetz formula with the cyclic-cover constant c exactly.
pub fn build_curve_rep(m: usize, r: u32, i: u32) -> Result<MonodromyRep> {
    check_cyclic_params(m, r, i)?;
    if m < 3 {
        return Err(Error::BadParameters(format!("m = {m} must be at least 3")));
    }
    let (h10, h01) = curve_hodge_numbers(m, r, i)?;
    let params = CurveParams { m, r, i };
    let n = working_conductor(r);
    let step = (n / r) as i64;
    let mut last_err = None;
    for convention in [Convention::Direct, Convention::Inverse] {
        let k = match convention {
            Convention::Direct => i as i64,
            Convention::Inverse => -(i as i64),
        };
        let t = CycloNum::root_of_unity(n, k * step);
        let attempt = reduced_rep(m, &t).and_then(|raw| calibrate(params, convention, raw));
        match attempt {
            Ok(rep) => {
                let sig = signature(&rep.form, 128)?;
                if sig.matches_unordered(h10, h01) {
                    return Ok(rep);
                }
                last_err = Some(Error::InvariantViolated(format!(
                    "form signature {:?} differs from {{{h10}, {h01}}}",
                    sig.unordered()
                )));
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

impl MonodromyRep {
    pub fn signature(&self, precision_bits: u32) -> Result<Signature> {
        signature(&self.form, precision_bits)
    }

    pub fn conductor(&self) -> u32 {
        self.form.conductor()
    }

    pub fn meridian_eigenvalue(&self) -> CycloNum {
        let n = self.conductor();
        let step = (n / self.params.r) as i64;
        let k = match self.convention {
            Convention::Direct => 2 * self.params.i as i64,
            Convention::Inverse => -2 * self.params.i as i64,
        };
        CycloNum::root_of_unity(n, k * step)
    }

    /// Evaluates a word: letter +j is generator j (1-based), −j its inverse.
    pub fn word(&self, letters: &[i32]) -> Result<FieldMatrix> {
        let mut acc = FieldMatrix::identity(self.dim, self.conductor());
        for &l in letters {
            acc = &acc * self.letter(l)?;
        }
        Ok(acc)
    }

    pub fn letter(&self, l: i32) -> Result<&FieldMatrix> {
        let k = l.unsigned_abs() as usize;
        if l == 0 || k > self.generators.len() {
            return Err(Error::BadParameters(format!("no generator letter {l}")));
        }
        Ok(if l > 0 {
            &self.generators[k - 1]
        } else {
            &self.inverses[k - 1]
        })
    }

    pub fn braid_relations_hold(&self) -> bool {
        braid_relations_hold(&self.generators)
    }

    pub fn form_is_invariant(&self) -> bool {
        self.generators.iter().all(|g| self.form.is_invariant_under(g))
    }
}

/// The meridian g_j² of the j-th consecutive collision (0-based).
pub fn meridian_matrix(rep: &MonodromyRep, j: usize) -> Result<MeridianReflection> {
    if rep.wedge != 1 {
        return Err(Error::BadParameters(
            "meridian matrices exist only for the curve".into(),
        ));
    }
    let g = rep
        .generators
        .get(j)
        .ok_or_else(|| Error::BadParameters(format!("no generator {j}")))?;
    let cycle = rep.cycles[j].clone();
    Ok(MeridianReflection {
        matrix: g * g,
        datum: PLDatum {
            c: rep.calibration.c.clone(),
            self_pairing: rep.form.pair(&cycle, &cycle),
            eigenvalue: rep.meridian_eigenvalue(),
        },
        cycle,
    })
}

/// The conjugate w·g_j²·w⁻¹ with cycle w·e_j.
pub fn meridian_conjugate(rep: &MonodromyRep, word: &[i32], j: usize) -> Result<MeridianReflection> {
    let base = meridian_matrix(rep, j)?;
    let w = rep.word(word)?;
    let w_inv: Vec<i32> = word.iter().rev().map(|l| -l).collect();
    let w_inv = rep.word(&w_inv)?;
    Ok(MeridianReflection {
        matrix: &(&w * &base.matrix) * &w_inv,
        cycle: w.mul_vec(&base.cycle),
        datum: base.datum,
    })
}

/// ∧ⁿ of the curve representation with the induced form ∧ⁿG.
pub fn wedge_rep(rep: &MonodromyRep, n: usize) -> Result<MonodromyRep> {
    if rep.wedge != 1 {
        return Err(Error::BadParameters("wedge of a wedge representation".into()));
    }
    if n == 0 || n > rep.dim.saturating_sub(1).max(1) {
        return Err(Error::BadParameters(format!(
            "wedge degree {n} outside 1..={}",
            rep.dim - 1
        )));
    }
    if n == 1 {
        return Ok(rep.clone());
    }
    let gens = rep
        .generators
        .iter()
        .map(|g| wedge_power(g, n))
        .collect::<Result<Vec<_>>>()?;
    let inverses = rep
        .inverses
        .iter()
        .map(|g| wedge_power(g, n))
        .collect::<Result<Vec<_>>>()?;
    let form = HermitianForm::new(wedge_power(rep.form.gram(), n)?)?;
    Ok(MonodromyRep {
        params: rep.params,
        wedge: n,
        dim: binomial(rep.dim, n),
        generators: gens,
        inverses,
        form,
        convention: rep.convention,
        calibration: rep.calibration.clone(),
        cycles: Vec::new(),
    })
}

/// Dimensions of the primitive pieces of ∧ⁿ of the standard module of Sp(d).
pub fn sp_isotypic_dims(d: usize, n: usize) -> Result<Vec<usize>> {
    if !d.is_multiple_of(2) || n > d {
        return Err(Error::BadParameters(format!("need d even and n ≤ d, got ({d}, {n})")));
    }
    let n = n.min(d - n);
    Ok((0..=n / 2)
        .map(|k| {
            let top = binomial(d, n - 2 * k);
            let below = if n >= 2 * k + 2 { binomial(d, n - 2 * k - 2) } else { 0 };
            top - below
        })
        .filter(|&x| x > 0)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeridianSummary {
    pub index: usize,
    pub cycle: FieldVector,
    pub c: CycloNum,
    pub self_pairing: CycloNum,
    pub eigenvalue: CycloNum,
    pub transvection: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRepReport {
    pub m: usize,
    pub r: u32,
    pub i: u32,
    pub wedge: usize,
    pub dim: usize,
    pub convention: Convention,
    pub form_scale: CycloNum,
    pub generators: Vec<FieldMatrix>,
    pub gram: FieldMatrix,
    pub signature: (usize, usize),
    pub oriented_signature: (usize, usize),
    /// (positive, negative) of the calibrated form itself.
    pub calibrated_signature: (usize, usize),
    pub meridians: Vec<MeridianSummary>,
}

pub fn curve_rep_report(m: usize, r: u32, i: u32, wedge: usize, precision_bits: u32) -> Result<CurveRepReport> {
    let curve = build_curve_rep(m, r, i)?;
    let meridians = (0..curve.generators.len())
        .map(|j| {
            let mr = meridian_matrix(&curve, j)?;
            Ok(MeridianSummary {
                index: j + 1,
                transvection: mr.datum.eigenvalue.is_one(),
                cycle: mr.cycle,
                c: mr.datum.c,
                self_pairing: mr.datum.self_pairing,
                eigenvalue: mr.datum.eigenvalue,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = wedge_rep(&curve, wedge)?;
    let sig = rep.signature(precision_bits)?;
    Ok(CurveRepReport {
        m,
        r,
        i,
        wedge,
        dim: rep.dim,
        convention: rep.convention,
        form_scale: rep.calibration.scale.clone(),
        gram: rep.form.gram().clone(),
        generators: rep.generators,
        signature: sig.unordered(),
        oriented_signature: sig.oriented(),
        calibrated_signature: (sig.positive, sig.negative),
        meridians,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burau_at_one_is_permutation() {
        let gens = burau_matrices(4, &CycloNum::one(4)).unwrap();
        let swap = FieldMatrix::from_int_rows(4, &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(gens[1], swap);
    }

    #[test]
    fn burau_braid_relations() {
        let t = CycloNum::root_of_unity(3, 1);
        assert!(braid_relations_hold(&burau_matrices(3, &t).unwrap()));
        assert!(braid_relations_hold(&burau_matrices(5, &t).unwrap()));
    }

    #[test]
    fn small_curve_reps() {
        for (m, r, i, sig) in [(4, 2, 1, (1, 1)), (6, 3, 1, (3, 1)), (6, 2, 1, (2, 2))] {
            let rep = build_curve_rep(m, r, i).unwrap();
            assert_eq!(rep.dim, m - 2);
            assert_eq!(rep.signature(64).unwrap().unordered(), sig);
            assert!(rep.braid_relations_hold());
            assert!(rep.form_is_invariant());
            assert_eq!(rep.convention, Convention::Direct);
        }
    }

    #[test]
    fn meridians_follow_picard_lefschetz() {
        for (m, r, i) in [(4, 2, 1), (6, 3, 1), (6, 6, 1), (8, 4, 2)] {
            let rep = build_curve_rep(m, r, i).unwrap();
            let datum = cyclic_pl_data(1, m, r, i).unwrap();
            for j in 0..m - 1 {
                let mr = meridian_matrix(&rep, j).unwrap();
                assert!(mr.verify(&rep.form), "({m},{r},{i}) meridian {j}");
                assert_eq!(mr.datum, datum);
            }
            let conj = meridian_conjugate(&rep, &[2, -1, 3], 0).unwrap();
            assert!(conj.verify(&rep.form));
        }
    }

    #[test]
    fn double_cover_meridian_is_transvection() {
        let rep = build_curve_rep(4, 2, 1).unwrap();
        let mr = meridian_matrix(&rep, 0).unwrap();
        let a = mr.matrix.minus_identity();
        assert!((&a * &a).is_zero());
        assert!(mr.datum.self_pairing.is_zero());
    }

    #[test]
    fn wedge_rep_keeps_structure() {
        let rep = build_curve_rep(6, 2, 1).unwrap();
        let w = wedge_rep(&rep, 2).unwrap();
        assert_eq!(w.dim, 6);
        assert!(w.braid_relations_hold());
        assert!(w.form_is_invariant());
        assert_eq!(wedge_rep(&rep, 1).unwrap(), rep);
    }

    #[test]
    fn isotypic_examples() {
        assert_eq!(sp_isotypic_dims(4, 2).unwrap(), vec![5, 1]);
        assert_eq!(sp_isotypic_dims(6, 3).unwrap(), vec![14, 6]);
        for d in (2..=10).step_by(2) {
            for n in 0..=d {
                let dims = sp_isotypic_dims(d, n).unwrap();
                assert_eq!(dims.iter().sum::<usize>(), binomial(d, n));
            }
        }
    }
}
