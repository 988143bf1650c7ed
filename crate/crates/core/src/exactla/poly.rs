use std::fmt;

use serde::{Deserialize, Serialize};

use super::echelon::{kernel, Echelon};
use super::matrix::FieldMatrix;
use crate::cyclotomic::CycloNum;

/// Univariate polynomial over Q(ζ_N), coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloPoly {
    pub coeffs: Vec<CycloNum>,
}

impl CycloPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(CycloNum::is_one)
    }

    /// p(M) by Horner's rule.
    pub fn eval_matrix(&self, m: &FieldMatrix) -> FieldMatrix {
        let d = m.rows();
        let n = m.conductor();
        let mut acc = FieldMatrix::zeros(d, d, n);
        for c in self.coeffs.iter().rev() {
            acc = (&acc * m).add(&FieldMatrix::identity(d, n).scale(c)).unwrap();
        }
        acc
    }
}

impl fmt::Debug for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})X^{k}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Monic annihilating polynomial of least degree: the first power M^k that
/// falls into the span of I, M, …, M^{k−1} fixes it.
pub fn minimal_polynomial(m: &FieldMatrix) -> CycloPoly {
    assert!(m.is_square(), "minimal polynomial of a non-square matrix");
    let d = m.rows();
    let n = m.conductor();
    let mut span = Echelon::new(d * d, n);
    let mut powers = vec![FieldMatrix::identity(d, n)];
    span.insert(powers[0].to_vector().entries());
    loop {
        let next = &powers[powers.len() - 1] * m;
        let dependent = span.contains(next.to_vector().entries());
        powers.push(next);
        if dependent {
            break;
        }
        span.insert(powers[powers.len() - 1].to_vector().entries());
    }
    let cols: Vec<_> = powers.iter().map(FieldMatrix::to_vector).collect();
    let relation = kernel(&FieldMatrix::from_columns(&cols));
    debug_assert_eq!(relation.dim(), 1);
    let v = &relation.basis()[0];
    let lead = v[v.len() - 1].inv().expect("relation involves the top power");
    CycloPoly {
        coeffs: v.entries().iter().map(|c| c * &lead).collect(),
    }
}
