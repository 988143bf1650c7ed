use std::collections::VecDeque;

use super::echelon::{Echelon, Subspace};
use super::matrix::FieldMatrix;
use crate::cyclotomic::lcm;
use crate::error::{Error, Result};

/// Linear span of the unital associative algebra generated by `generators`,
/// as a subspace of the d²-dimensional matrix space (row-major coordinates).
///
/// Breadth-first: every newly independent product is multiplied on both
/// sides by each generator until nothing new appears.
pub fn algebra_closure(generators: &[FieldMatrix]) -> Result<Subspace> {
    let d = generators
        .first()
        .map(FieldMatrix::rows)
        .ok_or_else(|| Error::DimensionMismatch("no generators".into()))?;
    if generators.iter().any(|g| g.rows() != d || g.cols() != d) {
        return Err(Error::DimensionMismatch(
            "generators must be square of equal size".into(),
        ));
    }
    let n = generators.iter().fold(1, |acc, g| lcm(acc, g.conductor()));
    let gens: Vec<FieldMatrix> = generators.iter().map(|g| g.lift(n)).collect();
    let mut span = Echelon::new(d * d, n);
    let mut queue = VecDeque::new();
    let id = FieldMatrix::identity(d, n);
    span.insert(id.to_vector().entries());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        if span.is_full() {
            break;
        }
        for g in &gens {
            for y in [g * &x, &x * g] {
                if span.insert(y.to_vector().entries()).is_some() {
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(span.into_subspace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CycloNum;

    #[test]
    fn matrix_units_generate_everything() {
        let d = 3;
        let units: Vec<_> = (0..d * d)
            .map(|k| {
                let mut m = FieldMatrix::zeros(d, d, 4);
                m.set(k / d, k % d, CycloNum::one(4));
                m
            })
            .collect();
        assert_eq!(algebra_closure(&units).unwrap().dim(), 9);
    }

    #[test]
    fn identity_generates_scalars() {
        assert_eq!(algebra_closure(&[FieldMatrix::identity(4, 3)]).unwrap().dim(), 1);
    }

    #[test]
    fn sign_and_swap_span_all_two_by_two() {
        let s = FieldMatrix::from_int_rows(4, &[&[1, 0], &[0, -1]]);
        let p = FieldMatrix::from_int_rows(4, &[&[0, 1], &[1, 0]]);
        let span = algebra_closure(&[s.clone(), p.clone()]).unwrap();
        assert_eq!(span.dim(), 4);
        for g in [&s, &p] {
            for b in span.basis() {
                let x = FieldMatrix::from_vector(2, 2, &b);
                assert!(span.contains(&(g * &x).to_vector()));
            }
        }
    }
}
