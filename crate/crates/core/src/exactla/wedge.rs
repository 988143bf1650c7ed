use super::echelon::determinant;
use super::matrix::FieldMatrix;
use crate::error::{Error, Result};

/// All `k`-subsets of `0..d` as sorted tuples, in lexicographic order.
pub fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > d {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < d - k + i {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The induced action on the n-th exterior power, in the basis
/// e_I = e_{i1} ∧ … ∧ e_{in} with I increasing and lexicographically ordered.
/// Entry (I, J) is the minor of M on rows I and columns J.
pub fn wedge_power(m: &FieldMatrix, n: usize) -> Result<FieldMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("wedge power of a non-square matrix".into()));
    }
    let d = m.rows();
    if n == 0 || n > d {
        return Err(Error::BadParameters(format!("wedge degree {n} outside 1..={d}")));
    }
    let idx = combinations(d, n);
    let c = m.conductor();
    Ok(FieldMatrix::from_fn(idx.len(), idx.len(), c, |a, b| {
        let (rows, cols) = (&idx[a], &idx[b]);
        if cols.iter().all(|&j| rows.iter().all(|&i| m.get(i, j).is_zero())) {
            return crate::CycloNum::zero(c);
        }
        let sub = FieldMatrix::from_fn(n, n, c, |i, j| m.get(rows[i], cols[j]).clone());
        determinant(&sub)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CycloNum;

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(5, 3).len(), binomial(5, 3));
    }

    #[test]
    fn wedge_of_identity_is_identity() {
        for n in 1..=4 {
            assert!(wedge_power(&FieldMatrix::identity(4, 3), n).unwrap().is_identity());
        }
    }

    #[test]
    fn wedge_of_diagonal_multiplies_subsets() {
        let d: Vec<CycloNum> = [2, 3, 5, 7].iter().map(|&x| CycloNum::from_int(3, x)).collect();
        let w = wedge_power(&FieldMatrix::diagonal(&d), 2).unwrap();
        let expected = [6, 10, 14, 15, 21, 35];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(*w.get(k, k), CycloNum::from_int(3, *e));
        }
        assert_eq!(
            *wedge_power(&FieldMatrix::diagonal(&d), 4).unwrap().get(0, 0),
            CycloNum::from_int(3, 210)
        );
    }

    #[test]
    fn first_wedge_is_the_matrix() {
        let j = FieldMatrix::from_int_rows(4, &[&[1, 1], &[0, 1]]);
        assert_eq!(wedge_power(&j, 1).unwrap(), j);
    }
}
