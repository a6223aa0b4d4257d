//! Packed upper-triangular storage and back substitution.

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;

/// Upper-triangular matrix stored packed by columns: column `j` contributes
/// its `j + 1` leading entries, so entry `(i, j)` with `i <= j` lives at
/// offset `j * (j + 1) / 2 + i`.
///
/// The solvers grow the factor one column per iteration via
/// [`push_column`](Self::push_column); nothing below the diagonal is stored.
#[derive(Debug, Clone, Default)]
pub struct PackedUpperTriangular {
    order: usize,
    entries: Vec<f64>,
}

impl PackedUpperTriangular {
    /// Empty triangular matrix of order zero.
    pub fn new() -> Self {
        Self::default()
    }

    /// Current order.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry `(i, j)`.
    ///
    /// # Panics
    /// Panics if `i > j` (subdiagonal entries are not stored) or `j >= order`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(j < self.order, "column index {j} out of bounds");
        assert!(i <= j, "requested subdiagonal entry ({i}, {j})");
        self.entries[j * (j + 1) / 2 + i]
    }

    /// Overwrites entry `(i, j)`.
    ///
    /// # Panics
    /// Panics if `i > j` or `j >= order`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(j < self.order, "column index {j} out of bounds");
        assert!(i <= j, "cannot set subdiagonal entry ({i}, {j})");
        self.entries[j * (j + 1) / 2 + i] = value;
    }

    /// Appends a column, growing the order by one.
    ///
    /// # Panics
    /// Panics if `column.len() != order + 1`.
    pub fn push_column(&mut self, column: &[f64]) {
        assert_eq!(
            column.len(),
            self.order + 1,
            "triangular column must have length order + 1"
        );
        self.entries.extend_from_slice(column);
        self.order += 1;
    }

    /// Dense copy (zeros below the diagonal).
    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.order, self.order);
        for j in 0..self.order {
            for i in 0..=j {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }
}

/// Solves `R z = t` by back substitution.
///
/// Returns [`Error::SingularTriangular`] naming the first (largest) index at
/// which the diagonal vanishes.
///
/// # Panics
/// Panics if `t.len()` differs from the order of `r`.
pub fn back_substitute(r: &PackedUpperTriangular, t: &[f64]) -> Result<Vec<f64>> {
    let n = r.order();
    assert_eq!(t.len(), n, "back_substitute: RHS length mismatch");
    let mut z = t.to_vec();
    for i in (0..n).rev() {
        let diag = r.get(i, i);
        if diag == 0.0 {
            return Err(Error::SingularTriangular(i));
        }
        let mut acc = z[i];
        for j in (i + 1)..n {
            acc -= r.get(i, j) * z[j];
        }
        z[i] = acc / diag;
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upper_from_rows(rows: &[&[f64]]) -> PackedUpperTriangular {
        let n = rows.len();
        let mut r = PackedUpperTriangular::new();
        for j in 0..n {
            let col: Vec<f64> = (0..=j).map(|i| rows[i][j]).collect();
            r.push_column(&col);
        }
        r
    }

    #[test]
    fn packed_layout_round_trips_entries() {
        let r = upper_from_rows(&[&[1.0, 2.0, 3.0], &[0.0, 4.0, 5.0], &[0.0, 0.0, 6.0]]);
        assert_eq!(r.order(), 3);
        assert_eq!(r.get(0, 0), 1.0);
        assert_eq!(r.get(0, 2), 3.0);
        assert_eq!(r.get(1, 2), 5.0);
        assert_eq!(r.get(2, 2), 6.0);
    }

    #[test]
    fn back_substitute_on_identity_returns_rhs() {
        let r = upper_from_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        let z = back_substitute(&r, &[4.0, 3.0, 2.0, 1.0]).unwrap();
        assert_eq!(z, vec![4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn back_substitute_solves_2x2_system() {
        // [[2, 1], [0, 4]] z = [4, 8]  =>  z = [1, 2]
        let r = upper_from_rows(&[&[2.0, 1.0], &[0.0, 4.0]]);
        let z = back_substitute(&r, &[4.0, 8.0]).unwrap();
        assert_eq!(z, vec![1.0, 2.0]);
    }

    #[test]
    fn back_substitute_reports_singular_diagonal_index() {
        let r = upper_from_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        match back_substitute(&r, &[1.0, 1.0]) {
            Err(Error::SingularTriangular(idx)) => assert_eq!(idx, 1),
            other => panic!("expected singular-triangular error, got {other:?}"),
        }
    }

    #[test]
    fn push_column_grows_order() {
        let mut r = PackedUpperTriangular::new();
        r.push_column(&[2.0]);
        r.push_column(&[1.0, 3.0]);
        assert_eq!(r.order(), 2);
        assert_eq!(r.get(0, 1), 1.0);
        assert_eq!(r.get(1, 1), 3.0);
    }
}
