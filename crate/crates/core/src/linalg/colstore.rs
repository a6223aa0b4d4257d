//! Append-only column storage for Krylov basis vectors.

use crate::linalg::dense::DenseMatrix;

/// Dense column-major store with a fixed row count and an appendable set of
/// columns. Basis vectors are pushed once per iteration and never mutated.
#[derive(Debug, Clone)]
pub struct DenseColumnStore {
    nrows: usize,
    data: Vec<f64>,
}

impl DenseColumnStore {
    /// Empty store whose columns will all have length `nrows`.
    pub fn new(nrows: usize) -> Self {
        Self {
            nrows,
            data: Vec::new(),
        }
    }

    /// Row count shared by every column.
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of columns pushed so far.
    pub fn ncols(&self) -> usize {
        if self.nrows == 0 {
            0
        } else {
            self.data.len() / self.nrows
        }
    }

    /// Appends a column.
    ///
    /// # Panics
    /// Panics if `column.len() != nrows`.
    pub fn push_column(&mut self, column: &[f64]) {
        assert_eq!(column.len(), self.nrows, "column length mismatch");
        self.data.extend_from_slice(column);
    }

    /// Column `j` as a slice.
    pub fn column(&self, j: usize) -> &[f64] {
        assert!(j < self.ncols(), "column index {j} out of bounds");
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    /// Dense copy of the first `k` columns.
    pub fn to_dense_prefix(&self, k: usize) -> DenseMatrix {
        assert!(k <= self.ncols(), "prefix exceeds stored column count");
        let mut out = DenseMatrix::zeros(self.nrows, k);
        for j in 0..k {
            for (i, &v) in self.column(j).iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    /// Dense copy of all stored columns.
    pub fn to_dense(&self) -> DenseMatrix {
        self.to_dense_prefix(self.ncols())
    }
}
