//! Compressed sparse row matrices and the matrix-vector product kernel.

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::operators::LinearOperator;

/// Real sparse matrix in compressed sparse row (CSR) format.
///
/// Rows are stored contiguously. Within each row the column indices are
/// strictly increasing, so duplicate entries cannot occur in a valid value.
/// Explicit zeros are allowed and preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from raw CSR arrays, validating every structural
    /// invariant (offset monotonicity, index bounds, strict column ordering).
    pub fn new(
        nrows: usize,
        ncols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != nrows + 1 {
            return Err(Error::InvalidStructure(format!(
                "row_offsets has length {}, expected {}",
                row_offsets.len(),
                nrows + 1
            )));
        }
        if row_offsets[0] != 0 {
            return Err(Error::InvalidStructure(
                "row_offsets must start at 0".into(),
            ));
        }
        if col_indices.len() != values.len() {
            return Err(Error::InvalidStructure(format!(
                "col_indices ({}) and values ({}) differ in length",
                col_indices.len(),
                values.len()
            )));
        }
        if *row_offsets.last().unwrap() != values.len() {
            return Err(Error::InvalidStructure(format!(
                "last row offset {} does not match nnz {}",
                row_offsets.last().unwrap(),
                values.len()
            )));
        }
        for i in 0..nrows {
            let (lo, hi) = (row_offsets[i], row_offsets[i + 1]);
            if lo > hi {
                return Err(Error::InvalidStructure(format!(
                    "row_offsets decrease at row {i}"
                )));
            }
            let mut prev: Option<usize> = None;
            for &j in &col_indices[lo..hi] {
                if j >= ncols {
                    return Err(Error::InvalidStructure(format!(
                        "column index {j} out of bounds in row {i} (ncols = {ncols})"
                    )));
                }
                if let Some(p) = prev {
                    if j <= p {
                        return Err(Error::InvalidStructure(format!(
                            "column indices not strictly increasing in row {i}"
                        )));
                    }
                }
                prev = Some(j);
            }
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicate
    /// coordinates are summed; out-of-bounds indices are rejected.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(i, j, _) in entries {
            if i >= nrows || j >= ncols {
                return Err(Error::InvalidStructure(format!(
                    "entry ({i}, {j}) out of bounds for a {nrows}x{ncols} matrix"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = entries.to_vec();
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut row_offsets = Vec::with_capacity(nrows + 1);
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        row_offsets.push(0);
        let mut row = 0;
        for &(i, j, v) in &sorted {
            while row < i {
                row_offsets.push(values.len());
                row += 1;
            }
            if col_indices.len() > row_offsets[row] && *col_indices.last().unwrap() == j {
                // Same coordinate as the previous entry in this row: accumulate.
                *values.last_mut().unwrap() += v;
            } else {
                col_indices.push(j);
                values.push(v);
            }
        }
        while row < nrows {
            row_offsets.push(values.len());
            row += 1;
        }
        Self::new(nrows, ncols, row_offsets, col_indices, values)
    }

    /// Identity matrix of the given order.
    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Row offset array (length `nrows + 1`).
    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    /// Column index array (length `nnz`).
    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    /// Value array (length `nnz`).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        assert!(i < self.nrows, "row index {i} out of bounds");
        let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    /// Entry `(i, j)`, or 0.0 if it is not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(pos) => vals[pos],
            Err(_) => 0.0,
        }
    }

    /// Sparse matrix-vector product `y = A x`.
    ///
    /// # Panics
    /// Panics if `x` or `y` have the wrong length.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols, "spmv: input length mismatch");
        assert_eq!(y.len(), self.nrows, "spmv: output length mismatch");
        for i in 0..self.nrows {
            let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.values[k] * x[self.col_indices[k]];
            }
            y[i] = acc;
        }
    }

    /// Sparse matrix-vector product returning a fresh vector.
    pub fn spmv(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.spmv_into(x, &mut y);
        y
    }

    /// Frobenius norm of the stored entries.
    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Dense copy of the matrix (intended for small matrices and tests).
    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                out.set(i, j, v);
            }
        }
        out
    }
}

impl LinearOperator for SparseMatrix {
    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.spmv_into(x, y);
    }
}
