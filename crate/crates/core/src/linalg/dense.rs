//! Dense matrices, LU factorization, and singular values.
//!
//! The dense kernels back the block preconditioner, condition-number
//! diagnostics, and the direct-solve oracles used by the test suites. They
//! are written for clarity at desk scale (orders up to a few thousand), not
//! for BLAS-level throughput.

use crate::error::{Error, Result};
use crate::linalg::vecops;
use crate::operators::{DirectSolver, LinearOperator};

/// Dense real matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            data: vec![0.0; nrows * ncols],
        }
    }

    /// Identity matrix of the given order.
    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.set(i, i, 1.0);
        }
        out
    }

    /// Builds a matrix from row-major data.
    ///
    /// # Panics
    /// Panics if `data.len() != nrows * ncols`.
    pub fn from_row_major(nrows: usize, ncols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), nrows * ncols, "row-major data length mismatch");
        Self {
            nrows,
            ncols,
            data,
        }
    }

    /// Builds a matrix from a slice of equally long rows.
    ///
    /// # Panics
    /// Panics if the rows have inconsistent lengths.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "rows have inconsistent lengths");
            data.extend_from_slice(row);
        }
        Self {
            nrows,
            ncols,
            data,
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

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.nrows && j < self.ncols, "index out of bounds");
        self.data[i * self.ncols + j]
    }

    /// Sets entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.nrows && j < self.ncols, "index out of bounds");
        self.data[i * self.ncols + j] = value;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        assert!(i < self.nrows, "row index out of bounds");
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    /// Column `j` as a fresh vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        assert!(j < self.ncols, "column index out of bounds");
        (0..self.nrows).map(|i| self.get(i, j)).collect()
    }

    /// Dense matrix-vector product `y = A x`.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols, "mul_vec: input length mismatch");
        assert_eq!(y.len(), self.nrows, "mul_vec: output length mismatch");
        for i in 0..self.nrows {
            y[i] = vecops::dot(self.row(i), x);
        }
    }

    /// Dense matrix-vector product returning a fresh vector.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// Dense matrix-matrix product `A * other`.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.ncols, other.nrows,
            "matmul: inner dimension mismatch"
        );
        let mut out = DenseMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.ncols {
                    out.data[i * out.ncols + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    /// Transpose copy.
    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Entry-wise difference `self - other`.
    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.nrows, other.nrows, "sub: row count mismatch");
        assert_eq!(self.ncols, other.ncols, "sub: column count mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        DenseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data,
        }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        vecops::norm2(&self.data)
    }

    /// Maximum absolute entry.
    pub fn max_abs(&self) -> f64 {
        vecops::norm_inf(&self.data)
    }
}

impl LinearOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.mul_vec_into(x, y);
    }
}

// ============================================================================
// LU factorization with partial pivoting
// ============================================================================

/// LU factorization of a square matrix with partial (row) pivoting.
///
/// Stores the combined `L - I + U` factor and the row-swap sequence. An
/// exactly zero pivot is reported as a [`Error::SingularFactor`].
#[derive(Debug, Clone)]
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    // swaps[k] is the row swapped with row k during elimination step k.
    swaps: Vec<usize>,
}

impl DenseLu {
    /// Factors `a`, which must be square.
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "LU factorization requires a square matrix, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        let n = a.nrows();
        let mut lu = a.data.clone();
        let mut swaps = vec![0usize; n];
        for k in 0..n {
            // Partial pivoting: largest magnitude in column k at or below row k.
            let mut pivot_row = k;
            let mut pivot_mag = lu[k * n + k].abs();
            for i in (k + 1)..n {
                let mag = lu[i * n + k].abs();
                if mag > pivot_mag {
                    pivot_row = i;
                    pivot_mag = mag;
                }
            }
            if pivot_mag == 0.0 {
                return Err(Error::SingularFactor(format!(
                    "zero pivot at elimination step {k}"
                )));
            }
            swaps[k] = pivot_row;
            if pivot_row != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot_row * n + j);
                }
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let mult = lu[i * n + k] / pivot;
                lu[i * n + k] = mult;
                for j in (k + 1)..n {
                    lu[i * n + j] -= mult * lu[k * n + j];
                }
            }
        }
        Ok(Self { n, lu, swaps })
    }

    /// Order of the factored matrix.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Solves `A x = b` in place, overwriting `b` with `x`.
    ///
    /// # Panics
    /// Panics if `b.len() != n`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n, "solve: RHS length mismatch");
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.swaps[k]);
        }
        // Forward substitution with the unit lower factor.
        for i in 1..n {
            let mut acc = b[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * b[j];
            }
            b[i] = acc;
        }
        // Back substitution with the upper factor.
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in (i + 1)..n {
                acc -= self.lu[i * n + j] * b[j];
            }
            b[i] = acc / self.lu[i * n + i];
        }
    }

    /// Solves `A x = b` returning a fresh vector.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

impl DirectSolver for DenseLu {
    fn order(&self) -> usize {
        self.n
    }

    fn solve_into(&self, v: &mut [f64]) {
        self.solve_in_place(v);
    }
}

// ============================================================================
// Singular values via one-sided Jacobi
// ============================================================================

/// Singular values of `a`, sorted in decreasing order.
///
/// Uses one-sided Jacobi iteration: columns are repeatedly rotated in pairs
/// until all pairs are numerically orthogonal, at which point the column
/// norms are the singular values. Accurate for the small-to-moderate
/// matrices the diagnostics operate on; requires `nrows >= ncols` (pass the
/// transpose for wide matrices).
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    assert!(
        a.nrows() >= a.ncols(),
        "singular_values requires nrows >= ncols; pass the transpose"
    );
    let m = a.nrows();
    let n = a.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Column-major working copy.
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();

    const MAX_SWEEPS: usize = 64;
    let tol = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    app += cols[p][i] * cols[p][i];
                    aqq += cols[q][i] * cols[q][i];
                    apq += cols[p][i] * cols[q][i];
                }
                if apq == 0.0 || apq.abs() <= tol * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let vp = cols[p][i];
                    let vq = cols[q][i];
                    cols[p][i] = c * vp - s * vq;
                    cols[q][i] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = cols.iter().map(|col| vecops::norm2(col)).collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sigma
}

/// Spectral condition number of `a` (largest over smallest singular value).
///
/// Returns `f64::INFINITY` when the smallest singular value vanishes or the
/// quotient overflows.
pub fn condition_number(a: &DenseMatrix) -> f64 {
    let sigma = if a.nrows() >= a.ncols() {
        singular_values(a)
    } else {
        singular_values(&a.transpose())
    };
    match (sigma.first(), sigma.last()) {
        (Some(&max), Some(&min)) if min > 0.0 => {
            let kappa = max / min;
            if kappa.is_finite() {
                kappa
            } else {
                f64::INFINITY
            }
        }
        _ => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI: f64 = 1.618033988749895;

    #[test]
    fn lu_solves_a_fixed_3x3_system() {
        let a = DenseMatrix::from_rows(&[
            vec![2.0, 1.0, 1.0],
            vec![4.0, -6.0, 0.0],
            vec![-2.0, 7.0, 2.0],
        ]);
        let lu = DenseLu::factor(&a).expect("nonsingular");
        let x = lu.solve(&[5.0, -2.0, 9.0]);
        let expected = [1.0, 1.0, 2.0];
        for (xi, ei) in x.iter().zip(&expected) {
            assert!((xi - ei).abs() < 1e-12, "got {x:?}");
        }
    }

    #[test]
    fn lu_detects_singular_matrix() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        let err = DenseLu::factor(&a).unwrap_err();
        assert!(matches!(err, Error::SingularFactor(_)), "got {err}");
    }

    #[test]
    fn lu_rejects_rectangular_input() {
        let a = DenseMatrix::zeros(2, 3);
        assert!(DenseLu::factor(&a).is_err());
    }

    #[test]
    fn lu_permutation_round_trip_on_random_matrix() {
        // Deterministic pseudo-random fill; checks A * solve(A, b) == b.
        let n = 8;
        let mut state = 0x2545F4914F6CDD1D_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, next());
            }
            a.set(i, i, a.get(i, i) + 2.0); // keep it comfortably nonsingular
        }
        let b: Vec<f64> = (0..n).map(|i| i as f64 - 3.0).collect();
        let lu = DenseLu::factor(&a).unwrap();
        let x = lu.solve(&b);
        let r = a.mul_vec(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_values_of_identity_are_ones() {
        let sigma = singular_values(&DenseMatrix::identity(4));
        for s in sigma {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_values_of_diagonal_matrix() {
        let mut a = DenseMatrix::zeros(3, 3);
        a.set(0, 0, 3.0);
        a.set(1, 1, -5.0);
        a.set(2, 2, 0.5);
        let sigma = singular_values(&a);
        assert!((sigma[0] - 5.0).abs() < 1e-13);
        assert!((sigma[1] - 3.0).abs() < 1e-13);
        assert!((sigma[2] - 0.5).abs() < 1e-13);
    }

    #[test]
    fn condition_number_of_unit_shear_is_phi_squared() {
        // For [[1, 1], [0, 1]] the condition number is the golden ratio squared.
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        let kappa = condition_number(&a);
        assert!(
            (kappa - PHI * PHI).abs() < 1e-12,
            "kappa = {kappa}, expected {}",
            PHI * PHI
        );
    }

    #[test]
    fn condition_number_of_rank_deficient_matrix_is_infinite() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(condition_number(&a).is_infinite());
    }

    #[test]
    fn matmul_and_transpose_agree_with_hand_computation() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let ab = a.matmul(&b);
        assert_eq!(ab.row(0), &[2.0, 1.0]);
        assert_eq!(ab.row(1), &[4.0, 3.0]);
        let at = a.transpose();
        assert_eq!(at.row(0), &[1.0, 3.0]);
        assert_eq!(at.row(1), &[2.0, 4.0]);
    }
}
