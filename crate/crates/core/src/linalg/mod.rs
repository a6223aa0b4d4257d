//! Shared linear-algebra containers and kernels.
//!
//! Everything the solvers touch lives here: CSR sparse matrices with the
//! matrix-vector kernel, dense matrices with LU and singular values for the
//! preconditioner and diagnostics, packed upper-triangular storage for the
//! least-squares factors, append-only column storage for Krylov bases, index
//! permutations for the pivoted reductions, and Matrix Market I/O.

pub mod colstore;
pub mod dense;
pub mod mm;
pub mod packed;
pub mod perm;
pub mod sparse;
pub mod vecops;

pub use colstore::DenseColumnStore;
pub use dense::{condition_number, singular_values, DenseLu, DenseMatrix};
pub use mm::{read_matrix_market, write_matrix_market};
pub use packed::{back_substitute, PackedUpperTriangular};
pub use perm::Permutation;
pub use sparse::SparseMatrix;
