//! Test-matrix generators: the Lotkin matrix for the conditioning study and
//! seeded random block systems for synthetic experiments.

use block_krylov::linalg::dense::DenseMatrix;
use block_krylov::linalg::sparse::SparseMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Lotkin matrix of order `n`: the Hilbert matrix with its first row
/// replaced by ones. Severely ill-conditioned for moderate `n`.
pub fn lotkin_matrix(n: usize) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(n, n);
    for j in 0..n {
        a.set(0, j, 1.0);
    }
    for i in 1..n {
        for j in 0..n {
            a.set(i, j, 1.0 / (i + j + 1) as f64);
        }
    }
    a
}

/// Seeded random block matrix `[[M, A], [B, N]]` of order `m + n`.
///
/// The diagonal blocks are strictly diagonally dominant (`2I` plus noise),
/// so the block-direct preconditioner always applies. The off-diagonal
/// blocks are scaled so the preconditioned operator is a contraction away
/// from the identity and every solver converges well before the shorter
/// side of the search space is exhausted.
pub fn synthetic_block_matrix(seed: u64, m: usize, n: usize) -> SparseMatrix {
    assert!(m > 0 && n > 0, "both blocks need at least one row");
    let mut rng = StdRng::seed_from_u64(seed);
    let size = m + n;
    let off_scale = 0.6 / ((m as f64).sqrt() + (n as f64).sqrt());
    let mut triplets = Vec::with_capacity(size * size);

    let diagonal_block = |triplets: &mut Vec<(usize, usize, f64)>,
                              rng: &mut StdRng,
                              offset: usize,
                              order: usize| {
        let noise = 0.8 / order as f64;
        for i in 0..order {
            for j in 0..order {
                let base = if i == j { 2.0 } else { 0.0 };
                triplets.push((
                    offset + i,
                    offset + j,
                    base + noise * rng.gen_range(-1.0..1.0),
                ));
            }
        }
    };

    diagonal_block(&mut triplets, &mut rng, 0, m);
    for i in 0..m {
        for j in 0..n {
            triplets.push((i, m + j, off_scale * rng.gen_range(-1.0..1.0)));
        }
    }
    for i in 0..n {
        for j in 0..m {
            triplets.push((m + i, j, off_scale * rng.gen_range(-1.0..1.0)));
        }
    }
    diagonal_block(&mut triplets, &mut rng, m, n);

    SparseMatrix::from_triplets(size, size, &triplets).expect("indices are in bounds")
}
