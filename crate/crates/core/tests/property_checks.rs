//! Randomized invariant checks for the small numerical kernels: rotation
//! blocks are isometries, back substitution is backward stable, the sparse
//! product matches a dense reference, and Matrix Market files round-trip.

use block_krylov::gpcmrh::{givens4, RotationBlock};
use block_krylov::linalg::mm::{read_matrix_market, write_matrix_market};
use block_krylov::linalg::packed::{back_substitute, PackedUpperTriangular};
use block_krylov::linalg::sparse::SparseMatrix;
use proptest::prelude::*;

fn rotation_block(angles: [f64; 4]) -> RotationBlock {
    RotationBlock {
        c1: angles[0].cos(),
        s1: angles[0].sin(),
        c2: angles[1].cos(),
        s2: angles[1].sin(),
        c3: angles[2].cos(),
        s3: angles[2].sin(),
        c4: angles[3].cos(),
        s4: angles[3].sin(),
    }
}

/// Random sparse matrix given as shape plus triplets (duplicates allowed;
/// they accumulate) and a compatible input vector.
fn sparse_instance() -> impl Strategy<Value = (usize, usize, Vec<(usize, usize, f64)>, Vec<f64>)> {
    (1usize..=10, 1usize..=10).prop_flat_map(|(m, n)| {
        let entry = (0..m, 0..n, -1.0f64..1.0);
        (
            Just(m),
            Just(n),
            prop::collection::vec(entry, 0..40),
            prop::collection::vec(-1.0f64..1.0, n),
        )
    })
}

proptest! {
    #[test]
    fn rotation_blocks_preserve_the_window_norm(
        angles in prop::array::uniform4(0.0f64..std::f64::consts::TAU),
        x in prop::array::uniform4(-1.0e3f64..1.0e3),
    ) {
        let block = rotation_block(angles);
        let (y1, y2, y3, y4) = givens4(&block, x[0], x[1], x[2], x[3]);
        let before = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let after = (y1 * y1 + y2 * y2 + y3 * y3 + y4 * y4).sqrt();
        prop_assert!((after - before).abs() <= 8.0 * f64::EPSILON * before.max(1.0));
    }

    #[test]
    fn back_substitution_leaves_a_small_residual(
        (order, entries, rhs) in (1usize..=8).prop_flat_map(|k| {
            (
                Just(k),
                prop::collection::vec(-1.0f64..1.0, k * (k + 1) / 2),
                prop::collection::vec(-1.0f64..1.0, k),
            )
        }),
    ) {
        // Lift each diagonal entry away from zero so the triangle stays
        // solvable; the bound below is condition-independent regardless.
        let mut r = PackedUpperTriangular::new();
        let mut shifted = entries;
        let mut pos = 0;
        for j in 0..order {
            pos += j;
            let d = shifted[pos];
            shifted[pos] = d.signum() * (d.abs() + 0.5);
            pos += 1;
        }
        let mut pos = 0;
        for j in 0..order {
            r.push_column(&shifted[pos..pos + j + 1]);
            pos += j + 1;
        }

        let z = back_substitute(&r, &rhs).unwrap();
        let z_inf = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..order {
            let mut res = rhs[i];
            for j in i..order {
                res -= r.get(i, j) * z[j];
            }
            prop_assert!(
                res.abs() <= 1e-12 * (1.0 + z_inf),
                "row {i}: residual {res}"
            );
        }
    }

    #[test]
    fn sparse_product_matches_the_dense_reference(
        (m, n, triplets, x) in sparse_instance(),
    ) {
        let sparse = SparseMatrix::from_triplets(m, n, &triplets).unwrap();
        let dense = sparse.to_dense();
        let y_sparse = sparse.spmv(&x);
        let y_dense = dense.mul_vec(&x);
        for i in 0..m {
            let row_scale: f64 = (0..n).map(|j| dense.get(i, j).abs()).sum();
            prop_assert!(
                (y_sparse[i] - y_dense[i]).abs() <= 4.0 * f64::EPSILON * row_scale.max(1.0),
                "row {i}: {} vs {}",
                y_sparse[i],
                y_dense[i]
            );
        }
    }

    #[test]
    fn matrix_market_files_round_trip_exactly(
        (m, n, triplets, _) in sparse_instance(),
    ) {
        let original = SparseMatrix::from_triplets(m, n, &triplets).unwrap();
        let mut text = Vec::new();
        write_matrix_market(&mut text, &original).unwrap();
        let reread = read_matrix_market(text.as_slice()).unwrap();
        prop_assert_eq!(reread.nrows(), original.nrows());
        prop_assert_eq!(reread.ncols(), original.ncols());
        prop_assert_eq!(reread.row_offsets(), original.row_offsets());
        prop_assert_eq!(reread.col_indices(), original.col_indices());
        prop_assert_eq!(reread.values(), original.values());
    }
}
