//! Dense-reference checks for the incremental QR machinery: the stored
//! rotation blocks must reduce an explicitly assembled block Hessenberg
//! matrix to its packed triangle, and the least-squares coefficients must
//! attain the reported quasi-residual.

use block_krylov::gpcmrh::{assemble_s_columns, givens4, qr_block, QrState, RotationBlock};
use block_krylov::hessenberg::{sim_hess_pivoted_step, SimHessState};
use block_krylov::linalg::dense::DenseMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_dense(rng: &mut StdRng, nrows: usize, ncols: usize) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(nrows, ncols);
    for i in 0..nrows {
        for j in 0..ncols {
            a.set(i, j, rng.gen_range(-1.0..1.0));
        }
    }
    a
}

/// Applies rotation block `j` (rows `2j..2j+3`) in place.
fn apply_block(block: &RotationBlock, j: usize, col: &mut [f64]) {
    let r = 2 * j;
    let (a, b, c, d) = givens4(block, col[r], col[r + 1], col[r + 2], col[r + 3]);
    col[r] = a;
    col[r + 1] = b;
    col[r + 2] = c;
    col[r + 3] = d;
}

/// Runs `k` pivoted reduction steps and returns the QR state together with
/// the densely assembled `S` columns (zero-padded to full height `2k+2`).
fn reduce(
    a: &DenseMatrix,
    b: &DenseMatrix,
    rhs_b: &[f64],
    rhs_c: &[f64],
    lambda: f64,
    mu: f64,
    k: usize,
) -> (QrState, Vec<Vec<f64>>) {
    let mut state = SimHessState::pivoted(rhs_b, rhs_c).unwrap();
    let mut qr = QrState::new(state.beta(), state.gamma());
    let mut s_columns = Vec::new();
    for step in 1..=k {
        let outcome = sim_hess_pivoted_step(&mut state, a, b);
        assert!(!outcome.breakdown(), "unexpected breakdown at step {step}");
        let (odd, even) = assemble_s_columns(
            state.h().column(step - 1),
            state.f().column(step - 1),
            lambda,
            mu,
        );
        for col in [&odd, &even] {
            let mut padded = col.clone();
            padded.resize(2 * k + 2, 0.0);
            s_columns.push(padded);
        }
        qr.append_block_columns(odd, even);
    }
    (qr, s_columns)
}

#[test]
fn stored_rotations_reduce_the_assembled_hessenberg_matrix() {
    let mut rng = StdRng::seed_from_u64(201);
    let a = random_dense(&mut rng, 9, 7);
    let b = random_dense(&mut rng, 7, 9);
    let rhs_b: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let rhs_c: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (lambda, mu) = (2.0, -0.7);
    let k = 4;
    let (qr, s_columns) = reduce(&a, &b, &rhs_b, &rhs_c, lambda, mu, k);

    let s_norm = s_columns
        .iter()
        .flatten()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    let r_dense = qr.r().to_dense();
    assert_eq!(r_dense.nrows(), 2 * k);

    // Sweep every stored block over every dense column; the result must be
    // the triangle stacked on two zero rows.
    let mut err = 0.0;
    for (j, col) in s_columns.iter().enumerate() {
        let mut rotated = col.clone();
        for (blk, block) in qr.rotations().iter().enumerate() {
            apply_block(block, blk, &mut rotated);
        }
        for (i, &v) in rotated.iter().enumerate() {
            let want = if i < 2 * k && i <= j { r_dense.get(i, j) } else { 0.0 };
            err += (v - want) * (v - want);
        }
    }
    let tol = 64.0 * f64::EPSILON * k as f64 * s_norm;
    assert!(err.sqrt() <= tol, "reduction error {} > {tol}", err.sqrt());

    // The same sweep over the right-hand side reproduces the settled and
    // trailing rotated components.
    let state = SimHessState::pivoted(&rhs_b, &rhs_c).unwrap();
    let mut g = vec![0.0; 2 * k + 2];
    g[0] = state.beta();
    g[1] = state.gamma();
    for (blk, block) in qr.rotations().iter().enumerate() {
        apply_block(block, blk, &mut g);
    }
    let g_scale = g[0].hypot(g[1]).max(1.0);
    for (i, &t) in qr.tau().iter().enumerate() {
        assert!((g[i] - t).abs() <= 1e-14 * g_scale, "settled entry {i}");
    }
    let (t1, t2) = qr.tau_tilde();
    assert!((g[2 * k] - t1).abs() <= 1e-14 * g_scale);
    assert!((g[2 * k + 1] - t2).abs() <= 1e-14 * g_scale);
}

#[test]
fn least_squares_coefficients_attain_the_quasi_residual() {
    let mut rng = StdRng::seed_from_u64(202);
    let a = random_dense(&mut rng, 8, 8);
    let b = random_dense(&mut rng, 8, 8);
    let rhs_b: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let rhs_c: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let k = 5;
    let (qr, s_columns) = reduce(&a, &b, &rhs_b, &rhs_c, 1.0, 1.0, k);

    let z = qr.solve_coefficients().unwrap();
    assert_eq!(z.len(), 2 * k);

    let state = SimHessState::pivoted(&rhs_b, &rhs_c).unwrap();
    let mut residual = vec![0.0; 2 * k + 2];
    residual[0] = state.beta();
    residual[1] = state.gamma();
    for (col, &zj) in s_columns.iter().zip(&z) {
        for (ri, &ci) in residual.iter_mut().zip(col) {
            *ri -= ci * zj;
        }
    }
    let attained = residual.iter().map(|v| v * v).sum::<f64>().sqrt();
    let g_norm = state.beta().hypot(state.gamma());
    assert!(
        (attained - qr.quasi_residual()).abs() <= 1e-10 * g_norm,
        "residual {attained} vs quasi {}",
        qr.quasi_residual()
    );
}

#[test]
fn corner_elimination_zeroes_the_targeted_entries() {
    let mut rng = StdRng::seed_from_u64(203);
    for _ in 0..200 {
        let oo = rng.gen_range(-1.0..1.0);
        let oe = rng.gen_range(-1.0..1.0);
        let eo = rng.gen_range(-1.0..1.0);
        let ee = rng.gen_range(-1.0..1.0);
        let h_sub = rng.gen_range(-1.0..1.0);
        let f_sub = rng.gen_range(-1.0..1.0);
        let (block, r_oo, r_oe, r_ee) = qr_block(oo, oe, eo, ee, h_sub, f_sub);

        for (c, s) in [
            (block.c1, block.s1),
            (block.c2, block.s2),
            (block.c3, block.s3),
            (block.c4, block.s4),
        ] {
            assert!((c * c + s * s - 1.0).abs() <= 8.0 * f64::EPSILON);
        }
        assert!(r_oo >= 0.0 && r_ee >= 0.0, "diagonal entries must not be negative");

        // The block acting on the 4-row window must annihilate everything
        // below the triangle in both columns.
        let odd = [oo, eo, 0.0, f_sub];
        let even = [oe, ee, h_sub, 0.0];
        let odd_norm = odd.iter().map(|v| v * v).sum::<f64>().sqrt();
        let even_norm = even.iter().map(|v| v * v).sum::<f64>().sqrt();

        let (y1, y2, y3, y4) = givens4(&block, odd[0], odd[1], odd[2], odd[3]);
        assert!((y1 - r_oo).abs() <= 16.0 * f64::EPSILON * odd_norm.max(1.0));
        for v in [y2, y3, y4] {
            assert!(v.abs() <= 16.0 * f64::EPSILON * odd_norm, "odd leftover {v}");
        }
        let rotated_norm = (y1 * y1 + y2 * y2 + y3 * y3 + y4 * y4).sqrt();
        assert!((rotated_norm - odd_norm).abs() <= 8.0 * f64::EPSILON * odd_norm.max(1.0));

        let (y1, y2, y3, y4) = givens4(&block, even[0], even[1], even[2], even[3]);
        assert!((y1 - r_oe).abs() <= 16.0 * f64::EPSILON * even_norm.max(1.0));
        assert!((y2 - r_ee).abs() <= 16.0 * f64::EPSILON * even_norm.max(1.0));
        for v in [y3, y4] {
            assert!(v.abs() <= 16.0 * f64::EPSILON * even_norm, "even leftover {v}");
        }
    }
}

#[test]
fn degenerate_corner_yields_the_identity_block() {
    let (block, r_oo, r_oe, r_ee) = qr_block(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (c, s) in [
        (block.c1, block.s1),
        (block.c2, block.s2),
        (block.c3, block.s3),
        (block.c4, block.s4),
    ] {
        assert_eq!(c, 1.0);
        assert_eq!(s, 0.0);
    }
    assert_eq!((r_oo, r_oe, r_ee), (0.0, 0.0, 0.0));
}
