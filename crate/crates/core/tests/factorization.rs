//! Factorization-level checks of the reduction processes on random
//! instances: the two-sided Hessenberg identities, the structural guarantees
//! of pivoting, and agreement between the spaces spanned by the pivoted and
//! orthogonal bases.

use block_krylov::hessenberg::{
    orth_hess_init, orth_hess_step, sim_hess_pivoted_step, sim_hess_step, SimHessState,
};
use block_krylov::linalg::colstore::DenseColumnStore;
use block_krylov::linalg::dense::{singular_values, DenseMatrix};
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

/// Zeroes roughly the given fraction of entries, keeping the matrix generic.
fn sparsify(rng: &mut StdRng, a: &mut DenseMatrix, keep: f64) {
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if rng.gen_range(0.0..1.0) > keep {
                a.set(i, j, 0.0);
            }
        }
    }
}

fn random_vec(rng: &mut StdRng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// `||A L_k - D_{k+1} H_{k+1,k}||_F` against the shared tolerance model
/// `64 * eps * k * ||A||_F * ||L_k||_F`.
fn check_identity(
    label: &str,
    op: &DenseMatrix,
    basis_in: &DenseColumnStore,
    basis_out: &DenseColumnStore,
    table: &block_krylov::hessenberg::HessenbergColumns,
    k: usize,
) {
    let left = op.matmul(&basis_in.to_dense_prefix(k));
    let right = basis_out.to_dense_prefix(k + 1).matmul(&table.to_dense(k));
    let err = left.sub(&right).frobenius_norm();
    let tol = 64.0
        * f64::EPSILON
        * k as f64
        * op.frobenius_norm()
        * basis_in.to_dense_prefix(k).frobenius_norm();
    assert!(err <= tol, "{label}: identity error {err} exceeds {tol}");
}

#[test]
fn pivoted_identities_hold_on_random_instances() {
    let mut rng = StdRng::seed_from_u64(71);
    let shapes = [(9usize, 7usize), (7, 9), (10, 10), (14, 8)];
    for (case, &(m, n)) in shapes.iter().enumerate() {
        let mut a = random_dense(&mut rng, m, n);
        let mut b = random_dense(&mut rng, n, m);
        if case % 2 == 1 {
            sparsify(&mut rng, &mut a, 0.4);
            sparsify(&mut rng, &mut b, 0.4);
        }
        let rhs_b = random_vec(&mut rng, m);
        let rhs_c = random_vec(&mut rng, n);
        let mut state = SimHessState::pivoted(&rhs_b, &rhs_c).unwrap();
        let k = m.min(n) - 1;
        for step in 0..k {
            let outcome = sim_hess_pivoted_step(&mut state, &a, &b);
            assert!(
                !outcome.breakdown(),
                "case {case}: unexpected breakdown at step {}",
                step + 1
            );
        }
        check_identity(
            &format!("case {case}, A side"),
            &a,
            state.l(),
            state.d(),
            state.h(),
            k,
        );
        check_identity(
            &format!("case {case}, B side"),
            &b,
            state.d(),
            state.l(),
            state.f(),
            k,
        );
    }
}

#[test]
fn pivoted_bases_are_unit_trapezoidal_under_their_permutations() {
    let mut rng = StdRng::seed_from_u64(72);
    let (m, n) = (11, 9);
    let a = random_dense(&mut rng, m, n);
    let b = random_dense(&mut rng, n, m);
    let rhs_b = random_vec(&mut rng, m);
    let rhs_c = random_vec(&mut rng, n);
    let mut state = SimHessState::pivoted(&rhs_b, &rhs_c).unwrap();
    for _ in 0..n - 1 {
        assert!(!sim_hess_pivoted_step(&mut state, &a, &b).breakdown());
    }

    for (store, perm, side) in [
        (state.d(), state.p(), "D"),
        (state.l(), state.q(), "L"),
    ] {
        for j in 0..store.ncols() {
            let col = store.column(j);
            assert_eq!(col[perm.get(j)], 1.0, "{side}: diagonal of column {j}");
            for i in 0..j {
                assert_eq!(
                    col[perm.get(i)],
                    0.0,
                    "{side}: entry ({i}, {j}) above the permuted diagonal"
                );
            }
            for &v in col {
                assert!(v.abs() <= 1.0 + 1e-12, "{side}: entry {v} out of range");
            }
        }
    }
}

#[test]
fn unpivoted_identities_hold_while_the_process_survives() {
    let mut rng = StdRng::seed_from_u64(73);
    let (m, n) = (10, 8);
    let a = random_dense(&mut rng, m, n);
    let b = random_dense(&mut rng, n, m);
    let rhs_b = random_vec(&mut rng, m);
    let rhs_c = random_vec(&mut rng, n);
    let mut state = SimHessState::unpivoted(&rhs_b, &rhs_c).unwrap();
    let mut completed = 0;
    for _ in 0..n - 1 {
        if sim_hess_step(&mut state, &a, &b).breakdown() {
            break;
        }
        completed += 1;
    }
    assert!(completed >= 1, "random instance must survive at least one step");
    check_identity("A side", &a, state.l(), state.d(), state.h(), completed);
    check_identity("B side", &b, state.d(), state.l(), state.f(), completed);
}

#[test]
fn orthogonal_process_stays_orthonormal_and_consistent() {
    let mut rng = StdRng::seed_from_u64(74);
    let (m, n) = (12, 9);
    let a = random_dense(&mut rng, m, n);
    let b = random_dense(&mut rng, n, m);
    let rhs_b = random_vec(&mut rng, m);
    let rhs_c = random_vec(&mut rng, n);
    let mut state = orth_hess_init(&rhs_b, &rhs_c).unwrap();
    let k = 6;
    for _ in 0..k {
        assert!(!orth_hess_step(&mut state, &a, &b).breakdown());
    }

    for (store, side) in [(state.v(), "V"), (state.u(), "U")] {
        let q = store.to_dense();
        let gram = q.transpose().matmul(&q);
        let err = gram
            .sub(&DenseMatrix::identity(gram.nrows()))
            .frobenius_norm();
        assert!(err <= 1e-10 * k as f64, "{side}: Gram error {err}");
    }
    check_identity("A side", &a, state.u(), state.v(), state.h(), k);
    check_identity("B side", &b, state.v(), state.u(), state.f(), k);
}

/// Orthonormalizes the first `k` stored columns with modified Gram-Schmidt.
fn orthonormalize_prefix(store: &DenseColumnStore, k: usize) -> DenseMatrix {
    let nrows = store.nrows();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut w = store.column(j).to_vec();
        for prev in &cols {
            let coeff: f64 = prev.iter().zip(&w).map(|(p, x)| p * x).sum();
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= coeff * pi;
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm > 1e-12, "prefix is numerically rank deficient");
        for wi in &mut w {
            *wi /= norm;
        }
        cols.push(w);
    }
    let mut q = DenseMatrix::zeros(nrows, k);
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            q.set(i, j, v);
        }
    }
    q
}

#[test]
fn pivoted_and_orthogonal_bases_span_the_same_spaces() {
    // Both processes expand the same nested pair of spaces; only the basis
    // representation differs. Compare via principal angles: with Q1, Q2
    // orthonormal bases of equal-dimensional spaces, all singular values of
    // Q1^T Q2 equal 1 exactly when the spaces coincide.
    let mut rng = StdRng::seed_from_u64(75);
    let (m, n) = (8, 6);
    let a = random_dense(&mut rng, m, n);
    let b = random_dense(&mut rng, n, m);
    let rhs_b = random_vec(&mut rng, m);
    let rhs_c = random_vec(&mut rng, n);

    let mut pivoted = SimHessState::pivoted(&rhs_b, &rhs_c).unwrap();
    let mut orth = orth_hess_init(&rhs_b, &rhs_c).unwrap();
    let k = 4;
    for _ in 0..k {
        assert!(!sim_hess_pivoted_step(&mut pivoted, &a, &b).breakdown());
        assert!(!orth_hess_step(&mut orth, &a, &b).breakdown());
    }

    for (lhs, rhs, side) in [
        (pivoted.d(), orth.v(), "first-block"),
        (pivoted.l(), orth.u(), "second-block"),
    ] {
        for dim in 1..=k + 1 {
            let q1 = orthonormalize_prefix(lhs, dim);
            let q2 = orthonormalize_prefix(rhs, dim);
            let overlap = q1.transpose().matmul(&q2);
            let sigma = singular_values(&overlap);
            let min = sigma.last().copied().unwrap();
            assert!(
                (min - 1.0).abs() <= 1e-8,
                "{side} spaces differ at dimension {dim}: min cosine {min}"
            );
        }
    }
}
