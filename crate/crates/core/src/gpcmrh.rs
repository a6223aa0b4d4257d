//! Inner-product-free quasi-minimal-residual solver for block two-by-two
//! systems.
//!
//! The method expands the pivoted simultaneous Hessenberg bases `D` and `L`
//! and minimizes the coefficient-space residual
//! `|| beta*e1 + gamma*e2 - S_{k+1,k} z ||` over the growing block upper
//! Hessenberg matrix `S_{k+1,k}`, whose columns interleave the two
//! coefficient tables with the diagonal scalings. Each iteration appends two
//! columns to `S`, reduces them with all previously stored rotation blocks,
//! and eliminates the three new subdiagonal entries (plus one fill-in) with
//! four plane rotations grouped in a [`RotationBlock`].
//!
//! Because the basis is unit trapezoidal rather than orthonormal, the
//! minimized quantity is a quasi-residual; [`residual_bound`] converts it
//! into a certified upper bound on the true residual norm, which drives the
//! stopping test.

use crate::error::{Error, Result};
use crate::hessenberg::{BlockBasisProcess, SimHessState};
use crate::linalg::packed::{back_substitute, PackedUpperTriangular};
use crate::linalg::vecops;
use crate::operators::BlockSystem;

/// The four plane rotations generated by one block QR update.
///
/// Rotation `i` acts on the row pairs documented in [`givens4`]; all four
/// satisfy `c^2 + s^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationBlock {
    pub c1: f64,
    pub s1: f64,
    pub c2: f64,
    pub s2: f64,
    pub c3: f64,
    pub s3: f64,
    pub c4: f64,
    pub s4: f64,
}

impl RotationBlock {
    /// The identity block (all cosines 1, all sines 0).
    pub fn identity() -> Self {
        Self {
            c1: 1.0,
            s1: 0.0,
            c2: 1.0,
            s2: 0.0,
            c3: 1.0,
            s3: 0.0,
            c4: 1.0,
            s4: 0.0,
        }
    }
}

/// Applies the four rotations of `block` to the quadruple
/// `(x1, x2, x3, x4)` in their fixed order: rows 1&4, then 1&2, then 2&4,
/// then 2&3. Preserves the Euclidean norm of the 4-vector.
pub fn givens4(block: &RotationBlock, x1: f64, x2: f64, x3: f64, x4: f64) -> (f64, f64, f64, f64) {
    let (mut y1, mut y2, mut y4) = (x1, x2, x4);

    let t = block.c1 * y1 + block.s1 * y4;
    y4 = block.c1 * y4 - block.s1 * y1;
    y1 = t;

    let t = block.c2 * y1 + block.s2 * y2;
    y2 = block.c2 * y2 - block.s2 * y1;
    y1 = t;

    let t = block.c3 * y2 + block.s3 * y4;
    y4 = block.c3 * y4 - block.s3 * y2;
    y2 = t;

    // The third slot only participates in the last rotation.
    let t = block.c4 * y2 + block.s4 * x3;
    let y3 = block.c4 * x3 - block.s4 * y2;
    y2 = t;

    (y1, y2, y3, y4)
}

/// Cosine/sine pair mapping `(a, b)` to `(hypot(a, b), 0)`; the degenerate
/// all-zero pair yields the identity rotation.
pub(crate) fn plane_rotation(a: f64, b: f64) -> (f64, f64, f64) {
    let r = a.hypot(b);
    if r == 0.0 {
        (1.0, 0.0, 0.0)
    } else {
        (a / r, b / r, r)
    }
}

/// Eliminates the three subdiagonal entries (and one fill-in) introduced by
/// a new pair of `S` columns.
///
/// Inputs are the four entries of the reduced 2x2 corner (`corner_oo` is the
/// odd-row/odd-column entry, `corner_oe` odd-row/even-column, and so on)
/// together with the two fresh subdiagonal coefficients `h_sub` and `f_sub`.
/// The four rotations zero, in order: `f_sub`, `corner_eo`, the fill-in
/// created below the even column, and `h_sub`. Returns the rotation block
/// and the three surviving triangle entries; the two diagonal entries are
/// nonnegative hypotenuses.
pub fn qr_block(
    corner_oo: f64,
    corner_oe: f64,
    corner_eo: f64,
    corner_ee: f64,
    h_sub: f64,
    f_sub: f64,
) -> (RotationBlock, f64, f64, f64) {
    // Rotation 1 (rows odd & last): zero f_sub against the odd diagonal.
    let (c1, s1, hat_oo) = plane_rotation(corner_oo, f_sub);
    let hat_oe = c1 * corner_oe;
    let fill = -s1 * corner_oe;

    // Rotation 2 (rows odd & even): zero the even-row/odd-column entry.
    let (c2, s2, r_oo) = plane_rotation(hat_oo, corner_eo);
    let r_oe = c2 * hat_oe + s2 * corner_ee;
    let hat_ee = c2 * corner_ee - s2 * hat_oe;

    // Rotation 3 (rows even & last): zero the fill-in.
    let (c3, s3, ring_ee) = plane_rotation(hat_ee, fill);

    // Rotation 4 (rows even & next-odd): zero h_sub.
    let (c4, s4, r_ee) = plane_rotation(ring_ee, h_sub);

    let block = RotationBlock {
        c1,
        s1,
        c2,
        s2,
        c3,
        s3,
        c4,
        s4,
    };
    (block, r_oo, r_oe, r_ee)
}

/// Builds the two new columns (indices `2k-1` and `2k`, length `2k+2`) of
/// the block upper Hessenberg matrix `S_{k+1,k}` from the step-`k`
/// coefficient columns.
///
/// `h_col` and `f_col` carry the `k+1` coefficients of their reduction step.
/// The odd column receives the `f` coefficients on even rows plus `lambda`
/// on its diagonal; the even column receives the `h` coefficients on odd
/// rows plus `mu`.
pub fn assemble_s_columns(
    h_col: &[f64],
    f_col: &[f64],
    lambda: f64,
    mu: f64,
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(h_col.len(), f_col.len(), "coefficient columns differ in length");
    assert!(h_col.len() >= 2, "step columns carry at least two coefficients");
    let k = h_col.len() - 1;
    let mut odd = vec![0.0; 2 * k + 2];
    let mut even = vec![0.0; 2 * k + 2];
    for i in 0..k {
        odd[2 * i + 1] = f_col[i];
        even[2 * i] = h_col[i];
    }
    odd[2 * k - 2] = lambda;
    odd[2 * k + 1] = f_col[k];
    even[2 * k - 1] = mu;
    even[2 * k] = h_col[k];
    (odd, even)
}

/// Upper bound on the true residual norm implied by the quasi-residual pair
/// `(tau1, tau2)` after `k` steps on an `m + n` system:
/// `sqrt(((2*max(m,n) - k) * (k + 1)) / 2) * sqrt(tau1^2 + tau2^2)`.
///
/// The factor counts the nonzero entries the non-orthonormal basis can
/// contribute; with entries bounded by one it majorizes the basis norm.
pub fn residual_bound(tau1: f64, tau2: f64, m: usize, n: usize, k: usize) -> f64 {
    assert!(k >= 1, "residual bound needs at least one completed step");
    let dim = m.max(n) as f64;
    let factor = (((2.0 * dim - k as f64) * (k as f64 + 1.0)) / 2.0).sqrt();
    factor * tau1.hypot(tau2)
}

// ============================================================================
// Incremental QR of the block Hessenberg matrix
// ============================================================================

/// Incrementally maintained QR factorization of `S_{2(k+1), 2k}` together
/// with the rotated right-hand side.
///
/// Holds the packed triangle `R_k`, the stored rotation blocks, the settled
/// components `tau` of the rotated right-hand side, and the live trailing
/// pair `tau_tilde` whose norm is the current quasi-residual.
#[derive(Debug, Clone)]
pub struct QrState {
    r: PackedUpperTriangular,
    rotations: Vec<RotationBlock>,
    tau: Vec<f64>,
    tau_tilde: (f64, f64),
}

impl QrState {
    /// Starts from the right-hand side `beta*e1 + gamma*e2`.
    pub fn new(beta: f64, gamma: f64) -> Self {
        Self {
            r: PackedUpperTriangular::new(),
            rotations: Vec::new(),
            tau: Vec::new(),
            tau_tilde: (beta, gamma),
        }
    }

    /// Number of absorbed block-column pairs.
    pub fn steps(&self) -> usize {
        self.rotations.len()
    }

    /// The packed triangular factor (order `2 * steps`).
    pub fn r(&self) -> &PackedUpperTriangular {
        &self.r
    }

    /// The stored rotation blocks, one per step.
    pub fn rotations(&self) -> &[RotationBlock] {
        &self.rotations
    }

    /// Settled components of the rotated right-hand side.
    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    /// Live trailing pair of the rotated right-hand side.
    pub fn tau_tilde(&self) -> (f64, f64) {
        self.tau_tilde
    }

    /// Norm of the trailing pair: the current quasi-residual.
    pub fn quasi_residual(&self) -> f64 {
        self.tau_tilde.0.hypot(self.tau_tilde.1)
    }

    /// Absorbs the two new `S` columns of step `k = steps() + 1`: sweeps all
    /// previous rotation blocks over them, generates the step's
    /// [`RotationBlock`] via [`qr_block`], appends the two new triangle
    /// columns, and rotates the right-hand side. Returns the updated
    /// quasi-residual.
    ///
    /// # Panics
    /// Panics unless both columns have length `2 * steps() + 4`.
    pub fn append_block_columns(&mut self, mut odd: Vec<f64>, mut even: Vec<f64>) -> f64 {
        let k = self.rotations.len() + 1;
        assert_eq!(odd.len(), 2 * k + 2, "odd column has the wrong length");
        assert_eq!(even.len(), 2 * k + 2, "even column has the wrong length");

        // Reduce the new columns with the rotations of steps 1..k-1. Block j
        // (0-based) touches rows 2j..2j+3.
        for (j, block) in self.rotations.iter().enumerate() {
            let rows = (2 * j, 2 * j + 1, 2 * j + 2, 2 * j + 3);
            let (a, b, c, d) = givens4(block, odd[rows.0], odd[rows.1], odd[rows.2], odd[rows.3]);
            odd[rows.0] = a;
            odd[rows.1] = b;
            odd[rows.2] = c;
            odd[rows.3] = d;
            let (a, b, c, d) =
                givens4(block, even[rows.0], even[rows.1], even[rows.2], even[rows.3]);
            even[rows.0] = a;
            even[rows.1] = b;
            even[rows.2] = c;
            even[rows.3] = d;
        }

        let (block, r_oo, r_oe, r_ee) = qr_block(
            odd[2 * k - 2],
            even[2 * k - 2],
            odd[2 * k - 1],
            even[2 * k - 1],
            even[2 * k],
            odd[2 * k + 1],
        );

        let mut odd_col = odd[..2 * k - 2].to_vec();
        odd_col.push(r_oo);
        self.r.push_column(&odd_col);
        let mut even_col = even[..2 * k - 2].to_vec();
        even_col.push(r_oe);
        even_col.push(r_ee);
        self.r.push_column(&even_col);

        let (t1, t2, next1, next2) =
            givens4(&block, self.tau_tilde.0, self.tau_tilde.1, 0.0, 0.0);
        self.tau.push(t1);
        self.tau.push(t2);
        self.tau_tilde = (next1, next2);
        self.rotations.push(block);

        self.quasi_residual()
    }

    /// Solves `R z = tau` for the current least-squares coefficients.
    pub fn solve_coefficients(&self) -> Result<Vec<f64>> {
        back_substitute(&self.r, &self.tau)
    }
}

// ============================================================================
// Solve driver shared by the two block methods
// ============================================================================

/// Stopping and tracking knobs shared by every solver in the crate.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Stopping tolerance; relative to the initial residual scale unless
    /// `absolute_tol` is set.
    pub tol: f64,
    /// Maximum number of iterations.
    pub maxit: usize,
    /// Recompute the true residual (and solution norm) every iteration.
    pub track_true_residual: bool,
    /// Interpret `tol` as an absolute threshold on the residual estimate.
    pub absolute_tol: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            maxit: 600,
            track_true_residual: false,
            absolute_tol: false,
        }
    }
}

/// How a solve run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The residual estimate fell below the threshold.
    Converged,
    /// The iteration budget ran out first.
    MaxIterations,
    /// The basis process broke down on the first-block side.
    BreakdownD,
    /// The basis process broke down on the second-block side.
    BreakdownL,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterations => "maxit",
            SolveStatus::BreakdownD => "breakdown_d",
            SolveStatus::BreakdownL => "breakdown_l",
        };
        f.write_str(name)
    }
}

/// Everything a solve run produced.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Number of completed iterations.
    pub iterations: usize,
    /// Terminal condition of the run.
    pub status: SolveStatus,
    /// First solution block.
    pub x: Vec<f64>,
    /// Second solution block.
    pub y: Vec<f64>,
    /// Residual-norm estimate used for stopping, one entry per iteration.
    pub rho_history: Vec<f64>,
    /// Quasi-residual (trailing rotated right-hand side norm) per iteration.
    pub quasi_history: Vec<f64>,
    /// True residual norms, present when tracking was requested.
    pub true_residual_history: Option<Vec<f64>>,
    /// Coefficient-vector norms `||z_k||`, present when tracking was
    /// requested.
    pub z_norm_history: Option<Vec<f64>>,
}

/// Euclidean norm of `[b; c] - K [x; y]` for the given system.
pub fn true_residual(sys: &BlockSystem, x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), sys.m(), "true_residual: x length mismatch");
    assert_eq!(y.len(), sys.n(), "true_residual: y length mismatch");
    let mut u = Vec::with_capacity(sys.size());
    u.extend_from_slice(x);
    u.extend_from_slice(y);
    let ku = sys.apply_block(&u);
    let g = sys.rhs_stacked();
    let mut acc = 0.0;
    for (gi, ki) in g.iter().zip(&ku) {
        let d = gi - ki;
        acc += d * d;
    }
    acc.sqrt()
}

/// Accumulates `x = sum z[2i] * x_col(i)` and `y = sum z[2i+1] * y_col(i)`.
fn assemble_solution(
    basis: &dyn BlockBasisProcess,
    z: &[f64],
    m: usize,
    n: usize,
) -> (Vec<f64>, Vec<f64>) {
    let k = z.len() / 2;
    let mut x = vec![0.0; m];
    let mut y = vec![0.0; n];
    for i in 0..k {
        vecops::axpy(z[2 * i], basis.x_column(i), &mut x);
        vecops::axpy(z[2 * i + 1], basis.y_column(i), &mut y);
    }
    (x, y)
}

/// Rejects non-finite or negative tolerances and a zero iteration budget.
pub(crate) fn validate_options(opts: &SolveOptions) -> Result<()> {
    if !(opts.tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be nonnegative, got {}",
            opts.tol
        )));
    }
    if opts.maxit == 0 {
        return Err(Error::InvalidInput("maxit must be at least 1".into()));
    }
    Ok(())
}

/// Iterates a basis process against the incremental QR until the residual
/// estimate selected by `estimate` meets the threshold, the basis breaks
/// down, or the iteration budget runs out.
pub(crate) fn run_block_solver(
    sys: &BlockSystem,
    basis: &mut dyn BlockBasisProcess,
    opts: &SolveOptions,
    estimate: impl Fn(usize, &QrState) -> f64,
) -> Result<SolveReport> {
    validate_options(opts)?;
    let (m, n) = (sys.m(), sys.n());
    let mut qr = QrState::new(basis.beta(), basis.gamma());
    let threshold = if opts.absolute_tol {
        opts.tol
    } else {
        opts.tol * basis.beta().hypot(basis.gamma())
    };

    let mut rho_history = Vec::new();
    let mut quasi_history = Vec::new();
    let mut true_history = opts.track_true_residual.then(Vec::new);
    let mut z_norms = opts.track_true_residual.then(Vec::new);
    let mut status = SolveStatus::MaxIterations;
    let mut iterations = 0;

    for k in 1..=opts.maxit {
        let outcome = basis.advance(sys.a(), sys.b());
        let (odd, even) = assemble_s_columns(
            basis.h_column(k - 1),
            basis.f_column(k - 1),
            sys.lambda(),
            sys.mu(),
        );
        let quasi = qr.append_block_columns(odd, even);
        let rho = estimate(k, &qr);
        iterations = k;
        quasi_history.push(quasi);
        rho_history.push(rho);

        if let (Some(trues), Some(norms)) = (true_history.as_mut(), z_norms.as_mut()) {
            let z = qr.solve_coefficients()?;
            norms.push(vecops::norm2(&z));
            let (x, y) = assemble_solution(basis, &z, m, n);
            trues.push(true_residual(sys, &x, &y));
        }

        if rho <= threshold {
            status = SolveStatus::Converged;
            break;
        }
        if outcome.breakdown() {
            status = if outcome.breakdown_d {
                SolveStatus::BreakdownD
            } else {
                SolveStatus::BreakdownL
            };
            break;
        }
    }

    let z = qr.solve_coefficients()?;
    let (x, y) = assemble_solution(basis, &z, m, n);
    Ok(SolveReport {
        iterations,
        status,
        x,
        y,
        rho_history,
        quasi_history,
        true_residual_history: true_history,
        z_norm_history: z_norms,
    })
}

/// Solves a block two-by-two system with the inner-product-free
/// quasi-minimal-residual method over the pivoted simultaneous Hessenberg
/// bases. Stops when [`residual_bound`] falls below `tol` times the initial
/// residual scale (or below `tol` itself with `absolute_tol`).
///
/// On breakdown before convergence the report carries the best current
/// least-squares solution and the breakdown status.
pub fn gpcmrh_solve(sys: &BlockSystem, opts: &SolveOptions) -> Result<SolveReport> {
    let mut basis = SimHessState::pivoted(sys.rhs_b(), sys.rhs_c())?;
    let (m, n) = (sys.m(), sys.n());
    run_block_solver(sys, &mut basis, opts, |k, qr| {
        let (t1, t2) = qr.tau_tilde();
        residual_bound(t1, t2, m, n, k)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sparse::SparseMatrix;
    use crate::operators::ZeroOperator;
    use std::sync::Arc;

    #[test]
    fn givens4_with_identity_rotations_is_identity() {
        let block = RotationBlock::identity();
        assert_eq!(givens4(&block, 1.0, 2.0, 3.0, 4.0), (1.0, 2.0, 3.0, 4.0));
    }

    #[test]
    fn givens4_quarter_turn_on_first_rotation() {
        let block = RotationBlock {
            c1: 0.0,
            s1: 1.0,
            ..RotationBlock::identity()
        };
        assert_eq!(givens4(&block, 1.0, 2.0, 3.0, 4.0), (4.0, 2.0, 3.0, -1.0));
    }

    #[test]
    fn qr_block_on_triangular_input_is_identity() {
        let (block, r_oo, r_oe, r_ee) = qr_block(1.0, 0.0, 0.0, 1.0, 0.0, 0.0);
        assert_eq!(block, RotationBlock::identity());
        assert_eq!((r_oo, r_oe, r_ee), (1.0, 0.0, 1.0));
    }

    #[test]
    fn qr_block_three_four_five_hypotenuse() {
        let (block, r_oo, r_oe, r_ee) = qr_block(3.0, 0.0, 0.0, 1.0, 0.0, 4.0);
        assert!((block.c1 - 0.6).abs() < 1e-15);
        assert!((block.s1 - 0.8).abs() < 1e-15);
        assert!((r_oo - 5.0).abs() < 1e-15);
        assert_eq!(r_oe, 0.0);
        assert!((r_ee - 1.0).abs() < 1e-15);
    }

    #[test]
    fn qr_block_degenerate_zero_input_gives_identity_rotations() {
        let (block, r_oo, r_oe, r_ee) = qr_block(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(block, RotationBlock::identity());
        assert_eq!((r_oo, r_oe, r_ee), (0.0, 0.0, 0.0));
    }

    #[test]
    fn qr_block_zeroes_the_assembled_corner() {
        // Apply the returned rotations to both assembled columns and verify
        // the subdiagonal entries vanish while the diagonal matches.
        let inputs = (1.3, -0.7, 2.1, 0.4, -1.9, 0.8);
        let (block, r_oo, r_oe, r_ee) =
            qr_block(inputs.0, inputs.1, inputs.2, inputs.3, inputs.4, inputs.5);
        let col1 = givens4(&block, inputs.0, inputs.2, 0.0, inputs.5);
        let col2 = givens4(&block, inputs.1, inputs.3, inputs.4, 0.0);
        assert!((col1.0 - r_oo).abs() < 1e-14);
        assert!(col1.1.abs() < 1e-14 && col1.2.abs() < 1e-14 && col1.3.abs() < 1e-14);
        assert!((col2.0 - r_oe).abs() < 1e-14);
        assert!((col2.1 - r_ee).abs() < 1e-14);
        assert!(col2.2.abs() < 1e-14 && col2.3.abs() < 1e-14);
        assert!(r_oo >= 0.0 && r_ee >= 0.0, "diagonal must be nonnegative");
    }

    #[test]
    fn assemble_s_columns_first_step_layout() {
        let (odd, even) = assemble_s_columns(&[7.0, 11.0], &[8.0, 13.0], 2.0, 3.0);
        assert_eq!(odd, vec![2.0, 8.0, 0.0, 13.0]);
        assert_eq!(even, vec![7.0, 3.0, 11.0, 0.0]);
    }

    #[test]
    fn assemble_s_columns_zero_scalings_leave_only_coefficients() {
        let (odd, even) = assemble_s_columns(&[1.0, 2.0], &[3.0, 4.0], 0.0, 0.0);
        assert_eq!(odd, vec![0.0, 3.0, 0.0, 4.0]);
        assert_eq!(even, vec![1.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn residual_bound_examples() {
        assert_eq!(residual_bound(0.0, 0.0, 5, 5, 3), 0.0);
        // m = n = 1, k = 1: factor sqrt((2-1)*2/2) = 1.
        assert!((residual_bound(3.0, 4.0, 1, 1, 1) - 5.0).abs() < 1e-15);
        // m = 100, n = 80, k = 10: factor sqrt((200-10)*11/2) = sqrt(1045).
        let expected = 1045.0_f64.sqrt();
        assert!((residual_bound(1.0, 0.0, 100, 80, 10) - expected).abs() < 1e-12);
    }

    #[test]
    fn identity_system_converges_in_one_iteration() {
        // A = B = 0, lambda = mu = 1: K is the identity, so x = b, y = c.
        // Dyadic right-hand sides make the scaling round-trips exact.
        let sys = BlockSystem::new(
            1.0,
            1.0,
            Arc::new(ZeroOperator::new(2, 1)),
            Arc::new(ZeroOperator::new(1, 2)),
            vec![4.0, 2.0],
            vec![8.0],
        )
        .unwrap();
        let report = gpcmrh_solve(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Converged);
        assert_eq!(report.iterations, 1);
        assert_eq!(report.x, vec![4.0, 2.0]);
        assert_eq!(report.y, vec![8.0]);
        assert!(report.quasi_history[0] <= 1e-14);
    }

    #[test]
    fn anti_diagonal_1x1_system_is_solved_exactly_at_k1() {
        // lambda = mu = 0, A = [2], B = [3], b = [4], c = [6]:
        // the exact solution is x = c/B = 2, y = b/A = 2.
        let sys = BlockSystem::new(
            0.0,
            0.0,
            Arc::new(SparseMatrix::from_triplets(1, 1, &[(0, 0, 2.0)]).unwrap()),
            Arc::new(SparseMatrix::from_triplets(1, 1, &[(0, 0, 3.0)]).unwrap()),
            vec![4.0],
            vec![6.0],
        )
        .unwrap();
        let report = gpcmrh_solve(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Converged);
        assert_eq!(report.iterations, 1);
        assert!((report.x[0] - 2.0).abs() < 1e-14, "x = {:?}", report.x);
        assert!((report.y[0] - 2.0).abs() < 1e-14, "y = {:?}", report.y);
        assert!(true_residual(&sys, &report.x, &report.y) < 1e-13);
    }

    #[test]
    fn true_residual_of_zero_iterate_is_rhs_norm() {
        let sys = BlockSystem::new(
            1.0,
            1.0,
            Arc::new(ZeroOperator::new(1, 1)),
            Arc::new(ZeroOperator::new(1, 1)),
            vec![3.0],
            vec![4.0],
        )
        .unwrap();
        assert!((true_residual(&sys, &[0.0], &[0.0]) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn zero_rhs_is_rejected() {
        let sys = BlockSystem::new(
            1.0,
            1.0,
            Arc::new(ZeroOperator::new(1, 1)),
            Arc::new(ZeroOperator::new(1, 1)),
            vec![0.0],
            vec![1.0],
        )
        .unwrap();
        assert!(gpcmrh_solve(&sys, &SolveOptions::default()).is_err());
    }

    #[test]
    fn zero_maxit_is_rejected() {
        let sys = BlockSystem::new(
            1.0,
            1.0,
            Arc::new(ZeroOperator::new(1, 1)),
            Arc::new(ZeroOperator::new(1, 1)),
            vec![1.0],
            vec![1.0],
        )
        .unwrap();
        let opts = SolveOptions {
            maxit: 0,
            ..SolveOptions::default()
        };
        assert!(gpcmrh_solve(&sys, &opts).is_err());
    }

    #[test]
    fn report_histories_match_iteration_count() {
        let sys = BlockSystem::new(
            1.0,
            -1.0,
            Arc::new(SparseMatrix::from_triplets(2, 2, &[(0, 0, 0.3), (1, 1, 0.2)]).unwrap()),
            Arc::new(SparseMatrix::from_triplets(2, 2, &[(0, 1, 0.4), (1, 0, 0.1)]).unwrap()),
            vec![1.0, 2.0],
            vec![3.0, 4.0],
        )
        .unwrap();
        let opts = SolveOptions {
            track_true_residual: true,
            ..SolveOptions::default()
        };
        let report = gpcmrh_solve(&sys, &opts).unwrap();
        assert_eq!(report.rho_history.len(), report.iterations);
        assert_eq!(report.quasi_history.len(), report.iterations);
        assert_eq!(
            report.true_residual_history.as_ref().unwrap().len(),
            report.iterations
        );
        assert_eq!(report.z_norm_history.as_ref().unwrap().len(), report.iterations);
    }
}
