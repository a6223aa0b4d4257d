//! GMRES and CMRH baselines applied to the assembled `(m + n)`-dimensional
//! operator.
//!
//! Where the block methods exploit the two-by-two structure, these solvers
//! treat the coefficient matrix as a whole: [`MonolithicOperator`] views a
//! [`BlockSystem`] as one square operator on the stacked space, and the two
//! solvers build a single Krylov basis of it. GMRES orthonormalizes with
//! modified Gram-Schmidt and reads the exact residual off the rotated
//! right-hand side; CMRH runs the single-operator pivoted Hessenberg
//! reduction — the one-sided specialization of the process behind the block
//! solver — and reports a quasi-residual with the matching certified bound.
//!
//! Both share [`SolveOptions`] and [`SolveReport`] with the block methods;
//! in the report, the solution is split back into its `x` and `y` blocks. A
//! basis breakdown on the single stacked process is reported as
//! [`SolveStatus::BreakdownD`].

use crate::error::{Error, Result};
use crate::gpcmrh::{
    plane_rotation, residual_bound, validate_options, SolveOptions, SolveReport, SolveStatus,
};
use crate::hessenberg::{eliminate_and_extend, orthogonalize_and_extend, SideResult};
use crate::linalg::colstore::DenseColumnStore;
use crate::linalg::packed::{back_substitute, PackedUpperTriangular};
use crate::linalg::perm::Permutation;
use crate::linalg::vecops;
use crate::operators::{BlockSystem, LinearOperator};

/// A block system viewed as one square operator on the stacked space.
#[derive(Debug, Clone, Copy)]
pub struct MonolithicOperator<'a> {
    sys: &'a BlockSystem,
}

impl<'a> MonolithicOperator<'a> {
    /// Wraps a block system.
    pub fn new(sys: &'a BlockSystem) -> Self {
        Self { sys }
    }

    /// The underlying block system.
    pub fn system(&self) -> &'a BlockSystem {
        self.sys
    }

    /// Order of the stacked operator, `m + n`.
    pub fn size(&self) -> usize {
        self.sys.size()
    }

    /// Applies the full coefficient matrix to a stacked vector.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.sys.apply_block(u)
    }
}

impl LinearOperator for MonolithicOperator<'_> {
    fn nrows(&self) -> usize {
        self.size()
    }

    fn ncols(&self) -> usize {
        self.size()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(y.len(), self.size(), "stacked output length mismatch");
        y.copy_from_slice(&self.sys.apply_block(x));
    }
}

// ============================================================================
// Scalar Givens least squares on a (k+1) x k Hessenberg matrix
// ============================================================================

/// Incremental QR of a standard Hessenberg matrix with 2x1 plane rotations,
/// tracking the rotated right-hand side `beta * e1`.
struct GivensLs {
    r: PackedUpperTriangular,
    rotations: Vec<(f64, f64)>,
    tau: Vec<f64>,
    tau_tilde: f64,
}

impl GivensLs {
    fn new(beta: f64) -> Self {
        Self {
            r: PackedUpperTriangular::new(),
            rotations: Vec::new(),
            tau: Vec::new(),
            tau_tilde: beta,
        }
    }

    /// Magnitude of the trailing rotated right-hand-side entry.
    fn quasi_residual(&self) -> f64 {
        self.tau_tilde.abs()
    }

    /// Absorbs the step-`k` Hessenberg column (length `k + 1`): applies the
    /// stored rotations, generates one new rotation to clear the subdiagonal
    /// entry, appends the triangle column, and rotates the right-hand side.
    /// Returns the updated quasi-residual.
    fn append_column(&mut self, mut col: Vec<f64>) -> f64 {
        let k = self.rotations.len();
        assert_eq!(col.len(), k + 2, "Hessenberg column has the wrong length");
        for (i, &(c, s)) in self.rotations.iter().enumerate() {
            let t = c * col[i] + s * col[i + 1];
            col[i + 1] = c * col[i + 1] - s * col[i];
            col[i] = t;
        }
        let (c, s, diag) = plane_rotation(col[k], col[k + 1]);
        col[k] = diag;
        col.truncate(k + 1);
        self.r.push_column(&col);
        self.rotations.push((c, s));
        self.tau.push(c * self.tau_tilde);
        self.tau_tilde *= -s;
        self.quasi_residual()
    }

    fn solve_coefficients(&self) -> Result<Vec<f64>> {
        back_substitute(&self.r, &self.tau)
    }
}

// ============================================================================
// Shared single-basis driver
// ============================================================================

/// Runs one of the monolithic baselines: `step` consumes the raw operator
/// product and extends the basis, returning the new Hessenberg column and
/// breakdown flag; `estimate` maps the iteration's quasi-residual to the
/// stopping estimate.
fn run_monolithic_solver(
    op: &MonolithicOperator<'_>,
    g: &[f64],
    opts: &SolveOptions,
    store: &mut DenseColumnStore,
    rhs_scale: f64,
    mut step: impl FnMut(Vec<f64>, &mut DenseColumnStore) -> SideResult,
    estimate: impl Fn(usize, f64) -> f64,
) -> Result<SolveReport> {
    let threshold = if opts.absolute_tol {
        opts.tol
    } else {
        opts.tol * rhs_scale.abs()
    };

    let mut ls = GivensLs::new(rhs_scale);
    let mut rho_history = Vec::new();
    let mut quasi_history = Vec::new();
    let mut true_history = opts.track_true_residual.then(Vec::new);
    let mut z_norms = opts.track_true_residual.then(Vec::new);
    let mut status = SolveStatus::MaxIterations;
    let mut iterations = 0;

    for k in 1..=opts.maxit {
        let w = op.apply(store.column(k - 1));
        let res = step(w, store);
        let quasi = ls.append_column(res.coeffs);
        let rho = estimate(k, quasi);
        iterations = k;
        quasi_history.push(quasi);
        rho_history.push(rho);

        if let (Some(trues), Some(norms)) = (true_history.as_mut(), z_norms.as_mut()) {
            let z = ls.solve_coefficients()?;
            norms.push(vecops::norm2(&z));
            let u = assemble(store, &z, op.size());
            trues.push(residual_norm(op, g, &u));
        }

        if rho <= threshold {
            status = SolveStatus::Converged;
            break;
        }
        if res.breakdown {
            status = SolveStatus::BreakdownD;
            break;
        }
    }

    let z = ls.solve_coefficients()?;
    let u = assemble(store, &z, op.size());
    let m = op.system().m();
    Ok(SolveReport {
        iterations,
        status,
        x: u[..m].to_vec(),
        y: u[m..].to_vec(),
        rho_history,
        quasi_history,
        true_residual_history: true_history,
        z_norm_history: z_norms,
    })
}

fn assemble(store: &DenseColumnStore, z: &[f64], size: usize) -> Vec<f64> {
    let mut u = vec![0.0; size];
    for (i, &zi) in z.iter().enumerate() {
        vecops::axpy(zi, store.column(i), &mut u);
    }
    u
}

/// Euclidean norm of `g - K u`.
fn residual_norm(op: &MonolithicOperator<'_>, g: &[f64], u: &[f64]) -> f64 {
    let ku = op.apply(u);
    let mut acc = 0.0;
    for (gi, ki) in g.iter().zip(&ku) {
        let d = gi - ki;
        acc += d * d;
    }
    acc.sqrt()
}

fn check_rhs(op: &MonolithicOperator<'_>, g: &[f64]) -> Result<()> {
    if g.len() != op.size() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, expected {}",
            g.len(),
            op.size()
        )));
    }
    Ok(())
}

// ============================================================================
// The two baselines
// ============================================================================

/// Full (unrestarted) GMRES on the stacked operator with modified
/// Gram-Schmidt Arnoldi. The residual norm is read exactly off the rotated
/// right-hand side, so the stopping estimate is the true residual norm up to
/// roundoff.
///
/// An Arnoldi breakdown means the Krylov space became invariant; the exact
/// solution then lies in the current subspace and the run normally reports
/// convergence (happy breakdown).
pub fn gmres_solve(
    op: &MonolithicOperator<'_>,
    g: &[f64],
    opts: &SolveOptions,
) -> Result<SolveReport> {
    validate_options(opts)?;
    check_rhs(op, g)?;
    let beta = vecops::norm2(g);
    if beta == 0.0 {
        return Err(Error::InvalidInput("right-hand side is zero".into()));
    }

    let mut store = DenseColumnStore::new(op.size());
    let mut v1 = g.to_vec();
    vecops::div(beta, &mut v1);
    store.push_column(&v1);

    let step = |w: Vec<f64>, store: &mut DenseColumnStore| {
        let k0 = store.ncols() - 1;
        orthogonalize_and_extend(w, store, k0)
    };
    run_monolithic_solver(op, g, opts, &mut store, beta, step, |_, quasi| quasi)
}

/// CMRH on the stacked operator: the single-operator pivoted Hessenberg
/// reduction with quasi-minimal-residual extraction.
///
/// The basis is unit trapezoidal rather than orthonormal, so the stopping
/// estimate scales the quasi-residual by the same sparsity-count factor as
/// the block method's bound, specialized to the one `(m + n)`-dimensional
/// basis.
pub fn cmrh_solve(
    op: &MonolithicOperator<'_>,
    g: &[f64],
    opts: &SolveOptions,
) -> Result<SolveReport> {
    validate_options(opts)?;
    check_rhs(op, g)?;
    let i0 = vecops::argmax_abs(g).expect("system dimensions are validated nonzero");
    let beta = g[i0];
    if beta == 0.0 {
        return Err(Error::InvalidInput("right-hand side is zero".into()));
    }

    let size = op.size();
    let mut store = DenseColumnStore::new(size);
    let mut d1 = g.to_vec();
    vecops::div(beta, &mut d1);
    d1[i0] = 1.0;
    store.push_column(&d1);
    let mut perm = Permutation::identity(size);
    perm.swap(0, i0);

    let step = |w: Vec<f64>, store: &mut DenseColumnStore| {
        let k0 = store.ncols() - 1;
        eliminate_and_extend(w, store, &mut perm, k0, true, false)
    };
    run_monolithic_solver(op, g, opts, &mut store, beta, step, |k, quasi| {
        // Single basis of dimension m + n: pass it as both extents.
        residual_bound(quasi, 0.0, size, size, k)
    })
}
