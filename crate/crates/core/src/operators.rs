//! Block two-by-two systems and the operators the solvers act on.
//!
//! The solvers only ever touch the coefficient blocks through matrix-vector
//! products, so the off-diagonal blocks are abstracted behind
//! [`LinearOperator`]. A [`BlockSystem`] bundles the two operators, the two
//! diagonal scalings, and the right-hand side:
//!
//! ```text
//!     [ lambda*I    A      ] [x]   [b]
//!     [    B     mu*I      ] [y] = [c]
//! ```
//!
//! Systems with general (non-scalar) diagonal blocks `M` and `N` are handled
//! by [`preconditioned_system`], which folds `M` and `N` into the
//! off-diagonal operators via a block-diagonal right preconditioner and
//! exposes the back-map to recover the original unknowns.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::dense::DenseLu;
use crate::linalg::sparse::SparseMatrix;

/// A real linear map accessed only through matrix-vector products.
pub trait LinearOperator: Send + Sync {
    /// Output dimension.
    fn nrows(&self) -> usize;

    /// Input dimension.
    fn ncols(&self) -> usize;

    /// Computes `y = A x`.
    ///
    /// # Panics
    /// Implementations panic when `x` or `y` have the wrong length.
    fn apply_into(&self, x: &[f64], y: &mut [f64]);

    /// Computes `A x` into a fresh vector.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows()];
        self.apply_into(x, &mut y);
        y
    }
}

/// A factored square matrix that can solve `A x = v` in place.
pub trait DirectSolver: Send + Sync {
    /// Order of the factored matrix.
    fn order(&self) -> usize;

    /// Overwrites `v` with `A^{-1} v`.
    fn solve_into(&self, v: &mut [f64]);
}

/// The zero map between spaces of the given dimensions.
#[derive(Debug, Clone, Copy)]
pub struct ZeroOperator {
    nrows: usize,
    ncols: usize,
}

impl ZeroOperator {
    /// Zero map from `ncols`-space to `nrows`-space.
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols }
    }
}

impl LinearOperator for ZeroOperator {
    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols, "zero operator: input length mismatch");
        assert_eq!(y.len(), self.nrows, "zero operator: output length mismatch");
        y.fill(0.0);
    }
}

// ============================================================================
// Block system
// ============================================================================

/// Block two-by-two system with scalar diagonal blocks.
///
/// `A` maps the `n`-dimensional `y`-space into the `m`-dimensional `x`-space
/// and `B` maps the other way. Dimensions are validated at construction and
/// never change.
pub struct BlockSystem {
    lambda: f64,
    mu: f64,
    a: Arc<dyn LinearOperator>,
    b: Arc<dyn LinearOperator>,
    rhs_b: Vec<f64>,
    rhs_c: Vec<f64>,
}

impl BlockSystem {
    /// Assembles a system, validating that all dimensions are consistent and
    /// both blocks are nonempty.
    pub fn new(
        lambda: f64,
        mu: f64,
        a: Arc<dyn LinearOperator>,
        b: Arc<dyn LinearOperator>,
        rhs_b: Vec<f64>,
        rhs_c: Vec<f64>,
    ) -> Result<Self> {
        let m = a.nrows();
        let n = a.ncols();
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput(
                "block system requires nonempty diagonal blocks".into(),
            ));
        }
        if b.nrows() != n || b.ncols() != m {
            return Err(Error::DimensionMismatch(format!(
                "B is {}x{}, expected {}x{} to pair with a {}x{} A",
                b.nrows(),
                b.ncols(),
                n,
                m,
                m,
                n
            )));
        }
        if rhs_b.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "rhs b has length {}, expected {}",
                rhs_b.len(),
                m
            )));
        }
        if rhs_c.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "rhs c has length {}, expected {}",
                rhs_c.len(),
                n
            )));
        }
        Ok(Self {
            lambda,
            mu,
            a,
            b,
            rhs_b,
            rhs_c,
        })
    }

    /// Diagonal scaling of the first block row.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Diagonal scaling of the second block row.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// The upper off-diagonal operator `A`.
    pub fn a(&self) -> &dyn LinearOperator {
        self.a.as_ref()
    }

    /// The lower off-diagonal operator `B`.
    pub fn b(&self) -> &dyn LinearOperator {
        self.b.as_ref()
    }

    /// First right-hand-side block `b`.
    pub fn rhs_b(&self) -> &[f64] {
        &self.rhs_b
    }

    /// Second right-hand-side block `c`.
    pub fn rhs_c(&self) -> &[f64] {
        &self.rhs_c
    }

    /// Dimension of the `x`-block.
    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    /// Dimension of the `y`-block.
    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    /// Total system order `m + n`.
    pub fn size(&self) -> usize {
        self.m() + self.n()
    }

    /// Applies the full block coefficient matrix to a stacked vector
    /// `u = [x; y]`.
    ///
    /// # Panics
    /// Panics if `u.len() != m + n`.
    pub fn apply_block(&self, u: &[f64]) -> Vec<f64> {
        let (m, n) = (self.m(), self.n());
        assert_eq!(u.len(), m + n, "apply_block: input length mismatch");
        let (x, y) = u.split_at(m);
        let mut out = vec![0.0; m + n];
        {
            let (top, bottom) = out.split_at_mut(m);
            self.a.apply_into(y, top);
            for (ti, xi) in top.iter_mut().zip(x) {
                *ti += self.lambda * xi;
            }
            self.b.apply_into(x, bottom);
            for (bi, yi) in bottom.iter_mut().zip(y) {
                *bi += self.mu * yi;
            }
        }
        out
    }

    /// The right-hand side stacked as `[b; c]`.
    pub fn rhs_stacked(&self) -> Vec<f64> {
        let mut g = Vec::with_capacity(self.size());
        g.extend_from_slice(&self.rhs_b);
        g.extend_from_slice(&self.rhs_c);
        g
    }
}

impl std::fmt::Debug for BlockSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlockSystem")
            .field("lambda", &self.lambda)
            .field("mu", &self.mu)
            .field("m", &self.m())
            .field("n", &self.n())
            .finish()
    }
}

// ============================================================================
// Block-diagonal right preconditioning
// ============================================================================

/// Direct solvers for the two diagonal blocks of a general system.
pub struct BlockPreconditioner {
    m_solver: Arc<dyn DirectSolver>,
    n_solver: Arc<dyn DirectSolver>,
}

impl BlockPreconditioner {
    /// Wraps caller-supplied solvers for the two diagonal blocks.
    pub fn new(m_solver: Arc<dyn DirectSolver>, n_solver: Arc<dyn DirectSolver>) -> Self {
        Self { m_solver, n_solver }
    }

    /// Factors the diagonal blocks `M` and `N` with dense LU.
    ///
    /// A singular block surfaces as a setup error naming the block.
    pub fn from_blocks(m_block: &SparseMatrix, n_block: &SparseMatrix) -> Result<Self> {
        let m_lu = DenseLu::factor(&m_block.to_dense()).map_err(|e| {
            Error::SingularFactor(format!("diagonal block M is not invertible: {e}"))
        })?;
        let n_lu = DenseLu::factor(&n_block.to_dense()).map_err(|e| {
            Error::SingularFactor(format!("diagonal block N is not invertible: {e}"))
        })?;
        Ok(Self::new(Arc::new(m_lu), Arc::new(n_lu)))
    }

    /// Order of the `M` block.
    pub fn m_order(&self) -> usize {
        self.m_solver.order()
    }

    /// Order of the `N` block.
    pub fn n_order(&self) -> usize {
        self.n_solver.order()
    }

    /// Overwrites `v` with `M^{-1} v`.
    pub fn apply_m_inverse(&self, v: &mut [f64]) {
        self.m_solver.solve_into(v);
    }

    /// Overwrites `v` with `N^{-1} v`.
    pub fn apply_n_inverse(&self, v: &mut [f64]) {
        self.n_solver.solve_into(v);
    }
}

/// Operator composition `v -> Outer * (Inner^{-1} v)`.
struct RightSolvedOperator {
    outer: Arc<dyn LinearOperator>,
    inner: Arc<dyn DirectSolver>,
}

impl LinearOperator for RightSolvedOperator {
    fn nrows(&self) -> usize {
        self.outer.nrows()
    }

    fn ncols(&self) -> usize {
        self.inner.order()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let mut tmp = x.to_vec();
        self.inner.solve_into(&mut tmp);
        self.outer.apply_into(&tmp, y);
    }
}

/// A general block system transformed to scalar diagonal form, together with
/// the back-map to the original unknowns.
pub struct PreconditionedSystem {
    system: BlockSystem,
    precond: Arc<BlockPreconditioner>,
}

impl PreconditionedSystem {
    /// The transformed system with identity diagonal blocks.
    pub fn system(&self) -> &BlockSystem {
        &self.system
    }

    /// The block solvers backing the transformation.
    pub fn preconditioner(&self) -> &BlockPreconditioner {
        &self.precond
    }

    /// Maps a solution of the transformed system back to the unknowns of the
    /// original system: `x = M^{-1} x_t`, `y = N^{-1} y_t`.
    pub fn back_map(&self, x_t: &[f64], y_t: &[f64]) -> (Vec<f64>, Vec<f64>) {
        assert_eq!(x_t.len(), self.precond.m_order(), "back_map: x length");
        assert_eq!(y_t.len(), self.precond.n_order(), "back_map: y length");
        let mut x = x_t.to_vec();
        let mut y = y_t.to_vec();
        self.precond.apply_m_inverse(&mut x);
        self.precond.apply_n_inverse(&mut y);
        (x, y)
    }
}

impl std::fmt::Debug for PreconditionedSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PreconditionedSystem")
            .field("system", &self.system)
            .finish()
    }
}

/// Transforms the general system
///
/// ```text
///     [ M  A ] [x]   [b]
///     [ B  N ] [y] = [c]
/// ```
///
/// into scalar-diagonal form by right-preconditioning with `blkdiag(M, N)`:
/// the returned system has `lambda = mu = 1`, off-diagonal operators
/// `A N^{-1}` and `B M^{-1}`, and the original right-hand side. Solutions of
/// the transformed system are pulled back with
/// [`PreconditionedSystem::back_map`].
pub fn preconditioned_system(
    m_block: &SparseMatrix,
    n_block: &SparseMatrix,
    a: Arc<dyn LinearOperator>,
    b: Arc<dyn LinearOperator>,
    rhs_b: Vec<f64>,
    rhs_c: Vec<f64>,
) -> Result<PreconditionedSystem> {
    let m = a.nrows();
    let n = a.ncols();
    if m_block.nrows() != m || m_block.ncols() != m {
        return Err(Error::DimensionMismatch(format!(
            "diagonal block M is {}x{}, expected {m}x{m}",
            m_block.nrows(),
            m_block.ncols()
        )));
    }
    if n_block.nrows() != n || n_block.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "diagonal block N is {}x{}, expected {n}x{n}",
            n_block.nrows(),
            n_block.ncols()
        )));
    }
    let precond = Arc::new(BlockPreconditioner::from_blocks(m_block, n_block)?);
    let a_tilde = Arc::new(RightSolvedOperator {
        outer: a,
        inner: Arc::clone(&precond.n_solver),
    });
    let b_tilde = Arc::new(RightSolvedOperator {
        outer: b,
        inner: Arc::clone(&precond.m_solver),
    });
    let system = BlockSystem::new(1.0, 1.0, a_tilde, b_tilde, rhs_b, rhs_c)?;
    Ok(PreconditionedSystem { system, precond })
}
