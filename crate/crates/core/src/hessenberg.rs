//! Simultaneous Hessenberg reductions of a block two-by-two operator pair.
//!
//! Two reduction processes produce the nested bases the solvers expand in:
//!
//! * [`OrthHessState`]: modified Gram-Schmidt builds orthonormal bases
//!   `V` and `U` with `A U_k = V_{k+1} Htilde` and `B V_k = U_{k+1} Ftilde`.
//!   Each step costs two inner products per previous column.
//! * [`SimHessState`]: an elimination-based process builds unit trapezoidal
//!   bases `D` and `L` satisfying `A L_k = D_{k+1} H` and
//!   `B D_k = L_{k+1} F` without forming a single inner product. The pivoted
//!   variant selects the largest remaining entry as divisor, which keeps
//!   every stored basis entry in `[-1, 1]`; the unpivoted variant divides by
//!   a fixed position and can amplify or terminate spuriously.
//!
//! Both processes advance the two sides in lock step: one step consumes one
//! product with `A` and one with `B` and appends one column to each
//! coefficient table. A step whose divisor falls below the breakdown
//! threshold records the column but stops the process.

use crate::error::{Error, Result};
use crate::linalg::colstore::DenseColumnStore;
use crate::linalg::dense::{condition_number, DenseMatrix};
use crate::linalg::perm::Permutation;
use crate::linalg::vecops;
use crate::operators::LinearOperator;

/// Relative breakdown threshold: a step terminates the process when its
/// divisor has magnitude at most `2^-44 * max(scale, 1)`, where `scale` is
/// the norm of the raw operator product entering the step. The margin sits
/// roughly halfway (in digits) between machine epsilon and one, so genuine
/// rank deficiency is caught without tripping on ordinary rounding noise.
pub fn breakdown_threshold(scale: f64) -> f64 {
    2.0_f64.powi(-44) * scale.max(1.0)
}

/// Outcome of one reduction step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    /// The divisor on the `D` (first-block) side fell below the threshold.
    pub breakdown_d: bool,
    /// The divisor on the `L` (second-block) side fell below the threshold.
    pub breakdown_l: bool,
    /// Largest magnitude left in the first-block remainder after elimination.
    /// With pivoting this equals the magnitude of the subdiagonal
    /// coefficient; without pivoting it can be larger at a breakdown.
    pub d_remainder_inf: f64,
    /// Largest magnitude left in the second-block remainder.
    pub l_remainder_inf: f64,
}

impl StepOutcome {
    /// True if either side broke down.
    pub fn breakdown(&self) -> bool {
        self.breakdown_d || self.breakdown_l
    }
}

/// Columns of an upper Hessenberg coefficient table.
///
/// Column `k` (0-based) stores the `k + 2` coefficients produced by step
/// `k + 1` of a reduction: the eliminations against columns `0..=k` followed
/// by the subdiagonal divisor.
#[derive(Debug, Clone, Default)]
pub struct HessenbergColumns {
    cols: Vec<Vec<f64>>,
}

impl HessenbergColumns {
    /// Empty table.
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of stored columns.
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Column `k` (length `k + 2`).
    pub fn column(&self, k: usize) -> &[f64] {
        &self.cols[k]
    }

    /// Entry `(i, k)` of the table; `i` may be at most `k + 1`.
    pub fn get(&self, i: usize, k: usize) -> f64 {
        assert!(i <= k + 1, "entry ({i}, {k}) lies below the subdiagonal");
        self.cols[k][i]
    }

    /// Appends the column produced by the next step.
    ///
    /// # Panics
    /// Panics unless `column.len() == ncols() + 2`.
    pub fn push_column(&mut self, column: Vec<f64>) {
        assert_eq!(
            column.len(),
            self.cols.len() + 2,
            "Hessenberg column has the wrong length"
        );
        self.cols.push(column);
    }

    /// Dense `(k + 1) x k` copy of the leading columns.
    pub fn to_dense(&self, k: usize) -> DenseMatrix {
        assert!(k <= self.ncols(), "requested {k} columns, have {}", self.ncols());
        let mut out = DenseMatrix::zeros(k + 1, k);
        for j in 0..k {
            for (i, &v) in self.cols[j].iter().enumerate() {
                if i <= k {
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Result of reducing one side of a step.
pub(crate) struct SideResult {
    pub(crate) coeffs: Vec<f64>,
    pub(crate) breakdown: bool,
    pub(crate) remainder_inf: f64,
}

/// Eliminates `w` against the stored (unit trapezoidal) columns, selects the
/// next divisor, and, if it is acceptable, normalizes and appends the new
/// basis column. `k0` is the number of previously completed steps. With
/// `exact_zero_only` set, any nonzero divisor is accepted.
///
/// Shared with the single-operator Hessenberg process used by the CMRH
/// baseline.
pub(crate) fn eliminate_and_extend(
    mut w: Vec<f64>,
    store: &mut DenseColumnStore,
    perm: &mut Permutation,
    k0: usize,
    pivoted: bool,
    exact_zero_only: bool,
) -> SideResult {
    let dim = w.len();
    let threshold = if exact_zero_only {
        0.0
    } else {
        breakdown_threshold(vecops::norm_inf(&w))
    };

    let mut coeffs = Vec::with_capacity(k0 + 2);
    for i in 0..=k0 {
        let coeff = w[perm.get(i)];
        coeffs.push(coeff);
        if coeff != 0.0 {
            vecops::axpy(-coeff, store.column(i), &mut w);
        }
    }

    let next = k0 + 1;
    let mut remainder_inf = 0.0_f64;
    let mut pivot_pos = None;
    if next < dim {
        let mut best = next;
        let mut best_mag = w[perm.get(next)].abs();
        for r in (next + 1)..dim {
            let mag = w[perm.get(r)].abs();
            remainder_inf = remainder_inf.max(mag);
            if pivoted && mag > best_mag {
                best = r;
                best_mag = mag;
            }
        }
        remainder_inf = remainder_inf.max(w[perm.get(next)].abs());
        pivot_pos = Some(best);
    }

    let subdiag = pivot_pos.map_or(0.0, |pos| w[perm.get(pos)]);
    let breakdown = subdiag.abs() <= threshold;
    coeffs.push(subdiag);

    if !breakdown {
        let pos = pivot_pos.expect("nonzero divisor implies a pivot position");
        vecops::div(subdiag, &mut w);
        // The eliminated and divisor positions are exact by construction;
        // store them as exact rather than leaving rounded quotients behind.
        for i in 0..=k0 {
            w[perm.get(i)] = 0.0;
        }
        w[perm.get(pos)] = 1.0;
        store.push_column(&w);
        if pivoted {
            perm.swap(next, pos);
        }
    }

    SideResult {
        coeffs,
        breakdown,
        remainder_inf,
    }
}

/// Orthogonalizes `w` against the stored orthonormal columns with modified
/// Gram-Schmidt and, if the remainder is acceptable, normalizes and appends
/// it.
///
/// Shared with the Arnoldi loop of the GMRES baseline.
pub(crate) fn orthogonalize_and_extend(
    mut w: Vec<f64>,
    store: &mut DenseColumnStore,
    k0: usize,
) -> SideResult {
    let threshold = breakdown_threshold(vecops::norm2(&w));

    let mut coeffs = Vec::with_capacity(k0 + 2);
    for i in 0..=k0 {
        let coeff = vecops::dot(store.column(i), &w);
        coeffs.push(coeff);
        vecops::axpy(-coeff, store.column(i), &mut w);
    }

    let norm = vecops::norm2(&w);
    coeffs.push(norm);
    let breakdown = norm <= threshold;
    if !breakdown {
        vecops::div(norm, &mut w);
        store.push_column(&w);
    }

    SideResult {
        coeffs,
        breakdown,
        remainder_inf: norm,
    }
}

// ============================================================================
// Simultaneous Hessenberg process (inner-product free)
// ============================================================================

/// State of the simultaneous Hessenberg reduction.
///
/// Built by [`SimHessState::pivoted`] or [`SimHessState::unpivoted`] and
/// advanced by [`sim_hess_pivoted_step`] / [`sim_hess_step`]. After `k`
/// successful steps the state holds `k + 1` basis columns per side and `k`
/// coefficient columns per table, satisfying
/// `A L_k = D_{k+1} H_{k+1,k}` and `B D_k = L_{k+1} F_{k+1,k}`.
pub struct SimHessState {
    d: DenseColumnStore,
    l: DenseColumnStore,
    p: Permutation,
    q: Permutation,
    h: HessenbergColumns,
    f: HessenbergColumns,
    beta: f64,
    gamma: f64,
    pivoted: bool,
    exact_zero_breakdown: bool,
    steps: usize,
    terminated: Option<StepOutcome>,
}

impl SimHessState {
    /// Initializes the pivoted process from the two right-hand-side blocks.
    ///
    /// The starting column on each side is the block divided by its entry of
    /// largest magnitude (lowest index on ties); that entry's position is
    /// recorded first in the side's permutation.
    pub fn pivoted(rhs_b: &[f64], rhs_c: &[f64]) -> Result<Self> {
        let (d, p, beta) = Self::init_side_pivoted(rhs_b, "b")?;
        let (l, q, gamma) = Self::init_side_pivoted(rhs_c, "c")?;
        Ok(Self {
            d,
            l,
            p,
            q,
            h: HessenbergColumns::new(),
            f: HessenbergColumns::new(),
            beta,
            gamma,
            pivoted: true,
            exact_zero_breakdown: false,
            steps: 0,
            terminated: None,
        })
    }

    /// Initializes the unpivoted process, which always divides by the
    /// leading remaining position.
    pub fn unpivoted(rhs_b: &[f64], rhs_c: &[f64]) -> Result<Self> {
        let (d, beta) = Self::init_side_unpivoted(rhs_b, "b")?;
        let (l, gamma) = Self::init_side_unpivoted(rhs_c, "c")?;
        let p = Permutation::identity(rhs_b.len());
        let q = Permutation::identity(rhs_c.len());
        Ok(Self {
            d,
            l,
            p,
            q,
            h: HessenbergColumns::new(),
            f: HessenbergColumns::new(),
            beta,
            gamma,
            pivoted: false,
            exact_zero_breakdown: false,
            steps: 0,
            terminated: None,
        })
    }

    fn init_side_pivoted(
        rhs: &[f64],
        name: &str,
    ) -> Result<(DenseColumnStore, Permutation, f64)> {
        if rhs.is_empty() {
            return Err(Error::InvalidInput(format!("right-hand side {name} is empty")));
        }
        let i0 = vecops::argmax_abs(rhs).expect("nonempty slice");
        let scale = rhs[i0];
        if scale == 0.0 {
            return Err(Error::InvalidInput(format!("right-hand side {name} is zero")));
        }
        let mut col = rhs.to_vec();
        vecops::div(scale, &mut col);
        col[i0] = 1.0;
        let mut store = DenseColumnStore::new(rhs.len());
        store.push_column(&col);
        let mut perm = Permutation::identity(rhs.len());
        perm.swap(0, i0);
        Ok((store, perm, scale))
    }

    fn init_side_unpivoted(rhs: &[f64], name: &str) -> Result<(DenseColumnStore, f64)> {
        if rhs.is_empty() {
            return Err(Error::InvalidInput(format!("right-hand side {name} is empty")));
        }
        let scale = rhs[0];
        if scale == 0.0 {
            return Err(Error::InvalidInput(format!(
                "leading entry of right-hand side {name} is zero; the unpivoted reduction cannot start"
            )));
        }
        let mut col = rhs.to_vec();
        vecops::div(scale, &mut col);
        col[0] = 1.0;
        let mut store = DenseColumnStore::new(rhs.len());
        store.push_column(&col);
        Ok((store, scale))
    }

    /// Basis columns spanning the first-block search space.
    pub fn d(&self) -> &DenseColumnStore {
        &self.d
    }

    /// Basis columns spanning the second-block search space.
    pub fn l(&self) -> &DenseColumnStore {
        &self.l
    }

    /// Row permutation tracked on the first-block side.
    pub fn p(&self) -> &Permutation {
        &self.p
    }

    /// Row permutation tracked on the second-block side.
    pub fn q(&self) -> &Permutation {
        &self.q
    }

    /// Coefficient table `H` (first-block side).
    pub fn h(&self) -> &HessenbergColumns {
        &self.h
    }

    /// Coefficient table `F` (second-block side).
    pub fn f(&self) -> &HessenbergColumns {
        &self.f
    }

    /// Signed scaling of the first starting column (`b`'s pivot entry).
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Signed scaling of the second starting column (`c`'s pivot entry).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Number of completed steps.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// True for the pivoted variant.
    pub fn is_pivoted(&self) -> bool {
        self.pivoted
    }

    /// Continues through divisors below the relative breakdown threshold,
    /// stopping only when a divisor is exactly zero.
    ///
    /// Solvers keep the default margin, which stops the process at numerical
    /// rank deficiency. Conditioning studies set this to watch the basis
    /// grow past that point: the pivoted variant keeps its entries in
    /// `[-1, 1]` no matter how small the divisor, while the unpivoted
    /// variant amplifies freely.
    pub fn keep_tiny_pivots(&mut self) {
        self.exact_zero_breakdown = true;
    }

    /// The outcome that terminated the process, if any.
    pub fn termination(&self) -> Option<StepOutcome> {
        self.terminated
    }

    fn advance(
        &mut self,
        a: &dyn LinearOperator,
        b: &dyn LinearOperator,
    ) -> StepOutcome {
        assert!(
            self.terminated.is_none(),
            "reduction already terminated by breakdown"
        );
        let m = self.d.nrows();
        let n = self.l.nrows();
        assert_eq!(a.nrows(), m, "operator A: row count mismatch");
        assert_eq!(a.ncols(), n, "operator A: column count mismatch");
        assert_eq!(b.nrows(), n, "operator B: row count mismatch");
        assert_eq!(b.ncols(), m, "operator B: column count mismatch");

        let k0 = self.steps;
        let d_raw = a.apply(self.l.column(k0));
        let l_raw = b.apply(self.d.column(k0));

        let relaxed = self.exact_zero_breakdown;
        let d_res = eliminate_and_extend(d_raw, &mut self.d, &mut self.p, k0, self.pivoted, relaxed);
        let l_res = eliminate_and_extend(l_raw, &mut self.l, &mut self.q, k0, self.pivoted, relaxed);

        self.h.push_column(d_res.coeffs);
        self.f.push_column(l_res.coeffs);
        self.steps += 1;

        let outcome = StepOutcome {
            breakdown_d: d_res.breakdown,
            breakdown_l: l_res.breakdown,
            d_remainder_inf: d_res.remainder_inf,
            l_remainder_inf: l_res.remainder_inf,
        };
        if outcome.breakdown() {
            self.terminated = Some(outcome);
        }
        outcome
    }
}

impl std::fmt::Debug for SimHessState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimHessState")
            .field("pivoted", &self.pivoted)
            .field("steps", &self.steps)
            .field("m", &self.d.nrows())
            .field("n", &self.l.nrows())
            .field("terminated", &self.terminated.is_some())
            .finish()
    }
}

/// Advances the unpivoted simultaneous Hessenberg process by one step.
///
/// Divides by the fixed leading remaining position on each side. A divisor
/// below the breakdown threshold stops the process even though the
/// remainder may still be large; the outcome's remainder norms expose this.
///
/// # Panics
/// Panics if the state is pivoted, already terminated, or the operator
/// shapes disagree with the state.
pub fn sim_hess_step(
    state: &mut SimHessState,
    a: &dyn LinearOperator,
    b: &dyn LinearOperator,
) -> StepOutcome {
    assert!(
        !state.pivoted,
        "sim_hess_step drives the unpivoted process; use sim_hess_pivoted_step"
    );
    state.advance(a, b)
}

/// Advances the pivoted simultaneous Hessenberg process by one step.
///
/// Selects the remaining entry of largest magnitude as divisor (lowest
/// index on ties), so every stored basis entry stays in `[-1, 1]` and a
/// breakdown implies the whole remainder is negligible.
///
/// # Panics
/// Panics if the state is unpivoted, already terminated, or the operator
/// shapes disagree with the state.
pub fn sim_hess_pivoted_step(
    state: &mut SimHessState,
    a: &dyn LinearOperator,
    b: &dyn LinearOperator,
) -> StepOutcome {
    assert!(
        state.pivoted,
        "sim_hess_pivoted_step drives the pivoted process; use sim_hess_step"
    );
    state.advance(a, b)
}

// ============================================================================
// Orthogonal Hessenberg process (modified Gram-Schmidt)
// ============================================================================

/// State of the orthogonal (Gram-Schmidt) Hessenberg reduction.
pub struct OrthHessState {
    v: DenseColumnStore,
    u: DenseColumnStore,
    h: HessenbergColumns,
    f: HessenbergColumns,
    beta: f64,
    gamma: f64,
    steps: usize,
    terminated: Option<StepOutcome>,
}

/// Initializes the orthogonal reduction: the starting columns are the
/// right-hand-side blocks normalized in the Euclidean norm.
pub fn orth_hess_init(rhs_b: &[f64], rhs_c: &[f64]) -> Result<OrthHessState> {
    let init_side = |rhs: &[f64], name: &str| -> Result<(DenseColumnStore, f64)> {
        if rhs.is_empty() {
            return Err(Error::InvalidInput(format!("right-hand side {name} is empty")));
        }
        let norm = vecops::norm2(rhs);
        if norm == 0.0 {
            return Err(Error::InvalidInput(format!("right-hand side {name} is zero")));
        }
        let mut col = rhs.to_vec();
        vecops::div(norm, &mut col);
        let mut store = DenseColumnStore::new(rhs.len());
        store.push_column(&col);
        Ok((store, norm))
    };
    let (v, beta) = init_side(rhs_b, "b")?;
    let (u, gamma) = init_side(rhs_c, "c")?;
    Ok(OrthHessState {
        v,
        u,
        h: HessenbergColumns::new(),
        f: HessenbergColumns::new(),
        beta,
        gamma,
        steps: 0,
        terminated: None,
    })
}

/// Advances the orthogonal reduction by one modified Gram-Schmidt step.
///
/// # Panics
/// Panics if the state already terminated or the operator shapes disagree
/// with the state.
pub fn orth_hess_step(
    state: &mut OrthHessState,
    a: &dyn LinearOperator,
    b: &dyn LinearOperator,
) -> StepOutcome {
    assert!(
        state.terminated.is_none(),
        "reduction already terminated by breakdown"
    );
    let m = state.v.nrows();
    let n = state.u.nrows();
    assert_eq!(a.nrows(), m, "operator A: row count mismatch");
    assert_eq!(a.ncols(), n, "operator A: column count mismatch");
    assert_eq!(b.nrows(), n, "operator B: row count mismatch");
    assert_eq!(b.ncols(), m, "operator B: column count mismatch");

    let k0 = state.steps;
    let v_raw = a.apply(state.u.column(k0));
    let u_raw = b.apply(state.v.column(k0));

    let v_res = orthogonalize_and_extend(v_raw, &mut state.v, k0);
    let u_res = orthogonalize_and_extend(u_raw, &mut state.u, k0);

    state.h.push_column(v_res.coeffs);
    state.f.push_column(u_res.coeffs);
    state.steps += 1;

    let outcome = StepOutcome {
        breakdown_d: v_res.breakdown,
        breakdown_l: u_res.breakdown,
        d_remainder_inf: v_res.remainder_inf,
        l_remainder_inf: u_res.remainder_inf,
    };
    if outcome.breakdown() {
        state.terminated = Some(outcome);
    }
    outcome
}

impl OrthHessState {
    /// Orthonormal basis columns on the first-block side.
    pub fn v(&self) -> &DenseColumnStore {
        &self.v
    }

    /// Orthonormal basis columns on the second-block side.
    pub fn u(&self) -> &DenseColumnStore {
        &self.u
    }

    /// Coefficient table on the first-block side.
    pub fn h(&self) -> &HessenbergColumns {
        &self.h
    }

    /// Coefficient table on the second-block side.
    pub fn f(&self) -> &HessenbergColumns {
        &self.f
    }

    /// Euclidean norm of the first right-hand-side block.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Euclidean norm of the second right-hand-side block.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Number of completed steps.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// The outcome that terminated the process, if any.
    pub fn termination(&self) -> Option<StepOutcome> {
        self.terminated
    }
}

impl std::fmt::Debug for OrthHessState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrthHessState")
            .field("steps", &self.steps)
            .field("m", &self.v.nrows())
            .field("n", &self.u.nrows())
            .field("terminated", &self.terminated.is_some())
            .finish()
    }
}

// ============================================================================
// Shared basis interface for the least-squares drivers
// ============================================================================

/// What the block least-squares driver needs from a basis process: starting
/// scalings, step advancement, the step's coefficient columns, and the basis
/// columns for solution assembly.
pub(crate) trait BlockBasisProcess {
    fn beta(&self) -> f64;
    fn gamma(&self) -> f64;
    fn advance(&mut self, a: &dyn LinearOperator, b: &dyn LinearOperator) -> StepOutcome;
    fn h_column(&self, k: usize) -> &[f64];
    fn f_column(&self, k: usize) -> &[f64];
    fn x_column(&self, i: usize) -> &[f64];
    fn y_column(&self, i: usize) -> &[f64];
}

impl BlockBasisProcess for SimHessState {
    fn beta(&self) -> f64 {
        self.beta
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn advance(&mut self, a: &dyn LinearOperator, b: &dyn LinearOperator) -> StepOutcome {
        SimHessState::advance(self, a, b)
    }

    fn h_column(&self, k: usize) -> &[f64] {
        self.h.column(k)
    }

    fn f_column(&self, k: usize) -> &[f64] {
        self.f.column(k)
    }

    fn x_column(&self, i: usize) -> &[f64] {
        self.d.column(i)
    }

    fn y_column(&self, i: usize) -> &[f64] {
        self.l.column(i)
    }
}

impl BlockBasisProcess for OrthHessState {
    fn beta(&self) -> f64 {
        self.beta
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn advance(&mut self, a: &dyn LinearOperator, b: &dyn LinearOperator) -> StepOutcome {
        orth_hess_step(self, a, b)
    }

    fn h_column(&self, k: usize) -> &[f64] {
        self.h.column(k)
    }

    fn f_column(&self, k: usize) -> &[f64] {
        self.f.column(k)
    }

    fn x_column(&self, i: usize) -> &[f64] {
        self.v.column(i)
    }

    fn y_column(&self, i: usize) -> &[f64] {
        self.u.column(i)
    }
}

// ============================================================================
// Basis conditioning diagnostic
// ============================================================================

/// Spectral condition number of the first `k` stored basis columns.
///
/// Returns `f64::INFINITY` for a rank-deficient prefix. Intended for
/// diagnostics and experiments; it materializes the prefix densely and runs
/// a full singular value computation.
pub fn basis_condition(store: &DenseColumnStore, k: usize) -> f64 {
    assert!(k >= 1, "condition number needs at least one column");
    condition_number(&store.to_dense_prefix(k))
}
