//! Krylov solvers for block two-by-two nonsymmetric linear systems.
//!
//! The central object is the system
//!
//! ```text
//!     [ lambda*I    A   ] [x]   [b]
//!     [    B      mu*I  ] [y] = [c]
//! ```
//!
//! with rectangular off-diagonal blocks `A` (`m x n`) and `B` (`n x m`)
//! accessed only through matrix-vector products. Four solvers cover it:
//!
//! * [`gpcmrh_solve`]: inner-product-free quasi-minimal-residual iteration
//!   over the pivoted simultaneous Hessenberg bases — no dot products
//!   anywhere in the basis expansion, every stored basis entry in
//!   `[-1, 1]`, and a certified upper bound on the true residual for
//!   stopping.
//! * [`gpmr_solve`]: the orthonormal-basis counterpart built on modified
//!   Gram-Schmidt, sharing the same block least-squares core; its residual
//!   estimate is exact.
//! * [`gmres_solve`] / [`cmrh_solve`]: single-space baselines applied to
//!   the assembled `(m + n)`-dimensional operator, for comparisons.
//!
//! Systems with general diagonal blocks `M` and `N` are reduced to the
//! scalar-diagonal form with [`preconditioned_system`], which folds the
//! blocks into the off-diagonal operators via block-diagonal right
//! preconditioning and exposes the back-map to the original unknowns.
//!
//! The reduction processes themselves live in [`hessenberg`] and can be
//! driven directly for factorization studies; [`sandwich_verify`] compares
//! the two block methods residual-by-residual against the conditioning of
//! the non-orthonormal basis.

pub mod baselines;
pub mod error;
pub mod gpcmrh;
pub mod gpmr;
pub mod hessenberg;
pub mod linalg;
pub mod operators;

pub use baselines::{cmrh_solve, gmres_solve, MonolithicOperator};
pub use error::{Error, Result};
pub use gpcmrh::{
    gpcmrh_solve, residual_bound, true_residual, SolveOptions, SolveReport, SolveStatus,
};
pub use gpmr::{gpmr_solve, sandwich_verify, SandwichCheck};
pub use hessenberg::{
    basis_condition, orth_hess_init, orth_hess_step, sim_hess_pivoted_step, sim_hess_step,
    OrthHessState, SimHessState, StepOutcome,
};
pub use operators::{
    preconditioned_system, BlockPreconditioner, BlockSystem, DirectSolver, LinearOperator,
    PreconditionedSystem, ZeroOperator,
};
