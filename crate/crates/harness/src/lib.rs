//! Experiment driver for the block Krylov solver library.
//!
//! The library side of the harness loads or generates a square matrix, cuts
//! it into the block two-by-two layout, runs any subset of the four solvers
//! under a shared protocol, and writes convergence histories plus a summary
//! table whose residuals are recomputed from the original equations. Two
//! focused studies are included: basis conditioning on the Lotkin matrix
//! and the per-step residual comparison between the orthonormal-basis and
//! inner-product-free methods.

pub mod config;
pub mod error;
pub mod experiment;
pub mod matrices;
pub mod partition;
pub mod study;

pub use config::{
    parse_solver_list, ExperimentConfig, MatrixSource, PartitionSpec, PrecondChoice, SolverChoice,
};
pub use error::{HarnessError, Result};
pub use experiment::{
    ones_rhs, render_summary_table, run_experiment, ExperimentOutput, SummaryRow,
};
pub use matrices::{lotkin_matrix, synthetic_block_matrix};
pub use partition::{partition_system, read_partition_file, PartitionedBlocks};
pub use study::{
    lotkin_conditioning, sandwich_study, write_conditioning_csv, write_sandwich_csv,
    ConditioningRow, SandwichRow,
};
