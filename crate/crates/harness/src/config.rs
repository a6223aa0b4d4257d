//! Experiment configuration: matrix sources, partition specifications, and
//! solver/preconditioner selection with validation.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{HarnessError, Result};

/// Where the coefficient matrix comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixSource {
    /// A Matrix Market file on disk.
    File(PathBuf),
    /// A seeded random block instance with an `m + n` square layout.
    Synthetic { m: usize, n: usize },
}

impl MatrixSource {
    /// Parses either a file path or a `synthetic:M+N` specification
    /// (`x` is accepted in place of `+`).
    pub fn parse(text: &str) -> Result<Self> {
        let Some(shape) = text.strip_prefix("synthetic:") else {
            return Ok(Self::File(PathBuf::from(text)));
        };
        let parts: Vec<&str> = shape.split(['+', 'x']).collect();
        let dims: Vec<usize> = parts
            .iter()
            .filter_map(|p| p.trim().parse().ok())
            .collect();
        match dims.as_slice() {
            [m, n] if *m > 0 && *n > 0 => Ok(Self::Synthetic { m: *m, n: *n }),
            _ => Err(HarnessError::Config(format!(
                "cannot parse synthetic shape '{shape}'; expected M+N with positive sizes"
            ))),
        }
    }

    /// Short name used for output files and summary rows.
    pub fn label(&self, seed: u64) -> String {
        match self {
            Self::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "matrix".to_string()),
            Self::Synthetic { m, n } => format!("synthetic-{m}+{n}-seed{seed}"),
        }
    }
}

/// How the square matrix is cut into the block two-by-two layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionSpec {
    /// Contiguous split: the first `m` rows and columns form the leading
    /// diagonal block.
    SplitIndex(usize),
    /// Explicit 0-based row indices of the first block; the matrix is
    /// symmetrically permuted so these come first, then split.
    FirstBlock(Vec<usize>),
}

/// One of the four supported solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    GpCmrh,
    Gpmr,
    Gmres,
    Cmrh,
}

impl SolverChoice {
    /// All solvers, in the order they are reported.
    pub const ALL: [SolverChoice; 4] = [Self::GpCmrh, Self::Gpmr, Self::Gmres, Self::Cmrh];

    /// The name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            Self::GpCmrh => "gpcmrh",
            Self::Gpmr => "gpmr",
            Self::Gmres => "gmres",
            Self::Cmrh => "cmrh",
        }
    }
}

impl FromStr for SolverChoice {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gpcmrh" => Ok(Self::GpCmrh),
            "gpmr" => Ok(Self::Gpmr),
            "gmres" => Ok(Self::Gmres),
            "cmrh" => Ok(Self::Cmrh),
            other => Err(HarnessError::Config(format!(
                "unknown solver '{other}'; expected gpcmrh, gpmr, gmres, or cmrh"
            ))),
        }
    }
}

impl fmt::Display for SolverChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Preconditioning strategy for the diagonal blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecondChoice {
    /// No transformation; the diagonal blocks must already be `lambda*I`
    /// and `mu*I` for the block solvers to apply.
    #[default]
    None,
    /// Fold direct factorizations of the diagonal blocks into the
    /// off-diagonal operators (right preconditioning).
    BlockDirect,
}

impl FromStr for PrecondChoice {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(Self::None),
            "block_direct" => Ok(Self::BlockDirect),
            other => Err(HarnessError::Config(format!(
                "unknown preconditioner '{other}'; expected none or block_direct"
            ))),
        }
    }
}

/// Full description of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Coefficient matrix source.
    pub source: MatrixSource,
    /// Block partition; defaults to the generator's split for synthetic
    /// sources and is required for files.
    pub partition: Option<PartitionSpec>,
    /// Diagonal scaling of the first block row (after preconditioning).
    pub lambda: f64,
    /// Diagonal scaling of the second block row (after preconditioning).
    pub mu: f64,
    /// Stopping tolerance.
    pub tol: f64,
    /// Iteration cap.
    pub maxit: usize,
    /// Solvers to run, in order.
    pub solvers: Vec<SolverChoice>,
    /// Diagonal-block preconditioning strategy.
    pub precond: PrecondChoice,
    /// Seed for synthetic instances; recorded in outputs.
    pub seed: u64,
    /// Recompute the true residual at every iteration.
    pub track_true_residual: bool,
    /// Interpret `tol` as an absolute threshold instead of relative.
    pub absolute_tol: bool,
}

impl ExperimentConfig {
    /// Configuration with the standard protocol defaults: `lambda = mu = 1`,
    /// `tol = 1e-10`, `maxit = 600`, all four solvers, no preconditioning.
    pub fn new(source: MatrixSource) -> Self {
        Self {
            source,
            partition: None,
            lambda: 1.0,
            mu: 1.0,
            tol: 1e-10,
            maxit: 600,
            solvers: SolverChoice::ALL.to_vec(),
            precond: PrecondChoice::default(),
            seed: 0,
            track_true_residual: false,
            absolute_tol: false,
        }
    }

    /// Checks the value-level invariants; partition bounds are checked
    /// against the matrix once it is loaded.
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(HarnessError::Config(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.maxit == 0 {
            return Err(HarnessError::Config("maxit must be at least 1".into()));
        }
        if self.solvers.is_empty() {
            return Err(HarnessError::Config("no solvers selected".into()));
        }
        if self.partition.is_none() && !matches!(self.source, MatrixSource::Synthetic { .. }) {
            return Err(HarnessError::Config(
                "file sources need --split or --partition-file".into(),
            ));
        }
        if let Some(PartitionSpec::FirstBlock(rows)) = &self.partition {
            if rows.is_empty() {
                return Err(HarnessError::Config(
                    "partition file selects no rows for the first block".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Parses a comma-separated solver list, rejecting duplicates.
pub fn parse_solver_list(items: &[String]) -> Result<Vec<SolverChoice>> {
    let mut out = Vec::new();
    for item in items {
        let choice: SolverChoice = item.parse()?;
        if out.contains(&choice) {
            return Err(HarnessError::Config(format!(
                "solver '{choice}' listed twice"
            )));
        }
        out.push(choice);
    }
    Ok(out)
}
