//! Command-line entry point for the experiment harness.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use block_krylov_harness::{
    lotkin_conditioning, parse_solver_list, read_partition_file, render_summary_table,
    run_experiment, sandwich_study, write_conditioning_csv, write_sandwich_csv, ExperimentConfig,
    HarnessError, MatrixSource, PartitionSpec, Result,
};

#[derive(Parser)]
#[command(
    name = "harness",
    about = "Benchmark driver for block two-by-two Krylov solvers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a partitioned system with the selected solvers and write
    /// convergence histories plus a summary table.
    Solve {
        /// Matrix Market file, or `synthetic:M+N` for a seeded instance.
        #[arg(long)]
        matrix: String,
        /// Contiguous split index: the first M rows form the leading block.
        #[arg(long, conflicts_with = "partition_file")]
        split: Option<usize>,
        /// File of 0-based row indices for the first block (symmetric
        /// permutation is applied before splitting).
        #[arg(long)]
        partition_file: Option<PathBuf>,
        /// Comma-separated solver list.
        #[arg(long, value_delimiter = ',', default_value = "gpcmrh,gpmr,gmres,cmrh")]
        solvers: Vec<String>,
        /// Stopping tolerance (relative unless --abs-tol).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Iteration cap.
        #[arg(long, default_value_t = 600)]
        maxit: usize,
        /// Diagonal-block preconditioning: none or block_direct.
        #[arg(long, default_value = "none")]
        precond: String,
        /// Output directory for CSV files.
        #[arg(long)]
        out: PathBuf,
        /// Seed for synthetic instances.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Diagonal scaling of the first block row (precond none only).
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Diagonal scaling of the second block row (precond none only).
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Recompute and record the true residual every iteration.
        #[arg(long)]
        true_residual: bool,
        /// Interpret --tol as an absolute residual threshold.
        #[arg(long)]
        abs_tol: bool,
    },
    /// Basis-conditioning study on the Lotkin matrix.
    Lotkin {
        /// Matrix order.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Largest basis size to measure.
        #[arg(long, default_value_t = 50)]
        kmax: usize,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Residual-comparison study on a seeded random system.
    Sandwich {
        /// Seed for the random instance.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rows of the first block.
        #[arg(long)]
        m: usize,
        /// Rows of the second block.
        #[arg(long)]
        n: usize,
        /// Number of steps to verify.
        #[arg(long)]
        kmax: usize,
        /// Optional output CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            matrix,
            split,
            partition_file,
            solvers,
            tol,
            maxit,
            precond,
            out,
            seed,
            lambda,
            mu,
            true_residual,
            abs_tol,
        } => {
            let mut cfg = ExperimentConfig::new(MatrixSource::parse(&matrix)?);
            cfg.partition = match (split, partition_file) {
                (Some(m), None) => Some(PartitionSpec::SplitIndex(m)),
                (None, Some(path)) => Some(PartitionSpec::FirstBlock(read_partition_file(&path)?)),
                (None, None) => None,
                (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
            };
            cfg.solvers = parse_solver_list(&solvers)?;
            cfg.tol = tol;
            cfg.maxit = maxit;
            cfg.precond = precond.parse()?;
            cfg.seed = seed;
            cfg.lambda = lambda;
            cfg.mu = mu;
            cfg.track_true_residual = true_residual;
            cfg.absolute_tol = abs_tol;

            let output = run_experiment(&cfg, &out)?;
            if output.precond_setup_seconds > 0.0 {
                println!(
                    "preconditioner setup: {:.4} s (reported separately from solve times)",
                    output.precond_setup_seconds
                );
            }
            println!("seed: {seed}");
            print!("{}", render_summary_table(&output.rows));
            println!("summary: {}", output.summary_csv.display());
            for path in &output.convergence_files {
                println!("history: {}", path.display());
            }
            Ok(())
        }
        Command::Lotkin { n, kmax, out } => {
            let rows = lotkin_conditioning(n, kmax)?;
            write_conditioning_csv(&out, &rows)?;
            let worst_pivoted = rows
                .iter()
                .map(|r| r.cond_pivoted)
                .fold(f64::NAN, f64::max);
            let worst_unpivoted = rows
                .iter()
                .map(|r| r.cond_unpivoted)
                .fold(f64::NAN, f64::max);
            println!(
                "lotkin n={n} kmax={kmax}: max cond pivoted {worst_pivoted:.3e}, \
                 unpivoted {worst_unpivoted:.3e}"
            );
            println!("written: {}", out.display());
            Ok(())
        }
        Command::Sandwich { seed, m, n, kmax, out } => {
            let rows = sandwich_study(seed, m, n, kmax)?;
            let mut all_ok = true;
            for row in &rows {
                let verdict = if row.lower_ok && row.upper_ok { "pass" } else { "FAIL" };
                all_ok &= row.lower_ok && row.upper_ok;
                println!(
                    "k={:3}  r_gpmr={:10.3e}  r_gpcmrh={:10.3e}  kappa_w={:10.3e}  \
                     ratio={:8.3}  {verdict}",
                    row.k, row.r_gpmr, row.r_gpcmrh, row.kappa_w, row.ratio
                );
            }
            if let Some(path) = out {
                write_sandwich_csv(&path, &rows)?;
                println!("written: {}", path.display());
            }
            if all_ok {
                Ok(())
            } else {
                Err(HarnessError::Config(
                    "residual comparison failed at one or more steps".into(),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
