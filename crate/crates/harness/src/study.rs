//! Focused studies: basis conditioning on the Lotkin matrix and the
//! residual-comparison inequalities on seeded random systems.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use block_krylov::hessenberg::{
    basis_condition, sim_hess_pivoted_step, sim_hess_step, SimHessState,
};
use block_krylov::linalg::dense::DenseMatrix;
use block_krylov::{sandwich_verify, BlockSystem};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{HarnessError, Result};
use crate::matrices::lotkin_matrix;

/// Condition numbers of the first-block basis after `k` columns, for the
/// pivoted and unpivoted reduction variants. `NaN` marks columns a variant
/// never produced because it broke down earlier.
#[derive(Debug, Clone)]
pub struct ConditioningRow {
    /// Number of basis columns.
    pub k: usize,
    /// Condition number of the pivoted basis prefix.
    pub cond_pivoted: f64,
    /// Condition number of the unpivoted basis prefix.
    pub cond_unpivoted: f64,
}

/// Runs both reduction variants on the Lotkin system (`B = A^T`, ones on
/// both right-hand sides) and records the basis condition number per `k`.
pub fn lotkin_conditioning(n: usize, kmax: usize) -> Result<Vec<ConditioningRow>> {
    if kmax < 2 || n < kmax {
        return Err(HarnessError::Config(format!(
            "need n >= kmax >= 2, got n = {n}, kmax = {kmax}"
        )));
    }
    let a = lotkin_matrix(n);
    let b = a.transpose();
    let ones = vec![1.0; n];

    let conds_for = |pivoted: bool| -> Result<Vec<f64>> {
        let mut state = if pivoted {
            SimHessState::pivoted(&ones, &ones)?
        } else {
            SimHessState::unpivoted(&ones, &ones)?
        };
        // The matrix is numerically rank deficient well before kmax; keep
        // expanding the basis through tiny divisors so the study covers the
        // full range instead of stopping at the numerical rank.
        state.keep_tiny_pivots();
        let mut conds = vec![basis_condition(state.d(), 1)];
        for k in 2..=kmax {
            if state.termination().is_some() {
                break;
            }
            if pivoted {
                sim_hess_pivoted_step(&mut state, &a, &b);
            } else {
                sim_hess_step(&mut state, &a, &b);
            }
            if state.d().ncols() < k {
                break;
            }
            conds.push(basis_condition(state.d(), k));
        }
        conds.resize(kmax, f64::NAN);
        Ok(conds)
    };

    let pivoted = conds_for(true)?;
    let unpivoted = conds_for(false)?;
    Ok(pivoted
        .into_iter()
        .zip(unpivoted)
        .enumerate()
        .map(|(i, (cond_pivoted, cond_unpivoted))| ConditioningRow {
            k: i + 1,
            cond_pivoted,
            cond_unpivoted,
        })
        .collect())
}

/// Writes the conditioning study as CSV.
pub fn write_conditioning_csv(path: &Path, rows: &[ConditioningRow]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "k,cond_pivoted,cond_unpivoted")?;
    for row in rows {
        writeln!(out, "{},{:e},{:e}", row.k, row.cond_pivoted, row.cond_unpivoted)?;
    }
    out.flush()?;
    Ok(())
}

/// Per-step outcome of the residual-comparison study.
#[derive(Debug, Clone)]
pub struct SandwichRow {
    /// Step index.
    pub k: usize,
    /// Residual of the orthonormal-basis method.
    pub r_gpmr: f64,
    /// Residual of the inner-product-free method.
    pub r_gpcmrh: f64,
    /// Condition number of the interleaved basis.
    pub kappa_w: f64,
    /// `r_gpcmrh / r_gpmr`, the observed gap.
    pub ratio: f64,
    /// Lower inequality (`r_gpmr <= r_gpcmrh`) held.
    pub lower_ok: bool,
    /// Upper inequality (`r_gpcmrh <= kappa_w * r_gpmr`) held.
    pub upper_ok: bool,
}

/// Builds a seeded random dense-block system and verifies the residual
/// comparison at every step up to `kmax`.
pub fn sandwich_study(seed: u64, m: usize, n: usize, kmax: usize) -> Result<Vec<SandwichRow>> {
    if m < 2 || n < 2 || kmax == 0 {
        return Err(HarnessError::Config(format!(
            "need m, n >= 2 and kmax >= 1, got m = {m}, n = {n}, kmax = {kmax}"
        )));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut fill = |nrows: usize, ncols: usize| {
        let mut out = DenseMatrix::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                out.set(i, j, rng.gen_range(-1.0..1.0));
            }
        }
        out
    };
    let a = fill(m, n);
    let b = fill(n, m);
    let rhs_b: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let rhs_c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sys = BlockSystem::new(1.0, 1.0, Arc::new(a), Arc::new(b), rhs_b, rhs_c)?;

    let checks = sandwich_verify(&sys, kmax)?;
    Ok(checks
        .into_iter()
        .map(|c| SandwichRow {
            k: c.k,
            r_gpmr: c.r_gpmr,
            r_gpcmrh: c.r_gpcmrh,
            kappa_w: c.kappa_w,
            ratio: c.r_gpcmrh / c.r_gpmr,
            lower_ok: c.lower_ok,
            upper_ok: c.upper_ok,
        })
        .collect())
}

/// Writes the residual-comparison study as CSV.
pub fn write_sandwich_csv(path: &Path, rows: &[SandwichRow]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "k,r_gpmr,r_gpcmrh,kappa_w,ratio,lower_ok,upper_ok")?;
    for row in rows {
        writeln!(
            out,
            "{},{:e},{:e},{:e},{:e},{},{}",
            row.k, row.r_gpmr, row.r_gpcmrh, row.kappa_w, row.ratio, row.lower_ok, row.upper_ok
        )?;
    }
    out.flush()?;
    Ok(())
}
