//! Cutting a square matrix into the block two-by-two layout, either at a
//! contiguous split index or along an explicit row partition (applied as a
//! symmetric permutation first).

use std::path::Path;

use block_krylov::linalg::sparse::SparseMatrix;

use crate::config::PartitionSpec;
use crate::error::{HarnessError, Result};

/// The four blocks and split right-hand side of a partitioned system.
#[derive(Debug)]
pub struct PartitionedBlocks {
    /// Leading diagonal block `M` (`m x m`).
    pub m_block: SparseMatrix,
    /// Upper off-diagonal block `A` (`m x n`).
    pub a_block: SparseMatrix,
    /// Lower off-diagonal block `B` (`n x m`).
    pub b_block: SparseMatrix,
    /// Trailing diagonal block `N` (`n x n`).
    pub n_block: SparseMatrix,
    /// First right-hand-side block.
    pub rhs_b: Vec<f64>,
    /// Second right-hand-side block.
    pub rhs_c: Vec<f64>,
    /// Row order applied before splitting (`new index -> original index`);
    /// identity splits leave this empty.
    pub row_order: Vec<usize>,
}

/// Reads a partition file: whitespace-separated 0-based row indices of the
/// first block, with `#` comments and blank lines ignored.
pub fn read_partition_file(path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for token in body.split_whitespace() {
            let index: usize = token.parse().map_err(|_| {
                HarnessError::Config(format!(
                    "partition file {}:{}: '{}' is not a row index",
                    path.display(),
                    lineno + 1,
                    token
                ))
            })?;
            rows.push(index);
        }
    }
    Ok(rows)
}

/// Applies the symmetric permutation `K[order[i]][order[j]]`.
fn permute_symmetric(k: &SparseMatrix, order: &[usize]) -> SparseMatrix {
    let size = k.nrows();
    let mut inverse = vec![0usize; size];
    for (new, &old) in order.iter().enumerate() {
        inverse[old] = new;
    }
    let mut triplets = Vec::with_capacity(k.nnz());
    for old_row in 0..size {
        let (cols, vals) = k.row(old_row);
        for (&old_col, &v) in cols.iter().zip(vals) {
            triplets.push((inverse[old_row], inverse[old_col], v));
        }
    }
    SparseMatrix::from_triplets(size, size, &triplets).expect("permutation preserves bounds")
}

/// Slices a square matrix into the four blocks at the given split index.
fn split_matrix(
    k: &SparseMatrix,
    m: usize,
) -> (SparseMatrix, SparseMatrix, SparseMatrix, SparseMatrix) {
    let size = k.nrows();
    let n = size - m;
    let (mut mm, mut ma, mut mb, mut mn) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for i in 0..size {
        let (cols, vals) = k.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            match (i < m, j < m) {
                (true, true) => mm.push((i, j, v)),
                (true, false) => ma.push((i, j - m, v)),
                (false, true) => mb.push((i - m, j, v)),
                (false, false) => mn.push((i - m, j - m, v)),
            }
        }
    }
    let build = |nrows, ncols, t: &Vec<(usize, usize, f64)>| {
        SparseMatrix::from_triplets(nrows, ncols, t).expect("block indices are in bounds")
    };
    (
        build(m, m, &mm),
        build(m, n, &ma),
        build(n, m, &mb),
        build(n, n, &mn),
    )
}

/// Cuts `k_full` and `rhs` into the block layout described by `spec`.
///
/// A contiguous split takes the leading `m` rows and columns as the first
/// block. An explicit partition permutes the listed rows (in the listed
/// order) to the front, the rest after them in ascending order, then splits.
pub fn partition_system(
    k_full: &SparseMatrix,
    spec: &PartitionSpec,
    rhs: &[f64],
) -> Result<PartitionedBlocks> {
    let size = k_full.nrows();
    if k_full.ncols() != size {
        return Err(HarnessError::Config(format!(
            "matrix must be square to partition, got {}x{}",
            size,
            k_full.ncols()
        )));
    }
    if rhs.len() != size {
        return Err(HarnessError::Config(format!(
            "right-hand side length {} does not match matrix size {size}",
            rhs.len()
        )));
    }

    let (m, order) = match spec {
        PartitionSpec::SplitIndex(m) => (*m, Vec::new()),
        PartitionSpec::FirstBlock(rows) => {
            let mut seen = vec![false; size];
            for &r in rows {
                if r >= size {
                    return Err(HarnessError::Config(format!(
                        "partition row {r} out of bounds for size {size}"
                    )));
                }
                if seen[r] {
                    return Err(HarnessError::Config(format!(
                        "partition row {r} listed twice"
                    )));
                }
                seen[r] = true;
            }
            let mut order = rows.clone();
            order.extend((0..size).filter(|&r| !seen[r]));
            (rows.len(), order)
        }
    };
    if m == 0 || m >= size {
        return Err(HarnessError::Config(format!(
            "split index {m} leaves an empty block in a size-{size} matrix"
        )));
    }

    let (k, rhs_perm): (std::borrow::Cow<'_, SparseMatrix>, Vec<f64>) = if order.is_empty() {
        (std::borrow::Cow::Borrowed(k_full), rhs.to_vec())
    } else {
        (
            std::borrow::Cow::Owned(permute_symmetric(k_full, &order)),
            order.iter().map(|&r| rhs[r]).collect(),
        )
    };

    let (m_block, a_block, b_block, n_block) = split_matrix(&k, m);
    let (rhs_b, rhs_c) = rhs_perm.split_at(m);
    Ok(PartitionedBlocks {
        m_block,
        a_block,
        b_block,
        n_block,
        rhs_b: rhs_b.to_vec(),
        rhs_c: rhs_c.to_vec(),
        row_order: order,
    })
}
