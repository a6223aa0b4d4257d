//! Matrix Market coordinate-format input and output.
//!
//! Supports real (and integer-valued) `general` and `symmetric` matrices in
//! coordinate format. Symmetric files are expanded to full storage on read;
//! duplicate coordinates are summed. Errors carry the 1-based line number of
//! the offending input.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::linalg::sparse::SparseMatrix;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a sparse matrix from Matrix Market coordinate format.
pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<SparseMatrix> {
    let mut lines = reader.lines();
    let mut line_no = 0usize;

    // Banner: %%MatrixMarket matrix coordinate <field> <symmetry>
    let banner = loop {
        match lines.next() {
            Some(line) => {
                line_no += 1;
                let line = line.map_err(|e| parse_error(line_no, e.to_string()))?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(parse_error(line_no, "missing Matrix Market banner")),
        }
    };
    let banner_line = line_no;
    let tokens: Vec<String> = banner
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_error(
            banner_line,
            format!("malformed banner: {banner:?}"),
        ));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(parse_error(
            banner_line,
            format!(
                "only 'matrix coordinate' files are supported, got '{} {}'",
                tokens[1], tokens[2]
            ),
        ));
    }
    match tokens[3].as_str() {
        "real" | "integer" => {}
        other => {
            return Err(parse_error(
                banner_line,
                format!("unsupported field '{other}' (expected real)"),
            ))
        }
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => {
            return Err(parse_error(
                banner_line,
                format!("unsupported symmetry '{other}' (expected general or symmetric)"),
            ))
        }
    };

    // Size line: the first non-comment, non-blank line after the banner.
    let size_line = loop {
        match lines.next() {
            Some(line) => {
                line_no += 1;
                let line = line.map_err(|e| parse_error(line_no, e.to_string()))?;
                let trimmed = line.trim().to_string();
                if trimmed.is_empty() || trimmed.starts_with('%') {
                    continue;
                }
                break trimmed;
            }
            None => return Err(parse_error(line_no, "missing size line")),
        }
    };
    let size_line_no = line_no;
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(parse_error(
            size_line_no,
            format!("size line must have 3 fields, got {}", dims.len()),
        ));
    }
    let nrows: usize = dims[0]
        .parse()
        .map_err(|_| parse_error(size_line_no, format!("invalid row count '{}'", dims[0])))?;
    let ncols: usize = dims[1]
        .parse()
        .map_err(|_| parse_error(size_line_no, format!("invalid column count '{}'", dims[1])))?;
    let nnz: usize = dims[2]
        .parse()
        .map_err(|_| parse_error(size_line_no, format!("invalid entry count '{}'", dims[2])))?;

    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(nnz);
    let mut seen = 0usize;
    while seen < nnz {
        let line = match lines.next() {
            Some(line) => {
                line_no += 1;
                line.map_err(|e| parse_error(line_no, e.to_string()))?
            }
            None => {
                return Err(parse_error(
                    line_no,
                    format!("expected {nnz} entries, found {seen}"),
                ))
            }
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_error(
                line_no,
                format!("entry must have 3 fields, got {}", fields.len()),
            ));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| parse_error(line_no, format!("invalid row index '{}'", fields[0])))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| parse_error(line_no, format!("invalid column index '{}'", fields[1])))?;
        let v: f64 = fields[2]
            .parse()
            .map_err(|_| parse_error(line_no, format!("invalid value '{}'", fields[2])))?;
        if i == 0 || i > nrows || j == 0 || j > ncols {
            return Err(parse_error(
                line_no,
                format!("index ({i}, {j}) out of range for a {nrows}x{ncols} matrix"),
            ));
        }
        triplets.push((i - 1, j - 1, v));
        if symmetric && i != j {
            triplets.push((j - 1, i - 1, v));
        }
        seen += 1;
    }

    SparseMatrix::from_triplets(nrows, ncols, &triplets)
}

/// Writes a sparse matrix in Matrix Market `real general` coordinate format.
///
/// Values are written with round-trip precision, so reading the output back
/// reproduces the matrix exactly.
pub fn write_matrix_market<W: Write>(mut writer: W, matrix: &SparseMatrix) -> std::io::Result<()> {
    writeln!(writer, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(
        writer,
        "{} {} {}",
        matrix.nrows(),
        matrix.ncols(),
        matrix.nnz()
    )?;
    for i in 0..matrix.nrows() {
        let (cols, vals) = matrix.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            writeln!(writer, "{} {} {}", i + 1, j + 1, v)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read_str(text: &str) -> Result<SparseMatrix> {
        read_matrix_market(text.as_bytes())
    }

    #[test]
    fn reads_a_general_matrix() {
        let text = "\
%%MatrixMarket matrix coordinate real general
% a comment
3 3 3
1 1 2.0
2 2 -1.5
3 1 4.0
";
        let a = read_str(text).unwrap();
        assert_eq!(a.nrows(), 3);
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.get(0, 0), 2.0);
        assert_eq!(a.get(1, 1), -1.5);
        assert_eq!(a.get(2, 0), 4.0);
    }

    #[test]
    fn expands_symmetric_storage() {
        let text = "\
%%MatrixMarket matrix coordinate real symmetric
2 2 2
1 1 1.0
2 1 5.0
";
        let a = read_str(text).unwrap();
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.get(0, 1), 5.0);
        assert_eq!(a.get(1, 0), 5.0);
        assert_eq!(a.get(0, 0), 1.0);
    }

    #[test]
    fn sums_duplicate_entries() {
        let text = "\
%%MatrixMarket matrix coordinate real general
2 2 2
1 1 1.0
1 1 2.0
";
        let a = read_str(text).unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 0), 3.0);
    }

    #[test]
    fn rejects_pattern_field_with_line_number() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n1 1 0\n";
        match read_str(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 1);
                assert!(message.contains("pattern"), "message: {message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_complex_field() {
        let text = "%%MatrixMarket matrix coordinate complex general\n1 1 0\n";
        assert!(read_str(text).is_err());
    }

    #[test]
    fn rejects_out_of_range_index_naming_the_line() {
        let text = "\
%%MatrixMarket matrix coordinate real general
2 2 1
3 1 1.0
";
        match read_str(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("out of range"), "message: {message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_truncated_file() {
        let text = "\
%%MatrixMarket matrix coordinate real general
2 2 2
1 1 1.0
";
        assert!(read_str(text).is_err());
    }

    #[test]
    fn accepts_integer_field_as_real_values() {
        let text = "\
%%MatrixMarket matrix coordinate integer general
2 2 1
2 2 7
";
        let a = read_str(text).unwrap();
        assert_eq!(a.get(1, 1), 7.0);
    }

    #[test]
    fn write_then_read_round_trips_exactly() {
        let a = SparseMatrix::from_triplets(
            3,
            2,
            &[(0, 0, 0.1), (1, 1, -2.0e-17), (2, 0, 12345.6789)],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&mut buf, &a).unwrap();
        let b = read_matrix_market(buf.as_slice()).unwrap();
        assert_eq!(a, b);
    }
}
