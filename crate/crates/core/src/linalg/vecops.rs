//! Small dense vector kernels used throughout the solvers.

/// Euclidean norm of `x`.
pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Maximum absolute entry of `x` (0.0 for an empty slice).
pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Dot product of `x` and `y`.
///
/// # Panics
/// Panics if the slices have different lengths.
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "dot: length mismatch");
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `y += alpha * x`.
///
/// # Panics
/// Panics if the slices have different lengths.
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    assert_eq!(x.len(), y.len(), "axpy: length mismatch");
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `x *= alpha`.
pub fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

/// `x /= denom` entrywise.
///
/// Basis normalizations divide rather than multiply by a precomputed
/// reciprocal: the division keeps every entry correctly rounded, so exactly
/// representable quotients (such as `3.0 / 5.0`) come out bitwise equal.
pub fn div(denom: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi /= denom;
    }
}

/// Index of the entry with the largest absolute value, breaking ties in
/// favor of the lowest index. Returns `None` for an empty slice.
pub fn argmax_abs(x: &[f64]) -> Option<usize> {
    if x.is_empty() {
        return None;
    }
    let mut best = 0;
    for (i, v) in x.iter().enumerate().skip(1) {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm2_of_three_four_is_five() {
        assert_eq!(norm2(&[3.0, 4.0]), 5.0);
    }

    #[test]
    fn argmax_abs_breaks_ties_toward_lowest_index() {
        assert_eq!(argmax_abs(&[-2.0, 2.0, 1.0]), Some(0));
        assert_eq!(argmax_abs(&[0.1, 3.0, 0.5]), Some(1));
        assert_eq!(argmax_abs(&[]), None);
    }

    #[test]
    fn axpy_accumulates_in_place() {
        let mut y = vec![1.0, 1.0];
        axpy(2.0, &[3.0, -1.0], &mut y);
        assert_eq!(y, vec![7.0, -1.0]);
    }

    #[test]
    fn div_rounds_each_quotient_exactly() {
        let mut x = vec![3.0, 4.0];
        div(5.0, &mut x);
        assert_eq!(x, vec![0.6, 0.8]);
        // The reciprocal shortcut misses the correctly rounded quotient.
        assert_ne!(3.0 * (1.0 / 5.0), 0.6);
    }
}
