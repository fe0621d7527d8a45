//! Thomas algorithm for the tridiagonal systems of the implicit diffusion
//! sub-steps.

use crate::error::{Error, Result};

/// Solve `A x = rhs` where `A` has sub-diagonal `lower`, main diagonal
/// `diag` and super-diagonal `upper`. `lower[0]` and `upper[n-1]` are unused.
///
/// No pivoting: the systems built by the solver are diagonally dominant.
pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    if lower.len() != n || diag.len() != n || upper.len() != n {
        return Err(Error::Invalid("tridiagonal coefficient lengths differ".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut den = diag[0];
    if den == 0.0 || !den.is_finite() {
        return Err(Error::LinearSolve { row: 0 });
    }
    c[0] = upper[0] / den;
    d[0] = rhs[0] / den;
    for i in 1..n {
        den = diag[i] - lower[i] * c[i - 1];
        if den == 0.0 || !den.is_finite() {
            return Err(Error::LinearSolve { row: i });
        }
        c[i] = upper[i] / den;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / den;
    }

    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}
