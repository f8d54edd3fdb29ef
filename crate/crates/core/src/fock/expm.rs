//! Checked wrapper around nalgebra's scaling-and-squaring matrix exponential.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `exp(A)` for a square real matrix.
pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.ncols() });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("matrix exponential of non-finite matrix".into()));
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let r = a.exp();
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("matrix exponential overflowed".into()));
    }
    Ok(r)
}

/// `max |QᵀQ − I|`, the orthogonality defect of a real matrix.
pub fn orthogonality_defect(q: &DMatrix<f64>) -> f64 {
    let n = q.ncols();
    let g = q.transpose() * q;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}
