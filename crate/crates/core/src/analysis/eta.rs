//! Perron weights that make a weighted log norm of a Metzler matrix equal
//! (or approach) its spectral abscissa.

use nalgebra::{DMatrix, Dim, Matrix, RawStorage};

use super::lognorm::{is_irreducible, is_metzler};
use crate::error::{Error, Result};

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 100_000;

/// Dominant eigenvector of a non-negative matrix by power iteration,
/// normalized to unit 1-norm.
fn perron_vector(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    let mut v = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..POWER_MAX_ITER {
        for i in 0..n {
            next[i] = (0..n).map(|j| a[(i, j)] * v[j]).sum();
        }
        let total: f64 = next.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::NoConvergence { iterations: 0 });
        }
        let mut change = 0.0f64;
        for i in 0..n {
            next[i] /= total;
            change = change.max((next[i] - v[i]).abs());
        }
        std::mem::swap(&mut v, &mut next);
        if change < POWER_TOL {
            return Ok(v);
        }
    }
    Err(Error::NoConvergence {
        iterations: POWER_MAX_ITER,
    })
}

/// Left and right dominant eigenvectors of `M + delta 11^T`.
///
/// The matrix is shifted by a multiple of the identity so that it is
/// non-negative with every eigenvalue in the right half plane; the shift does
/// not change eigenvectors.
pub fn dominant_eigenvectors<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(
    m: &Matrix<f64, R, C, S>,
    delta: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = m.nrows();
    let mut a = DMatrix::from_fn(n, m.ncols(), |i, j| m[(i, j)] + delta);
    let min_diag = (0..n).map(|i| a[(i, i)]).fold(f64::INFINITY, f64::min);
    let base = (-min_diag).max(0.0);
    for i in 0..n {
        a[(i, i)] += base;
    }
    let radius = super::lognorm::norm_inf(&a).max(1.0);
    for i in 0..n {
        a[(i, i)] += radius;
    }
    let right = perron_vector(&a)?;
    let left = perron_vector(&a.transpose())?;
    Ok((left, right))
}

/// Weights `eta_i = l_i^{1/p} / r_i^{1/q}` with `l`, `r` the left and right
/// dominant eigenvectors of `M + delta 11^T` and `q` the conjugate exponent
/// of `p` (`p` in `[1, inf]`).
///
/// For irreducible `M`, `delta = 0` gives `mu_{p,[eta]}(M) = alpha(M)`.
/// Reducible `M` needs `delta > 0`, in which case the log norm exceeds the
/// abscissa by a margin that vanishes with `delta`.
pub fn compute_eta<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(m: &Matrix<f64, R, C, S>, p: f64, delta: f64) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidParams("empty matrix has no Perron weights".into()));
    }
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && !(m[(i, j)] >= 0.0) {
                return Err(Error::NotMetzler {
                    row: i,
                    col: j,
                    value: m[(i, j)],
                });
            }
        }
    }
    debug_assert!(is_metzler(m));
    if !(p >= 1.0) {
        return Err(Error::UnsupportedExponent(p));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParams(format!("delta must be non-negative (got {delta})")));
    }
    if delta == 0.0 && !is_irreducible(m) {
        return Err(Error::ReducibleWithZeroDelta);
    }
    let (left, right) = dominant_eigenvectors(m, delta)?;
    // 1/p and 1/q, with 1/inf = 0
    let inv_p = 1.0 / p;
    let inv_q = 1.0 - inv_p;
    let eta: Vec<f64> = left
        .iter()
        .zip(&right)
        .map(|(&l, &r)| l.powf(inv_p) / r.powf(inv_q))
        .collect();
    for (index, &value) in eta.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveWeight { index, value });
        }
    }
    Ok(eta)
}
