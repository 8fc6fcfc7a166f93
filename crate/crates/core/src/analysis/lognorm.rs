use nalgebra::{DMatrix, Dim, Matrix, RawStorage};

use crate::error::{Error, Result};

fn check_square<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(a: &Matrix<f64, R, C, S>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(())
}

/// Log norm induced by the infinity norm:
/// `max_i (a_ii + sum_{j != i} |a_ij|)`. An empty matrix yields `-inf`.
pub fn lognorm_inf<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(a: &Matrix<f64, R, C, S>) -> Result<f64> {
    check_square(a)?;
    let n = a.nrows();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { a[(i, j)] } else { a[(i, j)].abs() })
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Induced infinity norm (max absolute row sum); zero for empty matrices.
pub fn norm_inf<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(a: &Matrix<f64, R, C, S>) -> f64 {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Metzler majorant: diagonal kept, off-diagonal entries replaced by their
/// absolute values.
pub fn metzler_majorant<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(a: &Matrix<f64, R, C, S>) -> Result<DMatrix<f64>> {
    check_square(a)?;
    let n = a.nrows();
    Ok(DMatrix::from_fn(n, n, |i, j| if i == j { a[(i, j)] } else { a[(i, j)].abs() }))
}

pub fn is_metzler<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(a: &Matrix<f64, R, C, S>) -> bool {
    a.nrows() == a.ncols()
        && (0..a.nrows()).all(|i| (0..a.ncols()).all(|j| i == j || a[(i, j)] >= 0.0))
}

/// Strong connectivity of the off-diagonal sparsity pattern, checked by a
/// depth-first search from node 0 along both edge directions.
pub fn is_irreducible<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(a: &Matrix<f64, R, C, S>) -> bool {
    let n = a.nrows();
    if n <= 1 {
        return true;
    }
    let reach_all = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let entry = if forward { a[(i, j)] } else { a[(j, i)] };
                if i != j && entry != 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach_all(true) && reach_all(false)
}

/// Spectral abscissa via a general (real Schur) eigen-decomposition.
/// An empty matrix yields `-inf`.
pub fn spectral_abscissa<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(a: &Matrix<f64, R, C, S>) -> Result<f64> {
    check_square(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let dense = DMatrix::from_fn(n, n, |i, j| a[(i, j)]);
    let eig = dense.complex_eigenvalues();
    Ok(eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

fn check_weights(eta: &[f64], n: usize) -> Result<()> {
    if eta.len() != n {
        return Err(Error::DimensionMismatch {
            what: "norm weights",
            expected: n,
            got: eta.len(),
        });
    }
    for (index, &value) in eta.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveWeight { index, value });
        }
    }
    Ok(())
}

/// Log norm of `A` in the weighted norm `||diag(eta) x||_p`, i.e.
/// `mu_p(D A D^{-1})` with `D = diag(eta)`, for `p` in `{1, inf}`.
pub fn weighted_lognorm<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(a: &Matrix<f64, R, C, S>, eta: &[f64], p: f64) -> Result<f64> {
    check_square(a)?;
    let n = a.nrows();
    check_weights(eta, n)?;
    let scaled = |i: usize, j: usize| {
        if i == j {
            a[(i, j)]
        } else {
            a[(i, j)].abs() * eta[i] / eta[j]
        }
    };
    let value = if p == f64::INFINITY {
        (0..n)
            .map(|i| (0..n).map(|j| scaled(i, j)).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    } else if p == 1.0 {
        (0..n)
            .map(|j| (0..n).map(|i| scaled(i, j)).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        return Err(Error::UnsupportedExponent(p));
    };
    Ok(value)
}
