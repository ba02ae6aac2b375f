//! General (non-Hermitian) complex eigendecomposition.
//!
//! `nalgebra` provides the complex Schur form `M = Q T Q^†`; eigenvectors of
//! the upper-triangular `T` come from back-substitution and are mapped back
//! through `Q`.

use nalgebra::linalg::Schur;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};

pub(crate) struct Eigen {
    pub values: Vec<C64>,
    /// Right eigenvectors as unit-norm columns.
    pub vectors: CMatrix,
}

pub(crate) fn eigen_decompose(m: &CMatrix) -> Result<Eigen> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidArgument(format!(
            "eigensolve needs a square matrix, got {:?}",
            m.shape()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericFailure(
            "matrix has non-finite entries".into(),
        ));
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::NumericFailure("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let values: Vec<C64> = (0..n).map(|k| t[(k, k)]).collect();

    let tnorm = t
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let smin = f64::EPSILON * tnorm;

    // Eigenvectors of the triangular factor, one column per eigenvalue.
    let mut y = CMatrix::zeros(n, n);
    let mut rhs = CVector::zeros(n);
    for k in 0..n {
        let lambda = values[k];
        y[(k, k)] = C64::new(1.0, 0.0);
        for j in 0..k {
            rhs[j] = -t[(j, k)];
        }
        for j in (0..k).rev() {
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < smin {
                denom = C64::new(smin, 0.0);
            }
            let yj = rhs[j] / denom;
            y[(j, k)] = yj;
            if yj != C64::new(0.0, 0.0) {
                for i in 0..j {
                    rhs[i] -= t[(i, j)] * yj;
                }
            }
        }
    }

    let mut vectors = q * y;
    for mut col in vectors.column_iter_mut() {
        let norm = col.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NumericFailure("degenerate eigenvector".into()));
        }
        col /= C64::new(norm, 0.0);
    }
    Ok(Eigen { values, vectors })
}
