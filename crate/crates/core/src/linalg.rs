//! Dense complex-matrix helpers and collective spin operators.
//!
//! Every operator, state and superoperator in the crate is a
//! [`CMatrix`] (a dense `nalgebra` matrix of `Complex64`). The spin
//! operators live in the maximal `s = N/2` sector with the basis ordered
//! `m = s, s-1, ..., -s`, so `S_z` is diagonal and decreasing. Units use
//! `hbar = 1`.
//!
//! Vectorization is column stacking, which is also `nalgebra`'s storage
//! order. Under that convention `vec(A X B) = (B^T ⊗ A) vec(X)`.

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default absolute tolerance for matrix comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Tolerance used when validating density matrices.
pub const STATE_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entrywise modulus of `a - b`. Shapes must agree.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Entrywise comparison with an absolute tolerance.
pub fn approx_eq(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && max_abs_diff(a, b) <= tol
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// `Tr(A^† B)`, the Hilbert-Schmidt inner product.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Max entry of `A - A^†`.
pub fn hermiticity_error(a: &CMatrix) -> f64 {
    let (r, cols) = a.shape();
    if r != cols {
        return f64::INFINITY;
    }
    let mut err = 0.0f64;
    for i in 0..r {
        for j in i..r {
            err = err.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    err
}

pub fn hermitize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * c(0.5, 0.0)
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = hermitize(a)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

fn check_spin_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("spin count N must be at least 1"));
    }
    Ok(())
}

/// Raising operator `S_+` in the `s = N/2` sector.
pub fn spin_plus(n: usize) -> Result<CMatrix> {
    check_spin_count(n)?;
    let s = n as f64 / 2.0;
    let mut sp = CMatrix::zeros(n + 1, n + 1);
    for j in 1..=n {
        let m = s - j as f64;
        sp[(j - 1, j)] = c((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    Ok(sp)
}

/// `S_z = diag(s, s-1, ..., -s)` with `s = N/2`.
pub fn spin_z(n: usize) -> Result<CMatrix> {
    check_spin_count(n)?;
    let s = n as f64 / 2.0;
    Ok(CMatrix::from_diagonal(&CVector::from_fn(n + 1, |j, _| {
        c(s - j as f64, 0.0)
    })))
}

/// `S_x = (S_+ + S_-)/2`: real symmetric, tridiagonal, zero diagonal.
pub fn spin_x(n: usize) -> Result<CMatrix> {
    let sp = spin_plus(n)?;
    Ok((&sp + sp.adjoint()) * c(0.5, 0.0))
}

/// `S_y = (S_+ - S_-)/(2i)`.
pub fn spin_y(n: usize) -> Result<CMatrix> {
    let sp = spin_plus(n)?;
    Ok((&sp - sp.adjoint()) * c(0.0, -0.5))
}

/// `max |S_x² + S_y² + S_z² - s(s+1) I|` in the spin-`N/2` sector.
pub fn casimir_residual(n: usize) -> Result<f64> {
    let (x, y, z) = (spin_x(n)?, spin_y(n)?, spin_z(n)?);
    let s = n as f64 / 2.0;
    let cas = &x * &x + &y * &y + &z * &z;
    Ok(max_abs_diff(
        &cas,
        &(identity(n + 1) * c(s * (s + 1.0), 0.0)),
    ))
}

/// Kronecker product with `(i*dim_b + k, j*dim_b + l)` indexing.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Column-stacking vectorization `|A>>`.
pub fn vectorize(a: &CMatrix) -> CVector {
    CVector::from_column_slice(a.as_slice())
}

/// Inverse of [`vectorize`] for a `d x d` matrix.
pub fn devectorize(v: &CVector) -> Result<CMatrix> {
    let len = v.len();
    let d = (len as f64).sqrt().round() as usize;
    if d == 0 || d * d != len {
        return Err(invalid(format!(
            "vector length {len} is not a nonzero perfect square"
        )));
    }
    Ok(CMatrix::from_column_slice(d, d, v.as_slice()))
}

/// Which tensor factor a partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Partial transpose of an operator on `C^{d1} ⊗ C^{d2}`.
pub fn partial_transpose(rho: &CMatrix, d1: usize, d2: usize, sub: Subsystem) -> Result<CMatrix> {
    let d = d1 * d2;
    if d1 == 0 || d2 == 0 || rho.nrows() != d || rho.ncols() != d {
        return Err(invalid(format!(
            "matrix of shape {:?} does not factor as {d1} x {d2}",
            rho.shape()
        )));
    }
    let mut out = CMatrix::zeros(d, d);
    for ia in 0..d1 {
        for ib in 0..d2 {
            for ja in 0..d1 {
                for jb in 0..d2 {
                    let v = rho[(ia * d2 + ib, ja * d2 + jb)];
                    let (r, col) = match sub {
                        Subsystem::A => (ja * d2 + ib, ia * d2 + jb),
                        Subsystem::B => (ia * d2 + jb, ja * d2 + ib),
                    };
                    out[(r, col)] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Trace norm `Tr sqrt(A^† A)`, the sum of singular values.
pub fn trace_norm(a: &CMatrix) -> f64 {
    a.singular_values().iter().sum()
}

/// Trace norm of a Hermitian matrix via its eigenvalues (cheaper than SVD).
pub fn hermitian_trace_norm(a: &CMatrix) -> f64 {
    hermitize(a)
        .symmetric_eigenvalues()
        .iter()
        .map(|x| x.abs())
        .sum()
}

/// Real Bloch vector of a qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let b = BlochVector { x, y, z };
        b.validate()?;
        Ok(b)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let n2 = self.x * self.x + self.y * self.y + self.z * self.z;
        if !n2.is_finite() || n2 > 1.0 + 1e-12 {
            return Err(invalid(format!("Bloch vector norm^2 {n2} exceeds 1")));
        }
        Ok(())
    }
}

/// `rho = (I + r_x σ_x + r_y σ_y + r_z σ_z) / 2`.
pub fn bloch_state(b: &BlochVector) -> Result<DensityMatrix> {
    b.validate()?;
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            c(0.5 * (1.0 + b.z), 0.0),
            c(0.5 * b.x, -0.5 * b.y),
            c(0.5 * b.x, 0.5 * b.y),
            c(0.5 * (1.0 - b.z), 0.0),
        ],
    );
    Ok(DensityMatrix::new_unchecked(m))
}

/// A validated density matrix: Hermitian, unit trace, positive
/// semidefinite, each within [`STATE_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::validate(&m, STATE_TOL)?;
        Ok(DensityMatrix(m))
    }

    /// Wraps `m` without checking. Callers guarantee validity.
    pub fn new_unchecked(m: CMatrix) -> Self {
        DensityMatrix(m)
    }

    /// Pure state `|ψ><ψ|` from a (not necessarily normalized) vector.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let n = psi.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(invalid("state vector must have finite nonzero norm"));
        }
        let v = psi / c(n, 0.0);
        Ok(DensityMatrix(&v * v.adjoint()))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix(identity(d) / c(d as f64, 0.0))
    }

    pub fn validate(m: &CMatrix, tol: f64) -> Result<()> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(invalid(format!(
                "density matrix must be square, got {:?}",
                m.shape()
            )));
        }
        let herm = hermiticity_error(m);
        if herm > tol {
            return Err(invalid(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = trace(m);
        if (tr - ONE).norm() > tol {
            return Err(invalid(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigenvalues(m)[0];
        if min < -tol {
            return Err(invalid(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    /// `U ρ U^†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> DensityMatrix {
        DensityMatrix(u * &self.0 * u.adjoint())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.0)[0]
    }
}

impl Deref for DensityMatrix {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

impl From<DensityMatrix> for CMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.0
    }
}

impl TryFrom<CMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(m: CMatrix) -> Result<Self> {
        DensityMatrix::new(m)
    }
}
