//! Dense complex linear algebra for small dimensions.
//!
//! Tensor factors are numbered from the left: in `a ⊗ b`, factor 0 is `a`.
//! Flat indices are row-major over the factor digits.

mod eigen;
mod matrix;
mod ortho;
mod vector;

pub use eigen::{hermitian_eig, EigenDecomposition};
pub use matrix::ComplexMatrix;
pub use ortho::{gram_schmidt_complete, orthonormality_residual};
pub use vector::ComplexVector;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn tensor_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.tensor(b)
}

pub fn partial_trace<T: Real>(
    rho: &ComplexMatrix<T>,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix<T>> {
    rho.partial_trace(dims, keep)
}

pub fn is_hermitian<T: Real>(h: &ComplexMatrix<T>, tol: T) -> bool {
    h.is_square() && h.hermitian_residual() <= tol
}

pub fn is_unitary<T: Real>(u: &ComplexMatrix<T>, tol: T) -> bool {
    u.is_square() && u.unitary_residual() <= tol
}

/// Hermitian, unit trace and no eigenvalue below `-tol`.
pub fn is_density<T: Real>(w: &ComplexMatrix<T>, tol: T) -> bool {
    if !is_hermitian(w, tol) {
        return false;
    }
    let tr = w.trace();
    if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
        return false;
    }
    match hermitian_eig(w, tol) {
        Ok(eig) => eig.eigenvalues.iter().all(|&x| x >= -tol),
        Err(_) => false,
    }
}

pub(crate) fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!("invalid factor dims {dims:?}")));
    }
    let prod: usize = dims.iter().product();
    if prod != total {
        return Err(Error::DimensionMismatch(format!(
            "factor dims {dims:?} have product {prod}, expected {total}"
        )));
    }
    Ok(())
}

/// Splits a flat index into per-factor digits, factor 0 most significant.
pub(crate) fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (k, &d) in dims.iter().enumerate().rev() {
        out[k] = idx % d;
        idx /= d;
    }
    out
}

pub(crate) fn flat_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}
