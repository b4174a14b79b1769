use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

use super::ComplexVector;

/// Largest deviation of the Gram matrix of `vectors` from the identity.
pub fn orthonormality_residual<T: Real>(vectors: &[ComplexVector<T>]) -> T {
    let mut worst = T::zero();
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let target = if i == j { cr(T::one()) } else { cr(T::zero()) };
            worst = worst.max((a.inner(b) - target).norm());
        }
    }
    worst
}

/// Extends an orthonormal family to an orthonormal basis of the `dim`-dimensional space.
///
/// The input vectors are returned unchanged as the leading entries. The
/// remaining vectors come from projecting the standard basis vectors, in
/// index order, off the span built so far and keeping those whose residual
/// norm exceeds `T::rank_eps()`. Projection is done twice per candidate.
pub fn gram_schmidt_complete<T: Real>(
    partial: &[ComplexVector<T>],
    dim: usize,
    tol: T,
) -> Result<Vec<ComplexVector<T>>> {
    if partial.len() > dim {
        return Err(Error::NotOrthonormal { residual: f64::INFINITY });
    }
    if let Some(v) = partial.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "vector of dim {} in a {dim}-dimensional completion",
            v.dim()
        )));
    }
    let residual = orthonormality_residual(partial);
    if residual > tol {
        return Err(Error::NotOrthonormal { residual: residual.as_f64() });
    }

    let mut basis = partial.to_vec();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut r = ComplexVector::basis(dim, k);
        for _ in 0..2 {
            for b in &basis {
                r = &r - &b.scale(b.inner(&r));
            }
        }
        if r.norm() > T::rank_eps() {
            let mut u = r.scale(cr(T::one() / r.norm()));
            for b in &basis {
                u = &u - &b.scale(b.inner(&u));
            }
            basis.push(u.scale(cr(T::one() / u.norm())));
        }
    }
    debug_assert_eq!(basis.len(), dim);
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completes_e0() {
        let out = gram_schmidt_complete(&[ComplexVector::<f64>::basis(2, 0)], 2, 1e-9).unwrap();
        assert_eq!(out, vec![ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)]);
    }

    #[test]
    fn completes_diagonal_vector() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = ComplexVector::from_reals(&[s, s]).unwrap();
        let out = gram_schmidt_complete(std::slice::from_ref(&d), 2, 1e-9).unwrap();
        assert_eq!(out[0], d);
        assert!(out[1].inner(&d).norm() < 1e-15);
        assert!((out[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_input_gives_standard_basis() {
        let out = gram_schmidt_complete::<f64>(&[], 4, 1e-9).unwrap();
        for (k, v) in out.iter().enumerate() {
            assert_eq!(*v, ComplexVector::basis(4, k));
        }
    }

    #[test]
    fn rejects_non_orthonormal_input() {
        let a = ComplexVector::from_reals(&[1.0, 0.0]).unwrap();
        let b = ComplexVector::from_reals(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            gram_schmidt_complete(&[a.clone(), b], 2, 1e-9),
            Err(Error::NotOrthonormal { .. })
        ));
        assert!(matches!(
            gram_schmidt_complete(&[a.clone(), a.clone(), a], 2, 1e-9),
            Err(Error::NotOrthonormal { .. })
        ));
    }
}
