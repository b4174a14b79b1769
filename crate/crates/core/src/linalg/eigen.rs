//! Cyclic Jacobi diagonalization for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation to the resulting
//! real symmetric 2x2 block. Sweeps visit pivots in row-major order of the
//! upper triangle, so identical inputs always produce identical outputs.

use crate::error::{Error, Result};
use crate::scalar::{c, cr, Real};

use super::{ComplexMatrix, ComplexVector};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Vec<ComplexVector<T>>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Σ wᵢ |vᵢ⟩⟨vᵢ|.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (w, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out = &out + &ComplexMatrix::projector(v).scale(cr(*w));
        }
        out
    }

    /// Number of eigenvalues above `T::rank_eps()`.
    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|&&w| w > T::rank_eps()).count()
    }
}

/// Diagonalizes a Hermitian matrix. Fails if `‖h − h†‖_F > tol`.
pub fn hermitian_eig<T: Real>(h: &ComplexMatrix<T>, tol: T) -> Result<EigenDecomposition<T>> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch("eigendecomposition of a non-square matrix".into()));
    }
    let residual = h.hermitian_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual: residual.as_f64() });
    }
    let n = h.rows();
    // symmetrize so the iteration sees an exactly Hermitian input
    let half = T::lit(0.5);
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * half);
    for i in 0..n {
        a[(i, i)] = cr(a[(i, i)].re);
    }
    let mut v = ComplexMatrix::<T>::identity(n);

    let scale = a.frobenius_norm();
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(T, ComplexVector<T>)> =
        (0..n).map(|i| (a[(i, i)].re, v.column(i))).collect();
    // stable: equal eigenvalues keep sweep order
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag; // e^{iφ}
    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = {
        let t = T::one() / (theta.abs() + (T::one() + theta * theta).sqrt());
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let cs = T::one() / (T::one() + t * t).sqrt();
    let sn = t * cs;

    // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane
    let e = phase.conj();
    let j_pp = cr(cs);
    let j_pq = cr(sn);
    let j_qp = e * c(-sn, T::zero());
    let j_qq = e * cr(cs);

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = cr(T::zero());
    a[(q, p)] = cr(T::zero());
    a[(p, p)] = cr(app - t * mag);
    a[(q, q)] = cr(aqq + t * mag);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cplx;

    fn m(rows: &[&[(f64, f64)]]) -> ComplexMatrix<f64> {
        ComplexMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&(re, im)| Cplx::new(re, im)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn diagonal_input_is_already_solved() {
        let d = ComplexMatrix::from_real_diagonal(&[0.3, 0.7]);
        let eig = hermitian_eig(&d, 1e-9).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.7, 0.3]);
        assert_eq!(eig.eigenvectors[0], ComplexVector::basis(2, 1));
        assert_eq!(eig.eigenvectors[1], ComplexVector::basis(2, 0));
    }

    #[test]
    fn pauli_x() {
        let x = m(&[&[(0., 0.), (1., 0.)], &[(1., 0.), (0., 0.)]]);
        let eig = hermitian_eig(&x, 1e-9).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ComplexVector::from_reals(&[s, s]).unwrap();
        let minus = ComplexVector::from_reals(&[s, -s]).unwrap();
        assert!((eig.eigenvectors[0].inner(&plus).norm() - 1.0).abs() < 1e-12);
        assert!((eig.eigenvectors[1].inner(&minus).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_y_needs_complex_rotation() {
        let y = m(&[&[(0., 0.), (0., -1.)], &[(0., 1.), (0., 0.)]]);
        let eig = hermitian_eig(&y, 1e-9).unwrap();
        assert!(eig.reconstruct().distance(&y) < 1e-12);
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = m(&[&[(0., 0.), (1., 0.)], &[(0., 0.), (0., 0.)]]);
        assert!(matches!(hermitian_eig(&a, 1e-9), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn zero_matrix() {
        let z = ComplexMatrix::<f64>::zeros(3, 3);
        let eig = hermitian_eig(&z, 1e-9).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0; 3]);
        assert_eq!(eig.rank(), 0);
    }

    #[test]
    fn single_precision() {
        let h = m(&[&[(2., 0.), (0., 1.)], &[(0., -1.), (2., 0.)]]);
        let h32 = ComplexMatrix::<f32>::from_fn(2, 2, |i, j| {
            Cplx::new(h[(i, j)].re as f32, h[(i, j)].im as f32)
        });
        let eig = hermitian_eig(&h32, 1e-4).unwrap();
        assert!((eig.eigenvalues[0] - 3.0).abs() < 1e-5);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-5);
    }
}
