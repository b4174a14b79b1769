use crate::error::{Error, Result};
use crate::linalg::{is_density, ComplexMatrix, ComplexVector};
use crate::scalar::{cr, Cplx, Real};

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    vec: ComplexVector<T>,
}

impl<T: Real> StateVector<T> {
    /// Wraps a vector whose norm is 1 within `T::default_tol()`.
    pub fn new(vec: ComplexVector<T>) -> Result<Self> {
        let n = vec.norm();
        if (n - T::one()).abs() > T::default_tol() {
            return Err(Error::InvalidState(format!("norm {} is not 1", n.as_f64())));
        }
        Ok(Self { vec })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalize(vec: ComplexVector<T>) -> Result<Self> {
        vec.normalized()
            .map(|vec| Self { vec })
            .ok_or_else(|| Error::InvalidState("cannot normalize a zero vector".into()))
    }

    pub fn from_amplitudes(amps: Vec<Cplx<T>>) -> Result<Self> {
        Self::new(ComplexVector::new(amps)?)
    }

    pub fn from_reals(amps: &[T]) -> Result<Self> {
        Self::new(ComplexVector::from_reals(amps)?)
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        Self {
            vec: ComplexVector::basis(dim, index),
        }
    }

    pub fn dim(&self) -> usize {
        self.vec.dim()
    }

    pub fn vector(&self) -> &ComplexVector<T> {
        &self.vec
    }

    pub fn into_vector(self) -> ComplexVector<T> {
        self.vec
    }

    pub fn amplitude(&self, i: usize) -> Cplx<T> {
        self.vec[i]
    }

    pub fn inner(&self, other: &Self) -> Cplx<T> {
        self.vec.inner(&other.vec)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            vec: self.vec.tensor(&other.vec),
        }
    }

    pub fn projector(&self) -> ComplexMatrix<T> {
        ComplexMatrix::projector(&self.vec)
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix {
            mat: self.projector(),
        }
    }

    pub fn permute_factors(&self, dims: &[usize], order: &[usize]) -> Result<Self> {
        Ok(Self {
            vec: self.vec.permute_factors(dims, order)?,
        })
    }

    /// Reduced density matrix of the `keep` factors.
    pub fn reduced(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix<T>> {
        Ok(DensityMatrix {
            mat: self.projector().partial_trace(dims, keep)?,
        })
    }

    /// Representative with the largest-magnitude amplitude (lowest index on
    /// ties) real and positive.
    pub fn canonical_phase(&self) -> Self {
        let mut best = 0;
        let mut best_mag = T::zero();
        for (i, z) in self.vec.iter().enumerate() {
            let m = z.norm();
            if m > best_mag + T::epsilon() * T::lit(16.0) {
                best = i;
                best_mag = m;
            }
        }
        if best_mag == T::zero() {
            return self.clone();
        }
        let phase = self.vec[best].conj() / best_mag;
        Self {
            vec: self.vec.scale(phase),
        }
    }
}

/// True iff `|⟨a|b⟩| ≥ 1 − tol`. States of different dimension are never equal.
pub fn equal_up_to_phase<T: Real>(a: &StateVector<T>, b: &StateVector<T>, tol: T) -> bool {
    a.dim() == b.dim() && a.inner(b).norm() >= T::one() - tol
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(mat: ComplexMatrix<T>, tol: T) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        if !is_density(&mat, tol) {
            return Err(Error::InvalidState(
                "matrix is not Hermitian, unit-trace and positive semidefinite".into(),
            ));
        }
        Ok(Self { mat })
    }

    /// I/n.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(n).scale(cr(T::one() / T::from_usize(n).unwrap())),
        }
    }

    pub fn diagonal(weights: &[T], tol: T) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(weights), tol)
    }

    pub(crate) fn from_matrix_unchecked(mat: ComplexMatrix<T>) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn distance(&self, other: &Self) -> T {
        self.mat.distance(&other.mat)
    }

    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        Ok(Self {
            mat: self.mat.partial_trace(dims, keep)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = StateVector<f64>;

    #[test]
    fn rejects_unnormalized() {
        assert!(S::from_reals(&[1.0, 1.0]).is_err());
        assert!(S::normalize(ComplexVector::from_reals(&[1.0, 1.0]).unwrap()).is_ok());
        assert!(S::normalize(ComplexVector::zeros(3)).is_err());
    }

    #[test]
    fn phase_equality() {
        let psi = S::from_reals(&[0.6, 0.8]).unwrap();
        let minus = S::new(-psi.vector()).unwrap();
        let i_psi = S::new(psi.vector().scale(Cplx::new(0.0, 1.0))).unwrap();
        assert!(equal_up_to_phase(&psi, &psi, 1e-9));
        assert!(equal_up_to_phase(&psi, &minus, 1e-9));
        assert!(equal_up_to_phase(&i_psi, &psi, 1e-9));
        assert!(!equal_up_to_phase(&S::basis(2, 0), &S::basis(2, 1), 1e-9));
        assert!(!equal_up_to_phase(&S::basis(2, 0), &S::basis(3, 0), 1e-9));
    }

    #[test]
    fn canonical_phase_rotates_largest_entry_real() {
        let psi = S::from_amplitudes(vec![Cplx::new(0.0, 0.6), Cplx::new(0.0, -0.8)]).unwrap();
        let canon = psi.canonical_phase();
        assert!((canon.amplitude(1) - Cplx::new(0.8, 0.0)).norm() < 1e-15);
        assert!((canon.amplitude(0) - Cplx::new(-0.6, 0.0)).norm() < 1e-15);

        // tie: lowest index wins
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let tie = S::from_reals(&[-s, s]).unwrap().canonical_phase();
        assert!(tie.amplitude(0).re > 0.0);
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::diagonal(&[0.7, 0.3], 1e-9).is_ok());
        assert!(DensityMatrix::diagonal(&[0.7, 0.2], 1e-9).is_err());
        assert!(DensityMatrix::diagonal(&[1.1, -0.1], 1e-9).is_err());
        let mm = DensityMatrix::<f64>::maximally_mixed(4);
        assert!((mm.matrix().trace().re - 1.0).abs() < 1e-15);
    }
}
