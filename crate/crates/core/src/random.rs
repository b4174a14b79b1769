//! Random instances for property checks and sweeps.
//!
//! Unitaries come from orthonormalizing columns of a complex Gaussian matrix
//! with modified Gram-Schmidt and fixing each column's phase against its
//! diagonal entry (Haar measure). This path shares no code with the
//! eigensolver or with [`crate::linalg::gram_schmidt_complete`].

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::scalar::{c, cr, Cplx, Real};
use crate::states::{Ensemble, StateVector};

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Cplx<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(T::lit(re), T::lit(im))
}

fn gaussian_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector<T> {
    ComplexVector::new((0..dim).map(|_| gaussian(rng)).collect()).expect("finite")
}

/// Haar-random pure state.
pub fn random_state<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector<T> {
    loop {
        if let Ok(s) = StateVector::normalize(gaussian_vector(dim, rng)) {
            return s;
        }
    }
}

/// Haar-random unitary.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let mut cols: Vec<ComplexVector<T>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = gaussian_vector::<T, R>(dim, rng);
        for _ in 0..2 {
            for q in &cols {
                v = &v - &q.scale(q.inner(&v));
            }
        }
        let n = v.norm();
        if n <= T::lit(1e-6) {
            continue;
        }
        let k = cols.len();
        let diag = v[k];
        let phase = if diag.norm() > T::zero() {
            diag.conj() / diag.norm()
        } else {
            cr(T::one())
        };
        cols.push(v.scale(phase * cr(T::one() / n)));
    }
    ComplexMatrix::from_columns(&cols).expect("square")
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    (&g + &g.adjoint()).scale(cr(T::lit(0.5)))
}

/// Random weights in `(floor, 1)`, normalized to sum to one.
pub fn random_weights<T: Real, R: Rng + ?Sized>(n: usize, floor: f64, rng: &mut R) -> Vec<T> {
    let raw: Vec<f64> = (0..n).map(|_| floor + (1.0 - floor) * rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| T::lit(x / total)).collect()
}

/// Ensemble of `n` random pure states in `dim` dimensions.
pub fn random_ensemble<T: Real, R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> Ensemble<T> {
    let weights = random_weights::<T, R>(n, 0.05, rng);
    Ensemble::new(
        weights
            .into_iter()
            .map(|w| (w, random_state(dim, rng)))
            .collect(),
    )
    .expect("weights normalized")
}

/// Ensemble of eigenvectors of a random unitary frame with the given spectrum;
/// zero entries are skipped, so repeated or vanishing values plant degenerate
/// or rank-deficient densities.
pub fn ensemble_with_spectrum<T: Real, R: Rng + ?Sized>(spectrum: &[f64], rng: &mut R) -> Ensemble<T> {
    let u = random_unitary::<T, R>(spectrum.len(), rng);
    let total: f64 = spectrum.iter().sum();
    Ensemble::new(
        spectrum
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, &w)| (T::lit(w / total), StateVector::normalize(u.column(i)).unwrap()))
            .collect(),
    )
    .expect("valid spectrum")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=8 {
            let u = random_unitary::<f64, _>(n, &mut rng);
            assert!(is_unitary(&u, 1e-12));
        }
    }

    #[test]
    fn weights_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = random_weights::<f64, _>(5, 0.05, &mut rng);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(w.iter().all(|&x| x > 0.0));
    }
}
