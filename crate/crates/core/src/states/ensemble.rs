use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{cr, Real};

use super::{DensityMatrix, StateVector};

/// Weighted collection of pure states `{p_μ, |φ_μ⟩}`.
///
/// Weights must exceed `T::rank_eps()` and sum to one within
/// `T::default_tol()`; all states share one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<T: Real> {
    elements: Vec<(T, StateVector<T>)>,
}

impl<T: Real> Ensemble<T> {
    pub fn new(elements: Vec<(T, StateVector<T>)>) -> Result<Self> {
        let Some(dim) = elements.first().map(|(_, s)| s.dim()) else {
            return Err(Error::InvalidEnsemble("ensemble has no elements".into()));
        };
        if let Some((_, s)) = elements.iter().find(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "ensemble mixes dimensions {dim} and {}",
                s.dim()
            )));
        }
        if let Some((w, _)) = elements.iter().find(|(w, _)| w.is_nan() || *w <= T::rank_eps()) {
            return Err(Error::InvalidEnsemble(format!(
                "weight {} is not above the rank cutoff",
                w.as_f64()
            )));
        }
        let total: T = elements.iter().map(|(w, _)| *w).sum();
        if (total - T::one()).abs() > T::default_tol() {
            return Err(Error::InvalidEnsemble(format!(
                "weights sum to {}, not 1",
                total.as_f64()
            )));
        }
        Ok(Self { elements })
    }

    /// Equal weights over the given states.
    pub fn uniform(states: Vec<StateVector<T>>) -> Result<Self> {
        let w = T::one() / T::from_usize(states.len().max(1)).unwrap();
        Self::new(states.into_iter().map(|s| (w, s)).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].1.dim()
    }

    pub fn elements(&self) -> &[(T, StateVector<T>)] {
        &self.elements
    }

    pub fn weights(&self) -> impl Iterator<Item = T> + '_ {
        self.elements.iter().map(|(w, _)| *w)
    }

    pub fn states(&self) -> impl Iterator<Item = &StateVector<T>> + '_ {
        self.elements.iter().map(|(_, s)| s)
    }
}

/// W = Σ p_μ |φ_μ⟩⟨φ_μ|.
pub fn ensemble_density<T: Real>(e: &Ensemble<T>) -> DensityMatrix<T> {
    let n = e.dim();
    let mut w = ComplexMatrix::zeros(n, n);
    for (p, s) in e.elements() {
        w = &w + &s.projector().scale(cr(*p));
    }
    DensityMatrix::from_matrix_unchecked(w)
}

/// True iff `‖ensemble_density(e) − w‖_F ≤ tol`.
pub fn validate_ensemble<T: Real>(e: &Ensemble<T>, w: &DensityMatrix<T>, tol: T) -> Result<bool> {
    Ok(decomposition_residual(e, w)? <= tol)
}

/// `‖ensemble_density(e) − w‖_F`.
pub fn decomposition_residual<T: Real>(e: &Ensemble<T>, w: &DensityMatrix<T>) -> Result<T> {
    if e.dim() != w.dim() {
        return Err(Error::DimensionMismatch(format!(
            "ensemble of dim {} against density of dim {}",
            e.dim(),
            w.dim()
        )));
    }
    Ok(ensemble_density(e).distance(w))
}
