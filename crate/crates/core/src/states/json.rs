//! JSON wire forms.
//!
//! A complex number is a two-element array `[re, im]`, a state is an array of
//! complex numbers, a matrix is an array of rows, and an ensemble is an array
//! of `{"weight": w, "state": [...]}` objects.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::scalar::{c, Real};

use super::{Ensemble, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireComplex(pub f64, pub f64);

pub type WireState = Vec<WireComplex>;
pub type WireMatrix = Vec<Vec<WireComplex>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireElement {
    pub weight: f64,
    pub state: WireState,
}

pub type WireEnsemble = Vec<WireElement>;

pub fn vector_to_wire<T: Real>(v: &ComplexVector<T>) -> WireState {
    v.iter().map(|z| WireComplex(z.re.as_f64(), z.im.as_f64())).collect()
}

pub fn vector_from_wire<T: Real>(w: &[WireComplex]) -> Result<ComplexVector<T>> {
    ComplexVector::new(w.iter().map(|z| c(T::lit(z.0), T::lit(z.1))).collect())
}

/// Encodes a state in canonical phase.
pub fn state_to_wire<T: Real>(s: &StateVector<T>) -> WireState {
    vector_to_wire(s.canonical_phase().vector())
}

pub fn state_from_wire<T: Real>(w: &[WireComplex]) -> Result<StateVector<T>> {
    StateVector::new(vector_from_wire(w)?)
}

pub fn matrix_to_wire<T: Real>(m: &ComplexMatrix<T>) -> WireMatrix {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| WireComplex(m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()))
                .collect()
        })
        .collect()
}

pub fn matrix_from_wire<T: Real>(w: &WireMatrix) -> Result<ComplexMatrix<T>> {
    let rows: Vec<Vec<_>> = w
        .iter()
        .map(|row| row.iter().map(|z| c(T::lit(z.0), T::lit(z.1))).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

pub fn ensemble_to_wire<T: Real>(e: &Ensemble<T>) -> WireEnsemble {
    e.elements()
        .iter()
        .map(|(w, s)| WireElement {
            weight: w.as_f64(),
            state: state_to_wire(s),
        })
        .collect()
}

pub fn ensemble_from_wire<T: Real>(w: &[WireElement]) -> Result<Ensemble<T>> {
    let elements = w
        .iter()
        .map(|el| Ok((T::lit(el.weight), state_from_wire(&el.state)?)))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(elements)
}
