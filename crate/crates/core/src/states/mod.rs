//! Pure states, density matrices, ensembles and projective measurement.

mod ensemble;
pub mod json;
pub mod named;
mod observable;
mod state;

pub use ensemble::{decomposition_residual, ensemble_density, validate_ensemble, Ensemble};
pub use observable::{
    born_probabilities, collapse, measure_subsystem, sample_measurement, MeasurementResult,
    Outcome, ProjectiveObservable,
};
pub use state::{equal_up_to_phase, DensityMatrix, StateVector};
