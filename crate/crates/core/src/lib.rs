//! Ensemble steering laboratory.
//!
//! The crate builds the objects needed to show that every decomposition of a
//! density matrix into pure states can be selected remotely by a measurement
//! on a purifying system: purifications, Schmidt forms, the unitary relating
//! two purifications with the same marginal, and the steering observable
//! derived from it. On top of that sit two protocol simulators: a polarized
//! photon pair steered between two ensembles, and a spin-pair fable in which
//! a third party holds partner spins and later sorts the experimenters' data.
//!
//! Numeric code is generic over [`Real`] (`f64` or `f32`). The aliases at the
//! crate root fix the scalar to `f64`, which is what the protocols use.

pub mod error;
pub mod ghjw;
pub mod identities;
pub mod linalg;
pub mod protocols;
pub mod random;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};

pub type ComplexVector = linalg::ComplexVector<f64>;
pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type EigenDecomposition = linalg::EigenDecomposition<f64>;
pub type StateVector = states::StateVector<f64>;
pub type DensityMatrix = states::DensityMatrix<f64>;
pub type Ensemble = states::Ensemble<f64>;
pub type ProjectiveObservable = states::ProjectiveObservable<f64>;
pub type MeasurementResult = states::MeasurementResult<f64>;
pub type SchmidtForm = ghjw::SchmidtForm<f64>;
pub type Purification = ghjw::Purification<f64>;
pub type SteeringPlan = ghjw::SteeringPlan<f64>;

/// Default comparison tolerance in double precision.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Rank cutoff in double precision.
pub const RANK_EPS: f64 = 1e-10;
