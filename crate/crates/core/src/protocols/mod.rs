//! Remote-preparation protocols simulated pair by pair.
//!
//! Each pair draws from its own ChaCha stream, keyed on `(seed, pair_id)`,
//! so transcripts do not depend on how pairs are scheduled across threads.

mod claims;
mod fable;
mod photon;

pub use claims::{
    default_stat_tol, fable_checks, histogram_distance, verify_claims, AxisHistogram, ClaimCheck,
    ClaimReport, FABLE_SCHEMA,
};
pub use fable::{
    ab_partner, prepare_case_i, prepare_case_ii, prepare_quartet, run_fable, CarolRecord,
    CarolStrategy, FableConfig, FableOrdering, Preparation, Prepared, RunRecord, Transcript,
};
pub use photon::{
    photon_checks, run_photon_trick, BobBasis, PhotonOrdering, PhotonRecord, PhotonReport,
    PhotonTrickConfig, PhotonTranscript, PHOTON_SCHEMA,
};

pub use crate::states::named::Axis;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{is_unitary, ComplexMatrix};
use crate::scalar::Real;
use crate::states::named;

/// Independent random stream for one pair.
pub fn pair_rng(seed: u64, pair_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(pair_id);
    rng
}

/// Uniform choice among x, y and z.
pub fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> Axis {
    Axis::ALL[rng.random_range(0..3)]
}

/// Spin outcome ±1 from a "+"/"-" label.
pub(crate) fn spin_value(label: &str) -> i8 {
    match label {
        "+" => 1,
        "-" => -1,
        other => unreachable!("not a spin label: {other}"),
    }
}

/// Carol's z results on her two spins predict Alice's and Bob's z results
/// with the opposite sign: her spin c1 is paired with Alice's, c2 with Bob's,
/// each in a singlet.
pub fn carol_case_i_predictions(carol_z: (i8, i8)) -> (i8, i8) {
    (-carol_z.0, -carol_z.1)
}

/// Distance between `(u⊗u⊗u⊗u)|Ψ⟩` and `|Ψ⟩` for the two-singlet quartet,
/// minimized over a global phase.
pub fn rotational_invariance_check<T: Real>(u: &ComplexMatrix<T>) -> Result<T> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::DimensionMismatch("expected a 2x2 unitary".into()));
    }
    if !is_unitary(u, T::default_tol()) {
        return Err(Error::NotUnitary {
            residual: u.unitary_residual().as_f64(),
        });
    }
    let psi = named::quartet::<T>();
    let uu = u.tensor(u);
    let u4 = uu.tensor(&uu);
    let moved = u4.apply(psi.vector())?;
    let overlap = psi.vector().inner(&moved);
    let phase = if overlap.norm() > T::zero() {
        overlap / overlap.norm()
    } else {
        crate::scalar::cr(T::one())
    };
    Ok((&moved - &psi.vector().scale(phase)).norm())
}
