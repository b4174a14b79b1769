use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{cr, Real};

use super::StateVector;

/// One outcome of a projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T: Real> {
    pub label: String,
    pub eigenvalue: T,
    pub projector: ComplexMatrix<T>,
}

impl<T: Real> Outcome<T> {
    pub fn new(label: impl Into<String>, eigenvalue: T, projector: ComplexMatrix<T>) -> Self {
        Self {
            label: label.into(),
            eigenvalue,
            projector,
        }
    }
}

/// Labeled orthogonal projectors resolving the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveObservable<T: Real> {
    outcomes: Vec<Outcome<T>>,
}

impl<T: Real> ProjectiveObservable<T> {
    /// Validates idempotence, Hermiticity, mutual orthogonality and
    /// completeness at `T::default_tol()`.
    pub fn new(outcomes: Vec<Outcome<T>>) -> Result<Self> {
        Self::with_tol(outcomes, T::default_tol())
    }

    pub fn with_tol(outcomes: Vec<Outcome<T>>, tol: T) -> Result<Self> {
        let Some(n) = outcomes.first().map(|o| o.projector.rows()) else {
            return Err(Error::InvalidObservable("no outcomes".into()));
        };
        let bad = |msg: String| Err(Error::InvalidObservable(msg));
        let mut sum = ComplexMatrix::zeros(n, n);
        for (i, o) in outcomes.iter().enumerate() {
            let p = &o.projector;
            if !p.is_square() || p.rows() != n {
                return Err(Error::DimensionMismatch(format!(
                    "projector `{}` has shape {}x{}, expected {n}x{n}",
                    o.label,
                    p.rows(),
                    p.cols()
                )));
            }
            if outcomes[..i].iter().any(|prev| prev.label == o.label) {
                return bad(format!("duplicate label `{}`", o.label));
            }
            if p.hermitian_residual() > tol {
                return bad(format!("projector `{}` is not Hermitian", o.label));
            }
            if (p * p).distance(p) > tol {
                return bad(format!("projector `{}` is not idempotent", o.label));
            }
            for prev in &outcomes[..i] {
                if (&prev.projector * p).frobenius_norm() > tol {
                    return bad(format!("projectors `{}` and `{}` overlap", prev.label, o.label));
                }
            }
            sum = &sum + p;
        }
        if sum.distance(&ComplexMatrix::identity(n)) > tol {
            return bad("projectors do not sum to the identity".into());
        }
        Ok(Self { outcomes })
    }

    /// Rank-one projectors onto an orthonormal basis, labeled "0", "1", …
    /// with eigenvalue equal to the index.
    pub fn from_basis(basis: &[StateVector<T>]) -> Result<Self> {
        let labels: Vec<(String, T)> = (0..basis.len())
            .map(|i| (i.to_string(), T::from_usize(i).unwrap()))
            .collect();
        Self::from_basis_labeled(basis, &labels)
    }

    pub fn from_basis_labeled<L: AsRef<str>>(
        basis: &[StateVector<T>],
        labels: &[(L, T)],
    ) -> Result<Self> {
        if basis.len() != labels.len() {
            return Err(Error::InvalidObservable(format!(
                "{} basis states but {} labels",
                basis.len(),
                labels.len()
            )));
        }
        Self::new(
            basis
                .iter()
                .zip(labels)
                .map(|(s, (l, b))| Outcome::new(l.as_ref(), *b, s.projector()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].projector.rows()
    }

    pub fn outcomes(&self) -> &[Outcome<T>] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.outcomes.iter().map(|o| o.label.as_str())
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o.label == label)
    }

    /// Lifts the observable from the `target` factors to the full tensor space.
    pub fn embed(&self, dims: &[usize], target: &[usize]) -> Result<Self> {
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| {
                Ok(Outcome::new(
                    o.label.clone(),
                    o.eigenvalue,
                    o.projector.embed(dims, target)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { outcomes })
    }
}

/// Sampled outcome with its Born probability and the collapsed state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementResult<T: Real> {
    pub index: usize,
    pub label: String,
    pub probability: T,
    pub post_state: StateVector<T>,
}

/// ⟨s|P_μ|s⟩ for every outcome, clamped at zero.
pub fn born_probabilities<T: Real>(
    s: &StateVector<T>,
    o: &ProjectiveObservable<T>,
) -> Result<Vec<T>> {
    if s.dim() != o.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dim {} measured by observable of dim {}",
            s.dim(),
            o.dim()
        )));
    }
    o.outcomes()
        .iter()
        .map(|out| {
            let z = out.projector.sandwich(s.vector(), s.vector())?;
            Ok(z.re.max(T::zero()))
        })
        .collect()
}

/// Draws an outcome by the Born rule and applies the projective update.
pub fn sample_measurement<T: Real, R: Rng + ?Sized>(
    s: &StateVector<T>,
    o: &ProjectiveObservable<T>,
    rng: &mut R,
) -> Result<MeasurementResult<T>> {
    let probs = born_probabilities(s, o)?;
    let u = T::lit(rng.random::<f64>());
    let index = choose(&probs, u);
    collapse(s, o, index, probs[index])
}

/// Measures `o`, defined on the `target` factors, on a joint state.
///
/// The post-measurement state is the full joint state.
pub fn measure_subsystem<T: Real, R: Rng + ?Sized>(
    joint: &StateVector<T>,
    dims: &[usize],
    target: &[usize],
    o: &ProjectiveObservable<T>,
    rng: &mut R,
) -> Result<MeasurementResult<T>> {
    let lifted = o.embed(dims, target)?;
    if lifted.dim() != joint.dim() {
        return Err(Error::DimensionMismatch(format!(
            "factor dims {dims:?} do not match joint dimension {}",
            joint.dim()
        )));
    }
    sample_measurement(joint, &lifted, rng)
}

/// Projects onto outcome `index` and renormalizes.
pub fn collapse<T: Real>(
    s: &StateVector<T>,
    o: &ProjectiveObservable<T>,
    index: usize,
    probability: T,
) -> Result<MeasurementResult<T>> {
    let out = &o.outcomes()[index];
    if probability < T::rank_eps() {
        return Err(Error::DegenerateOutcome {
            label: out.label.clone(),
            probability: probability.as_f64(),
        });
    }
    let projected = out.projector.apply(s.vector())?;
    let post = projected.scale(cr(T::one() / probability.sqrt()));
    Ok(MeasurementResult {
        index,
        label: out.label.clone(),
        probability,
        post_state: StateVector::normalize(post)?,
    })
}

/// Inverse-CDF selection. `u` in [0, 1); falls back to the last outcome with
/// nonzero weight when rounding leaves the cumulative sum short of `u`.
fn choose<T: Real>(probs: &[T], u: T) -> usize {
    let total: T = probs.iter().copied().sum();
    let target = u * total;
    let mut acc = T::zero();
    for (i, &p) in probs.iter().enumerate() {
        acc = acc + p;
        if target < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > T::zero()).unwrap_or(probs.len() - 1)
}
