//! Purifications and remote steering of ensemble decompositions.
//!
//! Given a density matrix `W` on Alice's system, any pure joint state `|Ψ⟩`
//! with `Tr_Bob |Ψ⟩⟨Ψ| = W` can be written in Schmidt form
//! `Σ √wᵢ |αᵢ⟩⊗|γᵢ⟩`, where `|αᵢ⟩` are eigenvectors of `W`. Two such states
//! built from the *same* eigenbasis `{|αᵢ⟩}` differ only in their Bob-side
//! vectors, so mapping one family of `|γᵢ⟩` onto the other yields a unitary
//! `U` on Bob's factor with `|Ψ⟩ = (I⊗U)|Ψ′⟩`.
//!
//! A steering plan for a target decomposition `{p_μ, |φ_μ⟩}` purifies the
//! target with computational pointer states `|ψ_μ⟩`, relates that
//! purification to the shared one, and measures Bob in the rotated basis
//! `U|ψ_μ⟩`. Outcome `μ` then occurs with probability `p_μ` and leaves Alice
//! in `|φ_μ⟩`.
//!
//! When `W` is degenerate its eigenbasis is not unique, so the eigenbasis is
//! computed once and threaded through both Schmidt forms.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    gram_schmidt_complete, hermitian_eig, ComplexMatrix, ComplexVector, EigenDecomposition,
};
use crate::scalar::{cr, Real};
use crate::states::json::{state_to_wire, WireState};
use crate::states::{
    decomposition_residual, measure_subsystem, DensityMatrix, Ensemble, Outcome,
    ProjectiveObservable, StateVector,
};

/// Label of the outcome that completes a steering observable when the target
/// ensemble has fewer members than Bob's dimension.
pub const RESIDUAL_LABEL: &str = "NONE";

/// `Σ √wᵢ |αᵢ⟩⊗|γᵢ⟩` restricted to `wᵢ > ε_rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtForm<T: Real> {
    pub coefficients: Vec<T>,
    pub alice_basis: Vec<StateVector<T>>,
    pub bob_basis: Vec<StateVector<T>>,
}

impl<T: Real> SchmidtForm<T> {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reassemble(&self) -> ComplexVector<T> {
        let da = self.alice_basis[0].dim();
        let db = self.bob_basis[0].dim();
        let mut out = ComplexVector::zeros(da * db);
        for ((s, a), b) in self.coefficients.iter().zip(&self.alice_basis).zip(&self.bob_basis) {
            out = &out + &a.vector().tensor(b.vector()).scale(cr(*s));
        }
        out
    }
}

/// Pure joint state of Alice ⊗ Bob.
#[derive(Debug, Clone, PartialEq)]
pub struct Purification<T: Real> {
    pub joint: StateVector<T>,
    pub dim_alice: usize,
    pub dim_bob: usize,
    /// Bob's pointer states `|ψ_μ⟩`, present when built from an ensemble.
    pub bob_pointer_basis: Vec<StateVector<T>>,
}

impl<T: Real> Purification<T> {
    pub fn new(joint: StateVector<T>, dim_alice: usize, dim_bob: usize) -> Result<Self> {
        if dim_alice == 0 || dim_bob == 0 || dim_alice * dim_bob != joint.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{dim_alice} x {dim_bob} does not factor a joint state of dim {}",
                joint.dim()
            )));
        }
        Ok(Self {
            joint,
            dim_alice,
            dim_bob,
            bob_pointer_basis: Vec::new(),
        })
    }

    /// `Tr_Bob |Ψ⟩⟨Ψ|`.
    pub fn reduced_alice(&self) -> DensityMatrix<T> {
        DensityMatrix::from_matrix_unchecked(alice_marginal(
            self.joint.vector(),
            self.dim_alice,
            self.dim_bob,
        ))
    }

    /// `(I⊗U)|Ψ⟩`.
    pub fn apply_bob(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        if !u.is_square() || u.rows() != self.dim_bob {
            return Err(Error::DimensionMismatch(format!(
                "Bob operator of shape {}x{} for dim_bob {}",
                u.rows(),
                u.cols(),
                self.dim_bob
            )));
        }
        let lifted = u.embed(&[self.dim_alice, self.dim_bob], &[1])?;
        let joint = StateVector::normalize(lifted.apply(self.joint.vector())?)?;
        let bob_pointer_basis = self
            .bob_pointer_basis
            .iter()
            .map(|p| StateVector::normalize(u.apply(p.vector())?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            joint,
            dim_alice: self.dim_alice,
            dim_bob: self.dim_bob,
            bob_pointer_basis,
        })
    }
}

/// W_ij = Σ_k ψ[i, k] conj(ψ[j, k]).
fn alice_marginal<T: Real>(psi: &ComplexVector<T>, da: usize, db: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(da, da, |i, j| {
        (0..db).fold(cr(T::zero()), |acc, k| acc + psi[i * db + k] * psi[j * db + k].conj())
    })
}

/// `(⟨a|⊗I)|Ψ⟩`, unnormalized.
fn contract_alice<T: Real>(
    psi: &ComplexVector<T>,
    da: usize,
    db: usize,
    a: &ComplexVector<T>,
) -> ComplexVector<T> {
    let mut out = ComplexVector::zeros(db);
    for k in 0..db {
        out[k] = (0..da).fold(cr(T::zero()), |acc, j| acc + a[j].conj() * psi[j * db + k]);
    }
    out
}

/// `(I⊗⟨b|)|Ψ⟩`, unnormalized.
fn contract_bob<T: Real>(
    psi: &ComplexVector<T>,
    da: usize,
    db: usize,
    b: &ComplexVector<T>,
) -> ComplexVector<T> {
    let mut out = ComplexVector::zeros(da);
    for i in 0..da {
        out[i] = (0..db).fold(cr(T::zero()), |acc, k| acc + b[k].conj() * psi[i * db + k]);
    }
    out
}

/// Schmidt analysis of a joint state against an eigenbasis of Alice's marginal.
///
/// When `alice_eigenbasis` is `None` the marginal is computed and
/// diagonalized here. Bob vectors are `γᵢ = (⟨αᵢ|⊗I)|Ψ⟩ / √wᵢ`, after checking
/// that `⟨βⱼ|βᵢ⟩ = wᵢ δᵢⱼ` to within `tol`.
pub fn schmidt<T: Real>(
    joint: &StateVector<T>,
    dim_alice: usize,
    dim_bob: usize,
    alice_eigenbasis: Option<&EigenDecomposition<T>>,
    tol: T,
) -> Result<SchmidtForm<T>> {
    if dim_alice == 0 || dim_bob == 0 || dim_alice * dim_bob != joint.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{dim_alice} x {dim_bob} does not factor a joint state of dim {}",
            joint.dim()
        )));
    }
    let computed;
    let eig = match alice_eigenbasis {
        Some(e) => {
            if e.dim() != dim_alice {
                return Err(Error::DimensionMismatch(format!(
                    "eigenbasis of dim {} for Alice dim {dim_alice}",
                    e.dim()
                )));
            }
            e
        }
        None => {
            let w = alice_marginal(joint.vector(), dim_alice, dim_bob);
            computed = hermitian_eig(&w, tol)?;
            &computed
        }
    };

    let betas: Vec<ComplexVector<T>> = eig
        .eigenvectors
        .iter()
        .map(|a| contract_alice(joint.vector(), dim_alice, dim_bob, a))
        .collect();
    let mut worst = T::zero();
    for (i, bi) in betas.iter().enumerate() {
        for (j, bj) in betas.iter().enumerate() {
            let expected = if i == j { eig.eigenvalues[i] } else { T::zero() };
            worst = worst.max((bj.inner(bi) - cr(expected)).norm());
        }
    }
    if worst > tol {
        return Err(Error::AgreeViolation { residual: worst.as_f64() });
    }

    let mut form = SchmidtForm {
        coefficients: Vec::new(),
        alice_basis: Vec::new(),
        bob_basis: Vec::new(),
    };
    for ((w, a), b) in eig.eigenvalues.iter().zip(&eig.eigenvectors).zip(betas) {
        if *w <= T::rank_eps() {
            continue;
        }
        let s = w.sqrt();
        form.coefficients.push(s);
        form.alice_basis.push(StateVector::normalize(a.clone())?);
        form.bob_basis.push(StateVector::normalize(b.scale(cr(T::one() / s)))?);
    }
    Ok(form)
}

/// `Σ √p_μ |φ_μ⟩⊗|e_μ⟩` with Bob's pointer states the first `|e|` standard
/// basis vectors of a `dim_bob`-dimensional space.
pub fn purify_from_ensemble<T: Real>(e: &Ensemble<T>, dim_bob: usize) -> Result<Purification<T>> {
    if dim_bob < e.len() {
        return Err(Error::BobTooSmall {
            needed: e.len(),
            available: dim_bob,
        });
    }
    let da = e.dim();
    let pointers: Vec<StateVector<T>> =
        (0..e.len()).map(|mu| StateVector::basis(dim_bob, mu)).collect();
    let mut joint = ComplexVector::zeros(da * dim_bob);
    for ((p, phi), psi) in e.elements().iter().zip(&pointers) {
        joint = &joint + &phi.vector().tensor(psi.vector()).scale(cr(p.sqrt()));
    }
    Ok(Purification {
        joint: StateVector::normalize(joint)?,
        dim_alice: da,
        dim_bob,
        bob_pointer_basis: pointers,
    })
}

/// Unitary `U` on Bob's factor with `psi = (I⊗U) psi_prime`.
///
/// Both Schmidt forms use one eigendecomposition of `psi`'s marginal. On the
/// support `U` maps `γ′ᵢ ↦ γᵢ`; off the support both families are completed
/// by [`gram_schmidt_complete`] and paired in order.
pub fn relating_unitary<T: Real>(
    psi: &Purification<T>,
    psi_prime: &Purification<T>,
    tol: T,
) -> Result<ComplexMatrix<T>> {
    if psi.dim_alice != psi_prime.dim_alice || psi.dim_bob != psi_prime.dim_bob {
        return Err(Error::DimensionMismatch(format!(
            "purifications of shape {}x{} and {}x{}",
            psi.dim_alice, psi.dim_bob, psi_prime.dim_alice, psi_prime.dim_bob
        )));
    }
    let (da, db) = (psi.dim_alice, psi.dim_bob);
    let w = alice_marginal(psi.joint.vector(), da, db);
    let w_prime = alice_marginal(psi_prime.joint.vector(), da, db);
    let residual = w.distance(&w_prime);
    if residual > tol {
        return Err(Error::MarginalMismatch { residual: residual.as_f64() });
    }

    let eig = hermitian_eig(&w, tol)?;
    let form = schmidt(&psi.joint, da, db, Some(&eig), tol)?;
    let form_prime = schmidt(&psi_prime.joint, da, db, Some(&eig), tol)?;
    debug_assert_eq!(form.rank(), form_prime.rank());

    let gammas: Vec<_> = form.bob_basis.iter().map(|s| s.vector().clone()).collect();
    let gammas_prime: Vec<_> = form_prime.bob_basis.iter().map(|s| s.vector().clone()).collect();
    let full = gram_schmidt_complete(&gammas, db, tol)?;
    let full_prime = gram_schmidt_complete(&gammas_prime, db, tol)?;

    let mut u = ComplexMatrix::zeros(db, db);
    for (g, gp) in full.iter().zip(&full_prime) {
        u = &u + &ComplexMatrix::outer(g, gp);
    }
    Ok(u)
}

/// One steerable outcome: Bob's result `label` certifies Alice's state.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringTarget<T: Real> {
    pub label: String,
    pub weight: T,
    pub state: StateVector<T>,
    /// `U|ψ_μ⟩`, the Bob state measured for this outcome.
    pub bob_state: StateVector<T>,
}

/// Bob's measurement that realizes a chosen decomposition of Alice's state.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringPlan<T: Real> {
    /// Projective observable on Bob's factor; may end with [`RESIDUAL_LABEL`].
    pub observable: ProjectiveObservable<T>,
    pub targets: Vec<SteeringTarget<T>>,
    pub dim_alice: usize,
    pub dim_bob: usize,
}

/// Exact per-outcome statistics of a plan on a purification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRow {
    pub label: String,
    pub target_weight: f64,
    pub probability: f64,
    /// `|⟨φ_μ|conditional⟩|`, the overlap modulus with the target state.
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanAnalysis {
    pub outcome_table: Vec<OutcomeRow>,
    pub residual_probability: f64,
}

impl PlanAnalysis {
    /// Largest `|probability − weight|` over the table.
    pub fn max_weight_error(&self) -> f64 {
        self.outcome_table
            .iter()
            .map(|r| (r.probability - r.target_weight).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_fidelity(&self) -> f64 {
        self.outcome_table.iter().map(|r| r.fidelity).fold(1.0, f64::min)
    }
}

impl<T: Real> SteeringPlan<T> {
    /// Enumerates outcomes analytically: probabilities `‖(I⊗⟨ψ′_μ|)Ψ‖²` and
    /// the overlap of each conditional Alice state with its target.
    pub fn analyze(&self, psi: &Purification<T>) -> Result<PlanAnalysis> {
        self.check_shape(psi)?;
        let mut outcome_table = Vec::with_capacity(self.targets.len());
        let mut total = T::zero();
        for t in &self.targets {
            let (prob, cond) =
                alice_conditional(&psi.joint, psi.dim_alice, psi.dim_bob, &t.bob_state);
            total = total + prob;
            let fidelity = cond.map_or(T::zero(), |c| c.inner(&t.state).norm());
            outcome_table.push(OutcomeRow {
                label: t.label.clone(),
                target_weight: t.weight.as_f64(),
                probability: prob.as_f64(),
                fidelity: fidelity.as_f64(),
            });
        }
        Ok(PlanAnalysis {
            outcome_table,
            residual_probability: (T::one() - total).max(T::zero()).as_f64(),
        })
    }

    fn check_shape(&self, psi: &Purification<T>) -> Result<()> {
        if psi.dim_alice != self.dim_alice || psi.dim_bob != self.dim_bob {
            return Err(Error::DimensionMismatch(format!(
                "plan for {}x{} applied to purification of {}x{}",
                self.dim_alice, self.dim_bob, psi.dim_alice, psi.dim_bob
            )));
        }
        Ok(())
    }
}

/// Probability of Bob finding `bob_state`, and Alice's normalized
/// conditional state (absent when the probability is below the rank cutoff).
pub fn alice_conditional<T: Real>(
    joint: &StateVector<T>,
    dim_alice: usize,
    dim_bob: usize,
    bob_state: &StateVector<T>,
) -> (T, Option<StateVector<T>>) {
    let v = contract_bob(joint.vector(), dim_alice, dim_bob, bob_state.vector());
    let prob = v.norm_sqr();
    let cond = if prob > T::rank_eps() {
        StateVector::normalize(v).ok()
    } else {
        None
    };
    (prob, cond)
}

/// Builds Bob's measurement that steers Alice into `target`.
pub fn steering_observable<T: Real>(
    psi: &Purification<T>,
    target: &Ensemble<T>,
    tol: T,
) -> Result<SteeringPlan<T>> {
    if target.dim() != psi.dim_alice {
        return Err(Error::DimensionMismatch(format!(
            "target ensemble of dim {} for Alice dim {}",
            target.dim(),
            psi.dim_alice
        )));
    }
    if target.len() > psi.dim_bob {
        return Err(Error::BobTooSmall {
            needed: target.len(),
            available: psi.dim_bob,
        });
    }
    let residual = decomposition_residual(target, &psi.reduced_alice())?;
    if residual > tol {
        return Err(Error::NotADecomposition { residual: residual.as_f64() });
    }

    let psi_prime = purify_from_ensemble(target, psi.dim_bob)?;
    let u = relating_unitary(psi, &psi_prime, tol)?;

    let db = psi.dim_bob;
    let mut targets = Vec::with_capacity(target.len());
    let mut outcomes = Vec::with_capacity(target.len() + 1);
    let mut covered = ComplexMatrix::zeros(db, db);
    for (mu, ((p, phi), pointer)) in target
        .elements()
        .iter()
        .zip(&psi_prime.bob_pointer_basis)
        .enumerate()
    {
        let bob_state = StateVector::normalize(u.apply(pointer.vector())?)?;
        let proj = bob_state.projector();
        covered = &covered + &proj;
        let label = mu.to_string();
        outcomes.push(Outcome::new(label.clone(), T::from_usize(mu).unwrap(), proj));
        targets.push(SteeringTarget {
            label,
            weight: *p,
            state: phi.clone(),
            bob_state,
        });
    }
    if target.len() < db {
        let rest = &ComplexMatrix::identity(db) - &covered;
        outcomes.push(Outcome::new(RESIDUAL_LABEL, -T::one(), rest));
    }
    let observable = ProjectiveObservable::with_tol(outcomes, tol)?;
    Ok(SteeringPlan {
        observable,
        targets,
        dim_alice: psi.dim_alice,
        dim_bob: db,
    })
}

/// Bob measures the plan's observable on one copy of the purification.
///
/// Returns the outcome label and Alice's conditional state.
pub fn steer<T: Real, R: Rng + ?Sized>(
    psi: &Purification<T>,
    plan: &SteeringPlan<T>,
    rng: &mut R,
) -> Result<(String, StateVector<T>)> {
    plan.check_shape(psi)?;
    let dims = [psi.dim_alice, psi.dim_bob];
    let m = measure_subsystem(&psi.joint, &dims, &[1], &plan.observable, rng)?;
    let Some(t) = plan.targets.iter().find(|t| t.label == m.label) else {
        return Err(Error::ResidualOutcome);
    };
    let (_, cond) = alice_conditional(&m.post_state, psi.dim_alice, psi.dim_bob, &t.bob_state);
    let cond = cond.ok_or(Error::DegenerateOutcome {
        label: m.label.clone(),
        probability: m.probability.as_f64(),
    })?;
    Ok((m.label, cond))
}

/// Certification outcome for one candidate decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub index: usize,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub decomposition_residual: Option<f64>,
    pub outcome_table: Vec<OutcomeRow>,
    pub residual_probability: Option<f64>,
    /// Bob's measurement basis vectors `U|ψ_μ⟩`, in canonical phase.
    pub bob_basis: Vec<WireState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    /// Index of the candidate whose purification is shared by every plan.
    pub purification_source: Option<usize>,
    pub dim_bob: usize,
    pub candidates: Vec<CandidateReport>,
}

impl CertificationReport {
    pub fn all_certified(&self) -> bool {
        !self.candidates.is_empty() && self.candidates.iter().all(|c| c.valid)
    }
}

/// Certifies every candidate decomposition of `w` against a single purification.
///
/// The purification is built from the valid candidate with the most members
/// (first on ties). Each candidate then gets a steering plan on it and an
/// exact outcome table. A candidate is valid when it decomposes `w`, its
/// plan reproduces every weight within `tol` and every conditional state
/// overlaps its target by at least `1 − tol`.
pub fn certify<T: Real>(
    w: &DensityMatrix<T>,
    candidates: &[Ensemble<T>],
    tol: T,
) -> CertificationReport {
    let residuals: Vec<Result<T>> = candidates
        .iter()
        .map(|e| decomposition_residual(e, w))
        .collect();
    let source = candidates
        .iter()
        .enumerate()
        .filter(|(i, _)| matches!(residuals[*i], Ok(r) if r <= tol))
        .fold(None::<(usize, usize)>, |best, (i, e)| match best {
            Some((_, n)) if n >= e.len() => best,
            _ => Some((i, e.len())),
        })
        .map(|(i, _)| i);
    let purification = source.map(|i| purify_from_ensemble(&candidates[i], candidates[i].len()));

    let reports = candidates
        .par_iter()
        .enumerate()
        .map(|(index, e)| {
            let mut report = CandidateReport {
                index,
                valid: false,
                error: None,
                decomposition_residual: None,
                outcome_table: Vec::new(),
                residual_probability: None,
                bob_basis: Vec::new(),
            };
            let residual = match &residuals[index] {
                Ok(r) => *r,
                Err(err) => {
                    report.error = Some(err.to_string());
                    return report;
                }
            };
            report.decomposition_residual = Some(residual.as_f64());
            if residual > tol {
                report.error =
                    Some(Error::NotADecomposition { residual: residual.as_f64() }.to_string());
                return report;
            }
            let psi = match purification.as_ref().expect("valid candidate implies a source") {
                Ok(psi) => psi,
                Err(err) => {
                    report.error = Some(err.to_string());
                    return report;
                }
            };
            let analysis = steering_observable(psi, e, tol)
                .and_then(|plan| Ok((plan.analyze(psi)?, plan)));
            match analysis {
                Ok((a, plan)) => {
                    let tol = tol.as_f64();
                    report.valid = a.max_weight_error() <= tol
                        && a.min_fidelity() >= 1.0 - tol
                        && a.residual_probability <= tol;
                    if !report.valid {
                        report.error = Some("steering plan misses its targets".into());
                    }
                    report.bob_basis =
                        plan.targets.iter().map(|t| state_to_wire(&t.bob_state)).collect();
                    report.outcome_table = a.outcome_table;
                    report.residual_probability = Some(a.residual_probability);
                }
                Err(err) => report.error = Some(err.to_string()),
            }
            report
        })
        .collect();

    CertificationReport {
        purification_source: source,
        dim_bob: source.map_or(0, |i| candidates[i].len()),
        candidates: reports,
    }
}
