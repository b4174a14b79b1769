//! Analytic identity suite.
//!
//! Each identity compares a state or density built one way against the same
//! object built another way. The right-hand sides are assembled here from
//! basis vectors and a 1/√2 amplitude that can be deliberately perturbed, so
//! the suite can demonstrate that it notices a corrupted constant.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::protocols::rotational_invariance_check;
use crate::random::random_unitary;
use crate::scalar::cr;
use crate::states::named::{self, PairState};
use crate::states::{ensemble_density, Ensemble, StateVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySuite {
    pub tol: f64,
    /// Added to 1/√2 wherever the suite writes that amplitude itself.
    pub perturbation: f64,
    pub rotation_samples: usize,
    pub seed: u64,
}

impl Default for IdentitySuite {
    fn default() -> Self {
        Self {
            tol: crate::DEFAULT_TOL,
            perturbation: 0.0,
            rotation_samples: 100,
            seed: 0,
        }
    }
}

/// The polarization weights the photon identities are checked at.
pub const P_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

type V = ComplexVector<f64>;

fn ket(bits: &[usize]) -> V {
    let v = bits
        .iter()
        .map(|&b| StateVector::<f64>::basis(2, b))
        .reduce(|a, b| a.tensor(&b))
        .expect("at least one factor");
    v.into_vector()
}

fn sum(terms: &[(f64, V)]) -> V {
    let dim = terms[0].1.dim();
    terms
        .iter()
        .fold(V::zeros(dim), |acc, (c, v)| &acc + &v.scale(cr(*c)))
}

impl IdentitySuite {
    fn k(&self) -> f64 {
        std::f64::consts::FRAC_1_SQRT_2 + self.perturbation
    }

    fn check(&self, name: String, residual: f64) -> IdentityCheck {
        IdentityCheck {
            name,
            residual,
            tolerance: self.tol,
            pass: residual <= self.tol,
        }
    }

    /// Singlet and triplets over two spins written with the suite's constant.
    fn pair(&self, s: PairState) -> V {
        let k = self.k();
        match s {
            PairState::Singlet => sum(&[(k, ket(&[0, 1])), (-k, ket(&[1, 0]))]),
            PairState::TripletZero => sum(&[(k, ket(&[0, 1])), (k, ket(&[1, 0]))]),
            PairState::TripletPlus => ket(&[0, 0]),
            PairState::TripletMinus => ket(&[1, 1]),
        }
    }

    /// p|H⟩⟨H| + q|V⟩⟨V| against ½|R⟩⟨R| + ½|L⟩⟨L|.
    fn photon_density(&self, p: f64) -> f64 {
        let hv = Ensemble::new(vec![(p, named::h()), (1.0 - p, named::v())]).expect("valid");
        let half = self.k() * self.k();
        let r = named::r(p).expect("p in grid").projector();
        let l = named::l(p).expect("p in grid").projector();
        let rl = &r.scale(cr(half)) + &l.scale(cr(half));
        ensemble_density(&hv).matrix().distance(&rl)
    }

    /// √p|HH⟩ + √q|VV⟩ against (|R⟩|D⟩ + |L⟩|D̄⟩)/√2.
    fn photon_pair(&self, p: f64) -> f64 {
        let k = self.k();
        let joint = named::photon_pair(p).expect("p in grid");
        let (h, v) = (ket(&[0]), ket(&[1]));
        let d = sum(&[(k, h.clone()), (k, v.clone())]);
        let d_bar = sum(&[(k, h), (-k, v)]);
        let r = named::r(p).expect("p in grid").into_vector();
        let l = named::l(p).expect("p in grid").into_vector();
        let rhs = sum(&[(k, r.tensor(&d)), (k, l.tensor(&d_bar))]);
        joint.vector().max_abs_diff(&rhs)
    }

    /// Two singlets regrouped as (c1 c2)(a b): ½(↑↑↓↓ + ↓↓↑↑ − ↑↓↓↑ − ↓↑↑↓).
    fn quartet_z_expansion(&self) -> f64 {
        let half = self.k() * self.k();
        let grouped = sum(&[
            (half, ket(&[0, 0, 1, 1])),
            (half, ket(&[1, 1, 0, 0])),
            (-half, ket(&[0, 1, 1, 0])),
            (-half, ket(&[1, 0, 0, 1])),
        ]);
        self.against_quartet(grouped)
    }

    /// Two singlets regrouped into pair states of (c1 c2) and (a b).
    fn quartet_pair_expansion(&self) -> f64 {
        use PairState::*;
        let half = self.k() * self.k();
        let t = |c: PairState, ab: PairState| self.pair(c).tensor(&self.pair(ab));
        let grouped = sum(&[
            (half, t(TripletPlus, TripletMinus)),
            (half, t(TripletMinus, TripletPlus)),
            (-half, t(TripletZero, TripletZero)),
            (half, t(Singlet, Singlet)),
        ]);
        self.against_quartet(grouped)
    }

    fn against_quartet(&self, grouped: V) -> f64 {
        // (c1, c2, a, b) -> (c1, a, c2, b)
        let reordered = grouped
            .permute_factors(&[2, 2, 2, 2], &[0, 2, 1, 3])
            .expect("four qubits");
        named::quartet::<f64>().vector().max_abs_diff(&reordered)
    }

    /// Uniform mixture of the four pair states of one case against I/4.
    fn case_density(&self, states: [V; 4]) -> f64 {
        let mixed = states
            .iter()
            .fold(ComplexMatrix::zeros(4, 4), |acc, s| &acc + &ComplexMatrix::projector(s))
            .scale(cr(0.25));
        mixed.distance(&ComplexMatrix::identity(4).scale(cr(0.25)))
    }

    fn rotations(&self) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let k = self.k();
        // z to x basis change, then Haar samples
        let hadamard = ComplexMatrix::from_fn(2, 2, |i, j| cr(if i == 1 && j == 1 { -k } else { k }));
        std::iter::once(hadamard)
            .chain((0..self.rotation_samples).map(|_| random_unitary(2, &mut rng)))
            .map(|u| match rotational_invariance_check(&u) {
                Ok(r) => r,
                Err(Error::NotUnitary { residual }) => residual,
                Err(_) => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    pub fn run(&self) -> Vec<IdentityCheck> {
        let mut out = Vec::new();
        for p in P_GRID {
            out.push(self.check(format!("photon_density_hv_equals_rl[p={p}]"), self.photon_density(p)));
        }
        for p in P_GRID {
            out.push(self.check(format!("photon_pair_rd_expansion[p={p}]"), self.photon_pair(p)));
        }
        out.push(self.check("quartet_z_expansion".into(), self.quartet_z_expansion()));
        out.push(self.check("quartet_pair_state_expansion".into(), self.quartet_pair_expansion()));
        out.push(self.check(
            "case_i_density_is_quarter_identity".into(),
            self.case_density([[0, 0], [0, 1], [1, 0], [1, 1]].map(|b| ket(&b))),
        ));
        out.push(self.check(
            "case_ii_density_is_quarter_identity".into(),
            self.case_density(PairState::ALL.map(|s| self.pair(s))),
        ));
        out.push(self.check(
            format!("quartet_rotational_invariance[{} unitaries]", self.rotation_samples + 1),
            self.rotations(),
        ));
        out
    }
}
