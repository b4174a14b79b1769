//! Named states used by the photon and spin protocols.
//!
//! Conventions: |H⟩ = |↑⟩ = e₀ and |V⟩ = |↓⟩ = e₁. The x basis is
//! (e₀ ± e₁)/√2 and the y basis is (e₀ ± i e₁)/√2. Multi-particle states
//! list their factors left to right in the order given in each doc comment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{c, cr, Real};

use super::{ProjectiveObservable, StateVector};

fn two<T: Real>(a: crate::scalar::Cplx<T>, b: crate::scalar::Cplx<T>) -> StateVector<T> {
    StateVector::from_amplitudes(vec![a, b]).expect("unit two-level state")
}

fn inv_sqrt2<T: Real>() -> T {
    T::FRAC_1_SQRT_2()
}

pub fn up<T: Real>() -> StateVector<T> {
    StateVector::basis(2, 0)
}

pub fn down<T: Real>() -> StateVector<T> {
    StateVector::basis(2, 1)
}

/// Horizontal polarization, identified with |↑⟩.
pub fn h<T: Real>() -> StateVector<T> {
    up()
}

/// Vertical polarization, identified with |↓⟩.
pub fn v<T: Real>() -> StateVector<T> {
    down()
}

/// Diagonal polarization (|H⟩ + |V⟩)/√2.
pub fn d<T: Real>() -> StateVector<T> {
    let s = inv_sqrt2::<T>();
    two(cr(s), cr(s))
}

/// Anti-diagonal polarization (|H⟩ − |V⟩)/√2.
pub fn d_bar<T: Real>() -> StateVector<T> {
    let s = inv_sqrt2::<T>();
    two(cr(s), cr(-s))
}

fn check_weight<T: Real>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::Domain(format!("weight {} must lie in (0, 1)", p.as_f64())));
    }
    Ok(T::one() - p)
}

/// √p |H⟩ + √q |V⟩ with q = 1 − p.
///
/// Linear polarization tilted by θ = arccos(√p) from the H axis.
pub fn r<T: Real>(p: T) -> Result<StateVector<T>> {
    let q = check_weight(p)?;
    Ok(two(cr(p.sqrt()), cr(q.sqrt())))
}

/// √p |H⟩ − √q |V⟩, the mirror image of [`r`].
pub fn l<T: Real>(p: T) -> Result<StateVector<T>> {
    let q = check_weight(p)?;
    Ok(two(cr(p.sqrt()), cr(-q.sqrt())))
}

/// √p |H⟩⊗|H⟩ + √q |V⟩⊗|V⟩, factors (Alice, Bob).
pub fn photon_pair<T: Real>(p: T) -> Result<StateVector<T>> {
    let q = check_weight(p)?;
    StateVector::from_reals(&[p.sqrt(), T::zero(), T::zero(), q.sqrt()])
}

/// Spin quantization axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// `[|+n⟩, |−n⟩]` for the given axis.
pub fn spin_basis<T: Real>(axis: Axis) -> [StateVector<T>; 2] {
    let s = inv_sqrt2::<T>();
    match axis {
        Axis::Z => [up(), down()],
        Axis::X => [two(cr(s), cr(s)), two(cr(s), cr(-s))],
        Axis::Y => [
            two(cr(s), c(T::zero(), s)),
            two(cr(s), c(T::zero(), -s)),
        ],
    }
}

/// Single-spin measurement along `axis`, outcomes "+" (eigenvalue +1) and "-" (−1).
pub fn spin_observable<T: Real>(axis: Axis) -> ProjectiveObservable<T> {
    let [plus, minus] = spin_basis::<T>(axis);
    ProjectiveObservable::from_basis_labeled(
        &[plus, minus],
        &[("+", T::one()), ("-", -T::one())],
    )
    .expect("spin basis is orthonormal")
}

/// (|↑↓⟩ − |↓↑⟩)/√2.
pub fn singlet<T: Real>() -> StateVector<T> {
    let s = inv_sqrt2::<T>();
    StateVector::from_reals(&[T::zero(), s, -s, T::zero()]).expect("unit")
}

/// Triplet m = +1: |↑↑⟩.
pub fn triplet_plus<T: Real>() -> StateVector<T> {
    StateVector::basis(4, 0)
}

/// Triplet m = −1: |↓↓⟩.
pub fn triplet_minus<T: Real>() -> StateVector<T> {
    StateVector::basis(4, 3)
}

/// Triplet m = 0: (|↑↓⟩ + |↓↑⟩)/√2.
pub fn triplet_zero<T: Real>() -> StateVector<T> {
    let s = inv_sqrt2::<T>();
    StateVector::from_reals(&[T::zero(), s, s, T::zero()]).expect("unit")
}

/// Total-spin eigenstates of a spin pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairState {
    Singlet,
    TripletPlus,
    TripletMinus,
    TripletZero,
}

impl PairState {
    pub const ALL: [PairState; 4] = [
        PairState::Singlet,
        PairState::TripletPlus,
        PairState::TripletMinus,
        PairState::TripletZero,
    ];

    pub fn state<T: Real>(self) -> StateVector<T> {
        match self {
            PairState::Singlet => singlet(),
            PairState::TripletPlus => triplet_plus(),
            PairState::TripletMinus => triplet_minus(),
            PairState::TripletZero => triplet_zero(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PairState::Singlet => "singlet",
            PairState::TripletPlus => "triplet_plus",
            PairState::TripletMinus => "triplet_minus",
            PairState::TripletZero => "triplet_zero",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.label() == label)
    }
}

/// The four z-product states ↑↑, ↑↓, ↓↑, ↓↓.
pub fn case_i_states<T: Real>() -> [StateVector<T>; 4] {
    [0, 1, 2, 3].map(|i| StateVector::basis(4, i))
}

/// Singlet followed by the triplets m = +1, −1, 0.
pub fn case_ii_states<T: Real>() -> [StateVector<T>; 4] {
    PairState::ALL.map(PairState::state)
}

/// Total spin and its z-component of a pair: singlet and the three triplets.
pub fn pair_spin_observable<T: Real>() -> ProjectiveObservable<T> {
    let states = case_ii_states::<T>();
    let labels = PairState::ALL.map(|p| (p.label(), T::zero()));
    ProjectiveObservable::from_basis_labeled(&states, &labels).expect("orthonormal")
}

/// Coarse total-spin measurement: "singlet" versus "triplet".
pub fn total_spin_observable<T: Real>() -> ProjectiveObservable<T> {
    let s = singlet::<T>().projector();
    let rest = &crate::linalg::ComplexMatrix::identity(4) - &s;
    ProjectiveObservable::new(vec![
        super::Outcome::new("singlet", T::zero(), s),
        super::Outcome::new("triplet", T::one(), rest),
    ])
    .expect("complementary projectors")
}

/// Both spins of a pair along z: outcomes "++", "+-", "-+", "--".
pub fn zz_observable<T: Real>() -> ProjectiveObservable<T> {
    let labels = [("++", T::zero()), ("+-", T::one()), ("-+", T::lit(2.0)), ("--", T::lit(3.0))];
    ProjectiveObservable::from_basis_labeled(&case_i_states::<T>(), &labels).expect("orthonormal")
}

/// Two singlets (c1, a) and (c2, b), factor order (c1, a, c2, b).
pub fn quartet<T: Real>() -> StateVector<T> {
    singlet::<T>().tensor(&singlet())
}
