//! Carol's two tricks for supplying Alice and Bob with spin pairs.
//!
//! Case I: each pair is one of ↑↑, ↑↓, ↓↑, ↓↓ with probability ¼, and Carol
//! knows which. Case II: each pair is the singlet or one of the three
//! triplets with probability ¼. Both mixtures have density I/4, so Alice and
//! Bob cannot tell them apart. Carol can also hand out spins a and b from the
//! quartet (c1, a, c2, b) made of two singlets and decide later, by measuring
//! her own spins c1 and c2, which of the two stories to tell.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::named::{self, PairState};
use crate::states::{sample_measurement, ProjectiveObservable, StateVector};

use super::{carol_case_i_predictions, pair_rng, random_axis, spin_value, Axis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preparation {
    #[serde(rename = "direct_case_i")]
    DirectCaseI,
    #[serde(rename = "direct_case_ii")]
    DirectCaseII,
    EntangledQuartet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarolStrategy {
    #[serde(rename = "case_i_trick")]
    CaseITrick,
    #[serde(rename = "case_ii_trick")]
    CaseIITrick,
}

/// When Carol measures her spins relative to Alice and Bob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FableOrdering {
    CarolFirst,
    CarolLast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FableConfig {
    pub n_pairs: usize,
    pub seed: u64,
    pub preparation: Preparation,
    pub carol_strategy: CarolStrategy,
    pub ordering: FableOrdering,
}

impl FableConfig {
    /// Direct preparations fix Carol's story before the pair leaves her,
    /// so they only combine with the matching strategy and Carol going first.
    pub fn validate(&self) -> Result<()> {
        let expected = match self.preparation {
            Preparation::EntangledQuartet => return Ok(()),
            Preparation::DirectCaseI => CarolStrategy::CaseITrick,
            Preparation::DirectCaseII => CarolStrategy::CaseIITrick,
        };
        if self.carol_strategy != expected {
            return Err(Error::ConfigConflict(format!(
                "{:?} preparation cannot be reported with the {:?} strategy",
                self.preparation, self.carol_strategy
            )));
        }
        if self.ordering != FableOrdering::CarolFirst {
            return Err(Error::ConfigConflict(format!(
                "{:?} preparation has no spins left for Carol to measure afterwards",
                self.preparation
            )));
        }
        Ok(())
    }
}

/// What Carol tells Alice and Bob about one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum CarolRecord {
    #[serde(rename = "i")]
    CaseI {
        /// Her own z results on c1 and c2, when she measured any.
        raw: Option<(i8, i8)>,
        /// The z results she predicts for Alice and Bob.
        predicted: (i8, i8),
    },
    #[serde(rename = "ii")]
    CaseII {
        singlet_flag: bool,
        /// The pair state she names for (a, b); absent when she only
        /// distinguished singlet from triplet.
        ab_state: Option<PairState>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub pair_id: u64,
    pub axis: Axis,
    pub alice_outcome: i8,
    pub bob_outcome: i8,
    pub carol: CarolRecord,
}

impl RunRecord {
    pub fn anticorrelated(&self) -> bool {
        self.alice_outcome != self.bob_outcome
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: FableConfig,
    pub records: Vec<RunRecord>,
}

/// A prepared pair and the label Carol knows it by.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared<L> {
    pub state: StateVector<f64>,
    pub label: L,
}

/// One of ↑↑, ↑↓, ↓↑, ↓↓ uniformly, labelled by its z values.
pub fn prepare_case_i<R: Rng + ?Sized>(rng: &mut R) -> Prepared<(i8, i8)> {
    let i = rng.random_range(0..4usize);
    let z = |bit: usize| if bit == 0 { 1 } else { -1 };
    Prepared {
        state: named::case_i_states()[i].clone(),
        label: (z(i >> 1), z(i & 1)),
    }
}

/// Singlet or one of the triplets, uniformly.
pub fn prepare_case_ii<R: Rng + ?Sized>(rng: &mut R) -> Prepared<PairState> {
    let label = PairState::ALL[rng.random_range(0..4usize)];
    Prepared {
        state: label.state(),
        label,
    }
}

/// Two singlets, factors (c1, a, c2, b).
pub fn prepare_quartet() -> StateVector<f64> {
    named::quartet()
}

/// State of (a, b) once Carol finds (c1, c2) in `carol`.
///
/// The quartet expands as ½(|1,1⟩|1,−1⟩ + |1,−1⟩|1,1⟩ − |1,0⟩|1,0⟩ + |0,0⟩|0,0⟩)
/// in (c1 c2)(a b) order, so each triplet with m = ±1 pairs with its opposite.
pub fn ab_partner(carol: PairState) -> PairState {
    match carol {
        PairState::TripletPlus => PairState::TripletMinus,
        PairState::TripletMinus => PairState::TripletPlus,
        other => other,
    }
}

const QUARTET_DIMS: [usize; 4] = [2, 2, 2, 2];
const CAROL: [usize; 2] = [0, 2];
const ALICE: usize = 1;
const BOB: usize = 3;

/// Observables lifted once to the joint space and shared across pairs.
struct Lab {
    alice: [ProjectiveObservable<f64>; 3],
    bob: [ProjectiveObservable<f64>; 3],
    zz: Option<ProjectiveObservable<f64>>,
    pair_spin: Option<ProjectiveObservable<f64>>,
    total_spin: Option<ProjectiveObservable<f64>>,
    quartet: Option<StateVector<f64>>,
}

impl Lab {
    fn new(cfg: &FableConfig) -> Result<Self> {
        let (dims, a, b): (&[usize], usize, usize) = match cfg.preparation {
            Preparation::EntangledQuartet => (&QUARTET_DIMS, ALICE, BOB),
            _ => (&[2, 2], 0, 1),
        };
        let lift = |axis: Axis, k: usize| named::spin_observable(axis).embed(dims, &[k]);
        let quartet = cfg.preparation == Preparation::EntangledQuartet;
        let on_carol = |o: ProjectiveObservable<f64>| -> Result<Option<_>> {
            if quartet {
                o.embed(&QUARTET_DIMS, &CAROL).map(Some)
            } else {
                Ok(None)
            }
        };
        Ok(Self {
            alice: [lift(Axis::X, a)?, lift(Axis::Y, a)?, lift(Axis::Z, a)?],
            bob: [lift(Axis::X, b)?, lift(Axis::Y, b)?, lift(Axis::Z, b)?],
            zz: on_carol(named::zz_observable())?,
            pair_spin: on_carol(named::pair_spin_observable())?,
            total_spin: on_carol(named::total_spin_observable())?,
            quartet: quartet.then(prepare_quartet),
        })
    }

    fn alice_bob<R: Rng + ?Sized>(
        &self,
        state: &StateVector<f64>,
        axis: Axis,
        rng: &mut R,
    ) -> Result<(i8, i8, StateVector<f64>)> {
        let a = sample_measurement(state, &self.alice[axis.index()], rng)?;
        let b = sample_measurement(&a.post_state, &self.bob[axis.index()], rng)?;
        Ok((spin_value(&a.label), spin_value(&b.label), b.post_state))
    }

    fn run_pair(&self, cfg: &FableConfig, pair_id: u64) -> Result<RunRecord> {
        let mut rng = pair_rng(cfg.seed, pair_id);
        let axis = random_axis(&mut rng);
        let (alice_outcome, bob_outcome, carol) = match cfg.preparation {
            Preparation::DirectCaseI => {
                let p = prepare_case_i(&mut rng);
                let (a, b, _) = self.alice_bob(&p.state, axis, &mut rng)?;
                (a, b, CarolRecord::CaseI { raw: None, predicted: p.label })
            }
            Preparation::DirectCaseII => {
                let p = prepare_case_ii(&mut rng);
                let (a, b, _) = self.alice_bob(&p.state, axis, &mut rng)?;
                let carol = CarolRecord::CaseII {
                    singlet_flag: p.label == PairState::Singlet,
                    ab_state: Some(p.label),
                };
                (a, b, carol)
            }
            Preparation::EntangledQuartet => {
                let psi = self.quartet.as_ref().expect("quartet lab");
                match cfg.ordering {
                    FableOrdering::CarolFirst => {
                        let (carol, post) = self.carol_measures(cfg.carol_strategy, false, psi, &mut rng)?;
                        let (a, b, _) = self.alice_bob(&post, axis, &mut rng)?;
                        (a, b, carol)
                    }
                    FableOrdering::CarolLast => {
                        let (a, b, post) = self.alice_bob(psi, axis, &mut rng)?;
                        let (carol, _) = self.carol_measures(cfg.carol_strategy, true, &post, &mut rng)?;
                        (a, b, carol)
                    }
                }
            }
        };
        Ok(RunRecord {
            pair_id,
            axis,
            alice_outcome,
            bob_outcome,
            carol,
        })
    }

    /// Carol's measurement on (c1, c2). Going last in Case II she only
    /// separates singlet from triplet.
    fn carol_measures<R: Rng + ?Sized>(
        &self,
        strategy: CarolStrategy,
        last: bool,
        state: &StateVector<f64>,
        rng: &mut R,
    ) -> Result<(CarolRecord, StateVector<f64>)> {
        match strategy {
            CarolStrategy::CaseITrick => {
                let m = sample_measurement(state, self.zz.as_ref().expect("quartet lab"), rng)?;
                let mut chars = m.label.chars().map(|c| spin_value(&c.to_string()));
                let raw = (chars.next().unwrap(), chars.next().unwrap());
                let record = CarolRecord::CaseI {
                    raw: Some(raw),
                    predicted: carol_case_i_predictions(raw),
                };
                Ok((record, m.post_state))
            }
            CarolStrategy::CaseIITrick if last => {
                let m = sample_measurement(state, self.total_spin.as_ref().expect("quartet lab"), rng)?;
                let record = CarolRecord::CaseII {
                    singlet_flag: m.label == "singlet",
                    ab_state: None,
                };
                Ok((record, m.post_state))
            }
            CarolStrategy::CaseIITrick => {
                let m = sample_measurement(state, self.pair_spin.as_ref().expect("quartet lab"), rng)?;
                let carol = PairState::from_label(&m.label).expect("pair-spin label");
                let record = CarolRecord::CaseII {
                    singlet_flag: carol == PairState::Singlet,
                    ab_state: Some(ab_partner(carol)),
                };
                Ok((record, m.post_state))
            }
        }
    }
}

/// Runs `cfg.n_pairs` pairs in parallel; the transcript is ordered by pair id
/// and independent of thread count.
pub fn run_fable(cfg: &FableConfig) -> Result<Transcript> {
    cfg.validate()?;
    let lab = Lab::new(cfg)?;
    let records = (0..cfg.n_pairs as u64)
        .into_par_iter()
        .map(|id| lab.run_pair(cfg, id))
        .collect::<Result<Vec<_>>>()?;
    Ok(Transcript {
        config: cfg.clone(),
        records,
    })
}

#[derive(Serialize)]
struct CsvRow {
    pair_id: u64,
    axis: Axis,
    alice: i8,
    bob: i8,
    carol_c1: Option<i8>,
    carol_c2: Option<i8>,
    pred_alice: Option<i8>,
    pred_bob: Option<i8>,
    singlet_flag: Option<bool>,
    ab_state: Option<&'static str>,
}

impl Transcript {
    /// One row per pair. Fields that do not apply to Carol's case are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            let mut row = CsvRow {
                pair_id: r.pair_id,
                axis: r.axis,
                alice: r.alice_outcome,
                bob: r.bob_outcome,
                carol_c1: None,
                carol_c2: None,
                pred_alice: None,
                pred_bob: None,
                singlet_flag: None,
                ab_state: None,
            };
            match r.carol {
                CarolRecord::CaseI { raw, predicted } => {
                    row.carol_c1 = raw.map(|x| x.0);
                    row.carol_c2 = raw.map(|x| x.1);
                    row.pred_alice = Some(predicted.0);
                    row.pred_bob = Some(predicted.1);
                }
                CarolRecord::CaseII { singlet_flag, ab_state } => {
                    row.singlet_flag = Some(singlet_flag);
                    row.ab_state = ab_state.map(PairState::label);
                }
            }
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}
