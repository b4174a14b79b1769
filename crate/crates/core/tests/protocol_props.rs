use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steerlab::protocols::{
    histogram_distance, rotational_invariance_check, run_fable, run_photon_trick, verify_claims,
    Axis, BobBasis, CarolRecord, CarolStrategy, FableConfig, FableOrdering, PhotonOrdering,
    PhotonTrickConfig, Preparation,
};
use steerlab::random::random_unitary;

fn fable(prep: Preparation, s: CarolStrategy, o: FableOrdering, n: usize, seed: u64) -> FableConfig {
    FableConfig {
        n_pairs: n,
        seed,
        preparation: prep,
        carol_strategy: s,
        ordering: o,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quartet_is_rotation_invariant(seed: u64) {
        let u = random_unitary::<f64, _>(2, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(rotational_invariance_check(&u).unwrap() <= 1e-8);
    }

    #[test]
    fn same_seed_same_transcript(seed: u64, last: bool, case_ii: bool) {
        let c = fable(
            Preparation::EntangledQuartet,
            if case_ii { CarolStrategy::CaseIITrick } else { CarolStrategy::CaseITrick },
            if last { FableOrdering::CarolLast } else { FableOrdering::CarolFirst },
            200,
            seed,
        );
        prop_assert_eq!(run_fable(&c).unwrap(), run_fable(&c).unwrap());
    }

    /// Exact claims hold for every seed, not just on average.
    #[test]
    fn exact_claims_any_seed(seed: u64, last: bool) {
        let o = if last { FableOrdering::CarolLast } else { FableOrdering::CarolFirst };
        let one = verify_claims(&run_fable(&fable(Preparation::EntangledQuartet, CarolStrategy::CaseITrick, o, 300, seed)).unwrap());
        prop_assert!(one.zz_prediction_match_rate.is_none_or(|r| r == 1.0));
        let two = verify_claims(&run_fable(&fable(Preparation::EntangledQuartet, CarolStrategy::CaseIITrick, o, 300, seed)).unwrap());
        prop_assert!(two.flagged_anticorrelation_rate.is_none_or(|r| r == 1.0));
    }

    #[test]
    fn photon_matches_any_seed(seed: u64, p in 0.05f64..0.95, diagonal: bool, alice_first: bool) {
        let c = PhotonTrickConfig {
            n_pairs: 300,
            seed,
            p,
            bob_basis: if diagonal { BobBasis::Diagonal } else { BobBasis::Hv },
            ordering: if alice_first { PhotonOrdering::AliceFirst } else { PhotonOrdering::BobFirst },
        };
        let (_, r) = run_photon_trick(&c).unwrap();
        prop_assert!(r.match_rate.is_none_or(|m| m == 1.0));
    }
}

#[test]
fn different_seeds_differ() {
    let a = fable(Preparation::DirectCaseI, CarolStrategy::CaseITrick, FableOrdering::CarolFirst, 100, 1);
    let b = FableConfig { seed: 2, ..a.clone() };
    assert_ne!(run_fable(&a).unwrap().records, run_fable(&b).unwrap().records);
}

#[test]
fn thread_count_does_not_matter() {
    let c = fable(Preparation::EntangledQuartet, CarolStrategy::CaseIITrick, FableOrdering::CarolFirst, 500, 3);
    let run_with = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_fable(&c).unwrap())
    };
    assert_eq!(run_with(1), run_with(4));
}

#[test]
fn marginals_are_unbiased_on_every_axis() {
    let t = run_fable(&fable(
        Preparation::EntangledQuartet,
        CarolStrategy::CaseITrick,
        FableOrdering::CarolLast,
        100_000,
        8,
    ))
    .unwrap();
    let r = verify_claims(&t);
    for h in &r.histograms {
        assert!((h.alice_up.unwrap() - 0.5).abs() < 0.01, "{h:?}");
        assert!((h.bob_up.unwrap() - 0.5).abs() < 0.01, "{h:?}");
    }
}

#[test]
fn selectivity_ratio_is_one_half() {
    for o in [FableOrdering::CarolFirst, FableOrdering::CarolLast] {
        let r = verify_claims(
            &run_fable(&fable(Preparation::EntangledQuartet, CarolStrategy::CaseIITrick, o, 100_000, 5)).unwrap(),
        );
        let ratio = r.flagged_to_anticorrelated_ratio.unwrap();
        assert!((ratio - 0.5).abs() <= 0.02, "{o:?}: {ratio}");
    }
}

#[test]
fn ordering_histograms_agree() {
    for s in [CarolStrategy::CaseITrick, CarolStrategy::CaseIITrick] {
        let a = verify_claims(&run_fable(&fable(Preparation::EntangledQuartet, s, FableOrdering::CarolFirst, 100_000, 6)).unwrap());
        let b = verify_claims(&run_fable(&fable(Preparation::EntangledQuartet, s, FableOrdering::CarolLast, 100_000, 6)).unwrap());
        assert!(histogram_distance(&a, &b) <= 0.01);
    }
}

#[test]
fn carol_first_case_i_off_axis_predictions_are_coin_flips() {
    // her z results say nothing about x or y runs
    let t = run_fable(&fable(
        Preparation::EntangledQuartet,
        CarolStrategy::CaseITrick,
        FableOrdering::CarolFirst,
        60_000,
        9,
    ))
    .unwrap();
    let off: Vec<_> = t.records.iter().filter(|r| r.axis != Axis::Z).collect();
    let hits = off
        .iter()
        .filter(|r| matches!(r.carol, CarolRecord::CaseI { predicted, .. } if predicted.0 == r.alice_outcome))
        .count();
    assert!((hits as f64 / off.len() as f64 - 0.5).abs() < 0.02);
}
