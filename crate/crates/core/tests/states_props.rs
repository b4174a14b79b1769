use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steerlab::linalg::{is_density, ComplexMatrix};
use steerlab::random::{random_ensemble, random_state, random_unitary};
use steerlab::states::json::{ensemble_from_wire, ensemble_to_wire, state_from_wire, state_to_wire};
use steerlab::states::{
    born_probabilities, collapse, ensemble_density, equal_up_to_phase, validate_ensemble,
    ProjectiveObservable, StateVector,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_basis_observable(n: usize, g: &mut ChaCha8Rng) -> ProjectiveObservable<f64> {
    let u = random_unitary::<f64, _>(n, g);
    let basis: Vec<_> = (0..n).map(|j| StateVector::normalize(u.column(j)).unwrap()).collect();
    ProjectiveObservable::from_basis(&basis).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projectors_resolve_identity(seed: u64, n in 1usize..=6) {
        let obs = random_basis_observable(n, &mut rng(seed));
        let total = obs
            .outcomes()
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, o| &acc + &o.projector);
        prop_assert!(total.distance(&ComplexMatrix::identity(n)) < 1e-12);
    }

    #[test]
    fn born_probabilities_sum_to_one(seed: u64, n in 1usize..=6) {
        let mut g = rng(seed);
        let s = random_state::<f64, _>(n, &mut g);
        let p = born_probabilities(&s, &random_basis_observable(n, &mut g)).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
    }

    /// Whatever Bob measures, Alice's averaged state is unchanged.
    #[test]
    fn no_signalling(seed: u64, da in 1usize..=4, db in 1usize..=4) {
        let mut g = rng(seed);
        let joint = random_state::<f64, _>(da * db, &mut g);
        let before = joint.reduced(&[da, db], &[0]).unwrap();
        let obs = random_basis_observable(db, &mut g).embed(&[da, db], &[1]).unwrap();
        let probs = born_probabilities(&joint, &obs).unwrap();
        let mut after = ComplexMatrix::zeros(da, da);
        for (i, p) in probs.iter().enumerate() {
            if *p < 1e-10 {
                continue;
            }
            let m = collapse(&joint, &obs, i, *p).unwrap();
            let r = m.post_state.reduced(&[da, db], &[0]).unwrap();
            after = &after + &r.matrix().scale(steerlab::Cplx::new(*p, 0.0));
        }
        prop_assert!(after.distance(before.matrix()) < 1e-10);
    }

    #[test]
    fn ensemble_density_is_density(seed: u64, n in 1usize..=5, k in 1usize..=6) {
        let e = random_ensemble::<f64, _>(n, k, &mut rng(seed));
        let w = ensemble_density(&e);
        prop_assert!(is_density(w.matrix(), 1e-9));
        prop_assert!(validate_ensemble(&e, &w, 1e-9).unwrap());
    }

    #[test]
    fn json_round_trip(seed: u64, n in 1usize..=5, k in 1usize..=4) {
        let mut g = rng(seed);
        let s = random_state::<f64, _>(n, &mut g);
        let back: StateVector<f64> = state_from_wire(&state_to_wire(&s)).unwrap();
        prop_assert!(equal_up_to_phase(&s, &back, 1e-12));

        let e = random_ensemble::<f64, _>(n, k, &mut g);
        let text = serde_json::to_string(&ensemble_to_wire(&e)).unwrap();
        let wire: Vec<steerlab::states::json::WireElement> = serde_json::from_str(&text).unwrap();
        let back = ensemble_from_wire::<f64>(&wire).unwrap();
        prop_assert!(ensemble_density(&back).distance(&ensemble_density(&e)) < 1e-12);
    }
}
