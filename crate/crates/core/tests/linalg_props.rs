use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steerlab::linalg::{
    gram_schmidt_complete, hermitian_eig, is_density, orthonormality_residual, ComplexMatrix,
};
use steerlab::random::{random_hermitian, random_state, random_unitary};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(r: usize, c: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
    // a unitary's top-left block has entries of order one
    let u = random_unitary::<f64, _>(r.max(c), rng);
    ComplexMatrix::from_fn(r, c, |i, j| u[(i, j)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_associative(seed: u64, a in 1usize..4, b in 1usize..4, c in 1usize..4) {
        let mut g = rng(seed);
        let (x, y, z) = (random_matrix(a, a, &mut g), random_matrix(b, b, &mut g), random_matrix(c, c, &mut g));
        let left = x.tensor(&y).tensor(&z);
        let right = x.tensor(&y.tensor(&z));
        prop_assert!(left.distance(&right) < 1e-14);
    }

    #[test]
    fn tensor_mixed_product(seed: u64, a in 1usize..4, b in 1usize..4) {
        let mut g = rng(seed);
        let (x1, x2) = (random_matrix(a, a, &mut g), random_matrix(a, a, &mut g));
        let (y1, y2) = (random_matrix(b, b, &mut g), random_matrix(b, b, &mut g));
        let lhs = &x1.tensor(&y1) * &x2.tensor(&y2);
        let rhs = (&x1 * &x2).tensor(&(&y1 * &y2));
        prop_assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace(seed: u64, dims in prop::collection::vec(1usize..4, 1..4), mask: u8) {
        let mut g = rng(seed);
        let n: usize = dims.iter().product();
        let rho = random_state::<f64, _>(n, &mut g).projector();
        let keep: Vec<usize> = (0..dims.len()).filter(|k| mask & (1 << k) != 0).collect();
        if keep.is_empty() {
            prop_assert!(rho.partial_trace(&dims, &keep).is_err());
            return Ok(());
        }
        let reduced = rho.partial_trace(&dims, &keep).unwrap();
        prop_assert!((reduced.trace() - rho.trace()).norm() < 1e-12);
        prop_assert!(is_density(&reduced, 1e-9));
    }

    #[test]
    fn partial_trace_of_product(seed: u64, a in 1usize..5, b in 1usize..5) {
        let mut g = rng(seed);
        let x = random_state::<f64, _>(a, &mut g).projector();
        let y = random_state::<f64, _>(b, &mut g).projector();
        let xy = x.tensor(&y);
        prop_assert!(xy.partial_trace(&[a, b], &[0]).unwrap().distance(&x) < 1e-12);
        prop_assert!(xy.partial_trace(&[a, b], &[1]).unwrap().distance(&y) < 1e-12);
    }

    #[test]
    fn eig_reconstructs(seed: u64, n in 1usize..=16) {
        let h = random_hermitian::<f64, _>(n, &mut rng(seed));
        let e = hermitian_eig(&h, 1e-9).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assert!(e.reconstruct().distance(&h) <= 1e-9 * scale);
        prop_assert!(orthonormality_residual(&e.eigenvectors) < 1e-10);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eig_handles_planted_degeneracy(seed: u64, n in 2usize..=8, k in 1usize..8) {
        let mut g = rng(seed);
        let u = random_unitary::<f64, _>(n, &mut g);
        let spectrum: Vec<f64> = (0..n).map(|i| if i < k.min(n) { 0.5 } else { 0.0 }).collect();
        let h = &(&u * &ComplexMatrix::from_real_diagonal(&spectrum)) * &u.adjoint();
        let e = hermitian_eig(&h, 1e-9).unwrap();
        prop_assert!(e.reconstruct().distance(&h) < 1e-10);
        prop_assert_eq!(e.rank(), k.min(n));
    }

    #[test]
    fn gram_schmidt_extends_to_a_basis(seed: u64, n in 1usize..=8, k in 0usize..=8) {
        let mut g = rng(seed);
        let u = random_unitary::<f64, _>(n, &mut g);
        let partial: Vec<_> = (0..k.min(n)).map(|j| u.column(j)).collect();
        let full = gram_schmidt_complete(&partial, n, 1e-9).unwrap();
        prop_assert_eq!(full.len(), n);
        prop_assert!(orthonormality_residual(&full) < 1e-12);
        for (a, b) in partial.iter().zip(&full) {
            prop_assert!(a.max_abs_diff(b) < 1e-14);
        }
    }
}

#[test]
fn single_precision_eig() {
    let h = random_hermitian::<f32, _>(6, &mut rng(5));
    let e = hermitian_eig(&h, 1e-4).unwrap();
    assert!(e.reconstruct().distance(&h) < 1e-4 * h.frobenius_norm());
}
