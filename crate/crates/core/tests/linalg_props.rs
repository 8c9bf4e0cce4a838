mod common;

use proptest::prelude::*;
use unicell::linalg::{eigenvalues, hermitian_eigenvalues, schur, spectral_norm, unitary_conjugate};
use unicell::random::{gaussian_matrix, haar_unitary, rng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_unitarily_invariant(n in 1usize..=10, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gaussian_matrix(&mut r, n);
        let u = haar_unitary(&mut r, n);
        let na = spectral_norm(&a).unwrap();
        let nu = spectral_norm(&unitary_conjugate(&a, &u)).unwrap();
        prop_assert!((na - nu).abs() <= 1e-10 * (1.0 + na), "{na} vs {nu}");
    }

    #[test]
    fn norm_is_transpose_invariant(n in 1usize..=10, seed in any::<u64>()) {
        let a = gaussian_matrix(&mut rng(seed), n);
        let na = spectral_norm(&a).unwrap();
        let nt = spectral_norm(&a.transpose()).unwrap();
        prop_assert!((na - nt).abs() <= 1e-10 * (1.0 + na));
    }

    #[test]
    fn norm_is_submultiplicative(n in 1usize..=10, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (gaussian_matrix(&mut r, n), gaussian_matrix(&mut r, n));
        let nab = spectral_norm(&(&a * &b)).unwrap();
        prop_assert!(nab <= spectral_norm(&a).unwrap() * spectral_norm(&b).unwrap() + 1e-10);
    }

    #[test]
    fn squared_norm_is_top_eigenvalue_of_gram(n in 1usize..=12, seed in any::<u64>()) {
        let a = gaussian_matrix(&mut rng(seed), n);
        let gram = &a.adjoint() * &a;
        let top = hermitian_eigenvalues(&gram).unwrap().into_iter().fold(f64::MIN, f64::max);
        let s = spectral_norm(&a).unwrap();
        prop_assert!((s * s - top).abs() <= 1e-9 * top, "{} vs {top}", s * s);
    }

    #[test]
    fn schur_round_trip(n in 1usize..=12, seed in any::<u64>()) {
        let a = gaussian_matrix(&mut rng(seed), n);
        let s = schur(&a).unwrap();
        let u = &s.unitary.u;
        prop_assert!(s.t.is_upper_triangular(0.0));
        let back = &(u * &s.t) * &u.adjoint();
        prop_assert!((&back - &a).frobenius_norm() <= 1e-9 * a.frobenius_norm());
    }

    #[test]
    fn eigenvalues_survive_unitary_similarity(n in 1usize..=10, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gaussian_matrix(&mut r, n);
        let u = haar_unitary(&mut r, n);
        let ea = eigenvalues(&a).unwrap();
        let eb = eigenvalues(&unitary_conjugate(&a, &u)).unwrap();
        let gap = common::greedy_match(&ea, &eb);
        prop_assert!(gap <= 1e-8, "{gap}");
    }
}
