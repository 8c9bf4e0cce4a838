use proptest::prelude::*;
use unicell::invariants::{compression_2x2, norms_match, numerical_range_support, specht_test, word_trace, PolynomialFamily};
use unicell::linalg::unitary_conjugate;
use unicell::random::{gaussian_matrix, haar_unitary, rng};

fn word() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::bool::ANY, 1..=6).prop_map(|bits| bits.into_iter().map(|b| if b { 'y' } else { 'x' }).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn specht_test_is_symmetric(n in 1usize..=5, len in 1usize..=6, similar in any::<bool>(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gaussian_matrix(&mut r, n);
        let b = if similar { unitary_conjugate(&a, &haar_unitary(&mut r, n)) } else { gaussian_matrix(&mut r, n) };
        let ab = specht_test(&a, &b, len, 1e-9).unwrap();
        let ba = specht_test(&b, &a, len, 1e-9).unwrap();
        prop_assert_eq!(ab.matched, ba.matched);
        if similar {
            prop_assert!(ab.matched, "{ab:?}");
        }
    }

    #[test]
    fn word_traces_are_unitarily_invariant(n in 1usize..=6, w in word(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gaussian_matrix(&mut r, n);
        let b = unitary_conjugate(&a, &haar_unitary(&mut r, n));
        let (ta, tb) = (word_trace(&a, &w), word_trace(&b, &w));
        prop_assert!((ta - tb).norm() <= 1e-9 * (1.0 + ta.norm()), "{w}: {ta} vs {tb}");
    }

    #[test]
    fn compressions_shrink_the_numerical_range(n in 2usize..=8, seed in any::<u64>(), theta in 0.0f64..std::f64::consts::TAU) {
        let a = gaussian_matrix(&mut rng(seed), n);
        let whole = numerical_range_support(&a, theta).unwrap();
        for i in 1..n {
            let part = numerical_range_support(&compression_2x2(&a, i).unwrap(), theta).unwrap();
            prop_assert!(part <= whole + 1e-9, "i={i}: {part} > {whole}");
        }
    }

    #[test]
    fn similar_pairs_pass_both_norm_and_trace_tests(n in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gaussian_matrix(&mut r, n);
        let b = unitary_conjugate(&a, &haar_unitary(&mut r, n));
        prop_assert!(specht_test(&a, &b, 6, 1e-9).unwrap().matched);
        let family = PolynomialFamily::standard(n, 16, seed);
        prop_assert!(norms_match(&a, &b, &family, 1e-9).unwrap().matched);
    }
}
