mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use unicell::linalg::{unitary_conjugate, CMatrix};
use unicell::random::{complex_in_disc, diagonal_unitary, rng};
use unicell::reconstruct::{corner_norm, reconstruct, recover_power_corner, sample_offsets, trilaterate, SimulatedOracle};
use unicell::similarity::canonical_form;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn round_trip_error(a: &CMatrix) -> Result<f64, String> {
    let (_, canon) = canonical_form(a, false).map_err(|e| e.to_string())?;
    let rep = reconstruct(&SimulatedOracle::new(a).unwrap()).map_err(|e| e.to_string())?;
    Ok(rep.recovered.max_abs_diff(&canon) / (1.0 + canon.max_abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Every reconstruction step at the full entry ranges, eigenvalue 0.
    #[test]
    fn round_trip_nilpotent_full_ranges(n in 3usize..=8, seed in any::<u64>()) {
        let a = common::hidden(seed, n, 0.0, (0.1, 10.0), 10.0);
        let err = round_trip_error(&a).map_err(TestCaseError::fail)?;
        prop_assert!(err <= 1e-7, "{err:e}");
    }

    /// Superdiagonal in [0.5, 2], other entries and eigenvalue in the unit disc.
    #[test]
    fn round_trip_with_eigenvalue(n in 3usize..=8, seed in any::<u64>()) {
        let a = common::hidden(seed, n, 1.0, (0.5, 2.0), 1.0);
        let err = round_trip_error(&a).map_err(TestCaseError::fail)?;
        prop_assert!(err <= 1e-7, "{err:e}");
    }

    #[test]
    fn diagonal_unitary_equivariance(n in 3usize..=8, seed in any::<u64>()) {
        let a = common::hidden(seed, n, 1.0, (0.5, 2.0), 1.0);
        let w = diagonal_unitary(&mut rng(seed ^ 0xd1a6), n);
        let b = unitary_conjugate(&a, &w);
        let ra = reconstruct(&SimulatedOracle::new(&a).unwrap()).unwrap().recovered;
        let rb = reconstruct(&SimulatedOracle::new(&b).unwrap()).unwrap().recovered;
        prop_assert!(ra.max_abs_diff(&rb) <= 1e-9 * (1.0 + ra.max_abs()), "{:e}", ra.max_abs_diff(&rb));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn corner_fit_agrees_with_exhaustive_search(n in 3usize..=5, seed in any::<u64>()) {
        let p = 1 + (seed as usize) % (n - 2);
        let nil = common::hidden(seed, n, 0.0, (0.5, 2.0), 1.0);
        let power = nil.pow(p);
        let c = power[(0, n - 1)];
        let mut m = power.clone();
        m[(0, n - 1)] = Complex64::new(0.0, 0.0);
        let h0 = corner_norm(&m, c).unwrap();
        let samples: Vec<(Complex64, f64)> =
            sample_offsets(h0).into_iter().map(|z| (z, corner_norm(&m, c + z).unwrap())).collect();
        let fit = recover_power_corner(&m, &samples).unwrap();
        let brute = common::brute_force_corner(&m, &samples, h0, 200);
        prop_assert!((fit.c - brute).norm() <= 1e-6, "{} vs {brute}", fit.c);
        prop_assert!((fit.c - c).norm() <= 1e-6);
    }
}

#[test]
fn trilateration_inverts_forward_moduli() {
    let mut r = rng(0x7e11);
    for _ in 0..1000 {
        let c = complex_in_disc(&mut r, 10.0);
        let got = trilaterate(c.norm(), (c - 1.0).norm(), (c - I).norm()).unwrap();
        assert!((got - c).norm() <= 1e-12, "{got} vs {c}");
    }
}

#[test]
fn query_budget_is_quadratic() {
    for seed in 0..8 {
        let a = common::hidden(seed, 8, 1.0, (0.5, 2.0), 1.0);
        let rep = reconstruct(&SimulatedOracle::new(&a).unwrap()).unwrap();
        assert!(rep.query_count <= 50 * 64, "{}", rep.query_count);
    }
}

/// Full entry ranges (|entries| <= 10, superdiagonal moduli in [0.1, 10])
/// with a nonzero eigenvalue. Fails for some draws at n = 7, 8: the queries
/// `(t - lambda)^{k-1}` expanded in monomials are evaluated with absolute
/// error about `eps (|lambda| + |N|)^{k-1}`, which exceeds the tolerance
/// once the superdiagonal product is small.
#[test]
#[ignore = "double-precision floor of translated monomial queries; run with --ignored"]
fn round_trip_full_ranges_with_eigenvalue() {
    let mut failures = Vec::new();
    for seed in 0..120u64 {
        let n = 3 + (seed % 6) as usize;
        let a = common::hidden(seed, n, 10.0, (0.1, 10.0), 10.0);
        match round_trip_error(&a) {
            Ok(err) if err <= 1e-7 => {}
            other => failures.push((seed, n, other)),
        }
    }
    assert!(failures.is_empty(), "{} of 120 failed: {failures:?}", failures.len());
}
