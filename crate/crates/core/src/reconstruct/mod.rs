//! Reconstruction of an upper triangular matrix with constant diagonal and
//! nonvanishing superdiagonal, up to a diagonal unitary, from the norms
//! `|f(A_i)|` of polynomials in its leading principal submatrices.
//!
//! The working matrix is translated to be nilpotent and its superdiagonal
//! made positive. Columns are recovered left to right: column `k` of the
//! `k x k` corner comes from queries at index `k`, starting at the
//! superdiagonal (from `|A_k^{k-1}|`) and moving up one entry at a time. For
//! the entry in row `k - i` the `(1, k)` entry of `A_k^{k-i}` is fitted from
//! the norms of `A_k^{k-i} + z E_{1k}`, then solved for the unknown through
//! `A^{k-i} = A^{k-i-1} A`.

mod corner;
mod oracle;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub use corner::{corner_norm, recover_power_corner, recover_power_corner_with_tol, sample_offsets, CornerFit, PLATEAU_TOL};
pub use oracle::{
    serve_oracle, LineOracle, NormOracle, OracleError, OracleRequest, OracleResponse, ShiftedOracle, SimulatedOracle,
};

use crate::linalg::{spectral_norm, CMatrix, LinalgError, C0, C1, CI as I};
use crate::poly::Polynomial;
use crate::random::{complex_in_disc, rng};

/// Reconstructed superdiagonal entries below this abort the run.
pub const POSITIVITY_FLOOR: f64 = 1e-8;
/// Relative tolerance of the a-posteriori trilateration check.
pub const TRILATERATION_TOL: f64 = 1e-8;
/// Relative held-out replay gap above which a reconstruction is rejected.
pub const VERIFICATION_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReconstructError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("inconsistent radii ({r0}, {r1}, {ri}): best point misses by {residual:.3e}")]
    Trilateration { r0: f64, r1: f64, ri: f64, residual: f64 },
    #[error("superdiagonal entry ({row}, {col}) = {value:.3e} vanishes: the first superdiagonal must be nonzero")]
    VanishingSuperdiagonal { row: usize, col: usize, value: f64 },
    #[error("negative squared distance {value:.3e}: norms inconsistent with any matrix of this shape")]
    NegativeRadicand { value: f64 },
    #[error("corner fit stalled with relative misfit {residual:.3e}: no consistent corner value")]
    Plateau { residual: f64 },
    #[error("corner fit found two distinct consistent values {first} and {second}")]
    MultipleMinima { first: Complex64, second: Complex64 },
    #[error("corner fit needs at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("oracle needs order >= 1")]
    EmptyOracle,
    #[error("recovered matrix disagrees with held-out queries: relative gap {gap:.3e}")]
    Verification { gap: f64 },
    #[error("while recovering entry ({row}, {col}): {source}")]
    Step { row: usize, col: usize, source: Box<ReconstructError> },
}

fn at(row: usize, col: usize) -> impl FnOnce(ReconstructError) -> ReconstructError {
    move |e| match e {
        e @ ReconstructError::Step { .. } => e,
        e => ReconstructError::Step { row, col, source: Box::new(e) },
    }
}

/// How well one recovered entry fits the data that determined it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryResidual {
    /// 1-based position.
    pub row: usize,
    pub col: usize,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    /// Upper triangular, diagonal `lambda`, real positive superdiagonal.
    pub recovered: CMatrix,
    pub lambda: Complex64,
    pub residuals: Vec<EntryResidual>,
    /// Oracle queries used, verification included.
    pub query_count: usize,
    /// Worst relative gap over the held-out replay.
    pub verification_gap: f64,
}

/// The point `c` with `|c| = r0`, `|c - 1| = r1`, `|c - i| = ri`.
pub fn trilaterate(r0: f64, r1: f64, ri: f64) -> Result<Complex64, ReconstructError> {
    let c = trilaterate_squared(r0 * r0, r1 * r1, ri * ri);
    let residual = [(c.norm() - r0), ((c - C1).norm() - r1), ((c - I).norm() - ri)]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    if residual > TRILATERATION_TOL * (1.0 + r0.max(r1).max(ri)) {
        return Err(ReconstructError::Trilateration { r0, r1, ri, residual });
    }
    Ok(c)
}

// exact in the squared distances, which avoids square-root cancellation
fn trilaterate_squared(q0: f64, q1: f64, qi: f64) -> Complex64 {
    Complex64::new((q0 + 1.0 - q1) / 2.0, (q0 + 1.0 - qi) / 2.0)
}

/// The common diagonal entry, from `|lambda|`, `|lambda - 1|`, `|lambda - i|`.
pub fn recover_lambda(oracle: &impl NormOracle) -> Result<Complex64, ReconstructError> {
    let r0 = oracle.query(1, &Polynomial::t())?;
    let r1 = oracle.query(1, &Polynomial::linear(C1))?;
    let ri = oracle.query(1, &Polynomial::linear(I))?;
    trilaterate(r0, r1, ri)
}

fn positive(value: f64, row: usize, col: usize) -> Result<f64, ReconstructError> {
    if value < POSITIVITY_FLOOR {
        return Err(ReconstructError::VanishingSuperdiagonal { row, col, value });
    }
    Ok(value)
}

/// The leading 3x3 block of a nilpotent oracle (diagonal already translated
/// to zero), with positive superdiagonal.
///
/// `a12 = |A_2|`, `a23 = |A_3^2| / a12`; for `w` in `{0, 1, i}` the norm `N`
/// of `A_3 - (w / (a12 a23)) A_3^2` gives
/// `|a13 - w|^2 = N^2 + (a12 a23 / N)^2 - a12^2 - a23^2`.
pub fn recover_base3(oracle: &impl NormOracle) -> Result<(CMatrix, Vec<EntryResidual>), ReconstructError> {
    let a12 = positive(oracle.query(2, &Polynomial::t())?, 1, 2)?;
    let a23 = positive(oracle.query(3, &Polynomial::monomial(2))? / a12, 2, 3)?;
    let p = a12 * a23;
    let mut sq = [0.0; 3];
    for (slot, w) in sq.iter_mut().zip([C0, C1, I]) {
        let f = &Polynomial::t() - &Polynomial::monomial(2).scale(w / p);
        let nrm = oracle.query(3, &f)?;
        if nrm <= 0.0 {
            return Err(ReconstructError::NegativeRadicand { value: 0.0 }).map_err(at(1, 3));
        }
        let value = nrm * nrm + (p / nrm).powi(2) - a12 * a12 - a23 * a23;
        // rounding can push a true zero slightly negative
        let slack = 1e-10 * (nrm * nrm + a12 * a12 + a23 * a23);
        if value < -slack {
            return Err(ReconstructError::NegativeRadicand { value }).map_err(at(1, 3));
        }
        *slot = value.max(0.0);
    }
    let a13 = trilaterate_squared(sq[0], sq[1], sq[2]);
    let residual = [a13.norm_sqr() - sq[0], (a13 - C1).norm_sqr() - sq[1], (a13 - I).norm_sqr() - sq[2]]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        / (1.0 + sq[0]);
    if residual > TRILATERATION_TOL {
        return Err(ReconstructError::Trilateration {
            r0: sq[0].sqrt(),
            r1: sq[1].sqrt(),
            ri: sq[2].sqrt(),
            residual,
        })
        .map_err(at(1, 3));
    }
    let mut a = CMatrix::zeros(3);
    a[(0, 1)] = a12.into();
    a[(1, 2)] = a23.into();
    a[(0, 2)] = a13;
    let residuals = vec![
        EntryResidual { row: 1, col: 2, residual: 0.0 },
        EntryResidual { row: 2, col: 3, residual: 0.0 },
        EntryResidual { row: 1, col: 3, residual },
    ];
    Ok((a, residuals))
}

/// Solves `(A^p)_{1k} = sum_{m=p}^{k-1} (A^{p-1})_{1m} a_{mk}` for `a_{pk}`
/// (1-based `p`, `k = n`), given every `a_{mk}` with `m > p` and the first
/// row of `A^{p-1}`. The coefficient of the unknown is the product of the
/// first `p - 1` superdiagonal entries.
pub fn back_substitute_column(
    a_partial: &CMatrix,
    prev_power: &CMatrix,
    p: usize,
    corner: Complex64,
) -> Result<Complex64, ReconstructError> {
    let k = a_partial.n();
    let mut rhs = corner;
    for m in p + 1..k {
        rhs -= prev_power[(0, m - 1)] * a_partial[(m - 1, k - 1)];
    }
    let lead = prev_power[(0, p - 1)];
    if lead.norm() < POSITIVITY_FLOOR.powi(p as i32).max(f64::MIN_POSITIVE) {
        return Err(ReconstructError::VanishingSuperdiagonal { row: 1, col: p, value: lead.norm() });
    }
    Ok(rhs / lead)
}

/// Relative rounding floor of the corner samples at order `k`.
///
/// The sample polynomials carry the coefficient `z / pi` on `t^{k-1}`; once
/// translated by the common eigenvalue and expanded in monomials, the
/// oracle's evaluation error relative to `|z|` is about
/// `eps (|lambda| + |N|)^{k-1} / pi`, with `N` the nilpotent part.
pub fn corner_noise_floor(lambda_abs: f64, nil_norm: f64, pi: f64, k: usize) -> f64 {
    f64::EPSILON * (lambda_abs + nil_norm).max(1.0).powi(k as i32 - 1) / pi
}

/// Appends column `k` (1-based, `k >= 4`) to the recovered `(k-1) x (k-1)`
/// nilpotent block, querying index `k` of a nilpotent oracle whose queries
/// are translated by an eigenvalue of modulus `lambda_abs`.
fn recover_column(
    oracle: &impl NormOracle,
    block: &CMatrix,
    lambda_abs: f64,
    residuals: &mut Vec<EntryResidual>,
) -> Result<CMatrix, ReconstructError> {
    let k = block.n() + 1;
    let mut a = CMatrix::from_fn(k, |i, j| if i < k - 1 && j < k - 1 { block[(i, j)] } else { C0 });
    let pi_prev: f64 = (0..k - 2).map(|l| a[(l, l + 1)].re).product();
    let top = oracle.query(k, &Polynomial::monomial(k - 1))?;
    let sup = positive(top / pi_prev, k - 1, k)?;
    a[(k - 2, k - 1)] = sup.into();
    residuals.push(EntryResidual { row: k - 1, col: k, residual: 0.0 });
    let pi = pi_prev * sup;
    let nil_norm = spectral_norm(&a)? + top.powf(1.0 / (k - 1) as f64);
    let plateau_tol = PLATEAU_TOL.max(1e3 * corner_noise_floor(lambda_abs, nil_norm, pi, k));

    // rows k-2 down to 1; row p uses the corner of A^p
    for p in (1..=k - 2).rev() {
        let prev_power = a.pow(p - 1);
        let mut m0 = &prev_power * &a;
        m0[(0, k - 1)] = C0;
        let sample = |z: Complex64| -> Result<(Complex64, f64), ReconstructError> {
            let g = &Polynomial::monomial(p) + &Polynomial::monomial(k - 1).scale(z / pi);
            Ok((z, oracle.query(k, &g)?))
        };
        let h0 = sample(C0).map_err(at(p, k))?;
        let mut samples = vec![h0];
        for z in sample_offsets(h0.1).into_iter().skip(1) {
            samples.push(sample(z).map_err(at(p, k))?);
        }
        let fit = recover_power_corner_with_tol(&m0, &samples, plateau_tol).map_err(at(p, k))?;
        a[(p - 1, k - 1)] = back_substitute_column(&a, &prev_power, p, fit.c).map_err(at(p, k))?;
        residuals.push(EntryResidual { row: p, col: k, residual: fit.residual });
    }
    Ok(a)
}

/// Full reconstruction from an oracle, followed by a held-out replay.
pub fn reconstruct(oracle: &impl NormOracle) -> Result<ReconstructionReport, ReconstructError> {
    reconstruct_with_seed(oracle, 0)
}

/// As [`reconstruct`], with the seed of the held-out replay family.
pub fn reconstruct_with_seed(oracle: &impl NormOracle, seed: u64) -> Result<ReconstructionReport, ReconstructError> {
    reconstruct_with(oracle, seed, 2 * oracle.order())
}

/// As [`reconstruct`], replaying `held_out` seeded polynomials (at least one
/// per index) after the reconstruction.
pub fn reconstruct_with(
    oracle: &impl NormOracle,
    seed: u64,
    held_out: usize,
) -> Result<ReconstructionReport, ReconstructError> {
    let n = oracle.order();
    if n == 0 {
        return Err(ReconstructError::EmptyOracle);
    }
    let lambda = recover_lambda(oracle).map_err(at(1, 1))?;
    let shifted = ShiftedOracle::new(oracle, lambda);
    let mut residuals = vec![EntryResidual { row: 1, col: 1, residual: 0.0 }];

    let mut a = CMatrix::zeros(1);
    if n >= 2 {
        let a12 = positive(shifted.query(2, &Polynomial::t()).map_err(|e| at(1, 2)(e.into()))?, 1, 2)
            .map_err(at(1, 2))?;
        a = CMatrix::zeros(2);
        a[(0, 1)] = a12.into();
        residuals.push(EntryResidual { row: 1, col: 2, residual: 0.0 });
    }
    if n >= 3 {
        let (base, base_res) = recover_base3(&shifted)?;
        a = base;
        residuals.extend(base_res.into_iter().skip(1));
    }
    for _ in 4..=n {
        a = recover_column(&shifted, &a, lambda.norm(), &mut residuals)?;
    }
    let recovered = a.shift_diag(lambda);
    let verification_gap = verify(oracle, &recovered, seed, held_out)?;
    if verification_gap > VERIFICATION_TOL {
        return Err(ReconstructError::Verification { gap: verification_gap });
    }
    Ok(ReconstructionReport { recovered, lambda, residuals, query_count: oracle.query_count(), verification_gap })
}

/// Held-out polynomials: `size.max(n)` of them, cycling through the indices
/// `1..=n`, degree equal to the index, seeded coefficients in the unit disc.
pub fn verification_family(n: usize, seed: u64, size: usize) -> Vec<(usize, Polynomial)> {
    let mut r = rng(seed ^ 0x0dd_ba11);
    (0..size.max(n))
        .map(|j| j % n + 1)
        .map(|i| (i, Polynomial::new((0..=i).map(|_| complex_in_disc(&mut r, 1.0)).collect())))
        .collect()
}

fn verify(oracle: &impl NormOracle, recovered: &CMatrix, seed: u64, size: usize) -> Result<f64, ReconstructError> {
    let mut worst = 0.0f64;
    for (i, f) in verification_family(oracle.order(), seed, size) {
        let truth = oracle.query(i, &f)?;
        let ours = spectral_norm(&f.eval_matrix(&recovered.leading_submatrix(i)?))?;
        worst = worst.max((truth - ours).abs() / (1.0 + truth.max(ours)));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toeplitz::{ones_nilpotent, shift_matrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trilaterate_examples() {
        assert_eq!(trilaterate(0.0, 1.0, 1.0).unwrap(), C0);
        let got = trilaterate(2f64.sqrt(), 1.0, 1.0).unwrap();
        assert!((got - c(1.0, 1.0)).norm() < 1e-15);
        let s = 2f64.sqrt();
        assert!(matches!(trilaterate(1.0, s, s), Err(ReconstructError::Trilateration { .. })));
    }

    #[test]
    fn lambda_examples() {
        for lambda in [C0, c(2.0, -3.0), I] {
            let mut a = ones_nilpotent(3).shift_diag(lambda);
            a[(0, 2)] = c(0.5, 0.5);
            let o = SimulatedOracle::new(&a).unwrap();
            assert!((recover_lambda(&o).unwrap() - lambda).norm() < 1e-12);
        }
    }

    #[test]
    fn base3_examples() {
        let (q, _) = recover_base3(&SimulatedOracle::new(&ones_nilpotent(3)).unwrap()).unwrap();
        assert!(q.max_abs_diff(&ones_nilpotent(3)) < 1e-12, "{q:?}");
        let a = CMatrix::from_real(&[&[0., 1., 0.], &[0., 0., 2.], &[0., 0., 0.]]);
        let (got, _) = recover_base3(&SimulatedOracle::new(&a).unwrap()).unwrap();
        assert!(got.max_abs_diff(&a) < 1e-12, "{got:?}");
        let (s, _) = recover_base3(&SimulatedOracle::new(&shift_matrix(3)).unwrap()).unwrap();
        assert!(s[(0, 2)].norm() < 1e-12);
    }

    #[test]
    fn back_substitution_on_ones_nilpotent() {
        // column 4 of Q(4) with rows 3 and 4 known; row 2 from the corner of Q^2
        let q = ones_nilpotent(4);
        let mut partial = q.clone();
        partial[(0, 3)] = C0;
        partial[(1, 3)] = C0;
        let got = back_substitute_column(&partial, &q, 2, q.pow(2)[(0, 3)]).unwrap();
        assert!((got - C1).norm() < 1e-15);
    }

    #[test]
    fn shift_reconstructs_with_zero_upper_entries() {
        for n in 3..=6 {
            let rep = reconstruct(&SimulatedOracle::new(&shift_matrix(n)).unwrap()).unwrap();
            assert!(rep.recovered.max_abs_diff(&shift_matrix(n)) < 1e-9, "{:?}", rep.recovered);
        }
    }

    #[test]
    fn ones_nilpotent_round_trip() {
        for n in 1..=8 {
            let rep = reconstruct(&SimulatedOracle::new(&ones_nilpotent(n)).unwrap()).unwrap();
            assert!(rep.recovered.max_abs_diff(&ones_nilpotent(n)) < 1e-8, "n={n} {:?}", rep.recovered);
            assert!(rep.query_count <= 50 * n * n);
        }
    }

    #[test]
    fn vanishing_superdiagonal_is_reported() {
        let mut a = ones_nilpotent(4);
        a[(1, 2)] = C0;
        let err = reconstruct(&SimulatedOracle::unchecked(&a).unwrap()).unwrap_err();
        assert!(err.to_string().contains("vanishes"), "{err}");
    }
}
