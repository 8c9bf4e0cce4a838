//! Unitary similarity of unicellular matrices.
//!
//! A unicellular matrix (a single Jordan block) has exactly one invariant
//! flag, so its unitary triangularizations differ only by diagonal unitaries.
//! Making the superdiagonal positive removes that freedom; two such matrices
//! are unitarily similar exactly when these canonical forms coincide.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::invariants::{specht_test, InvariantError, PolynomialFamily, Witness};
use crate::linalg::{schur, spectral_norm, svd, CMatrix, LinalgError, UnitaryWitness, C0, C1, DEFAULT_TOL};
use crate::poly::Polynomial;
use crate::reconstruct::sample_offsets;

/// Relative size of the singular values treated as zero by the
/// triangularization.
pub const NULL_TOL: f64 = 1e-9;
/// The second-smallest singular value of `A - lambda I` must exceed
/// `GAP_FACTOR * NULL_TOL` (relative) for a single Jordan block.
const GAP_FACTOR: f64 = 100.0;
/// Band for "constant diagonal" after triangularization.
pub const DIAGONAL_BAND: f64 = 1e-7;
/// Superdiagonal entries below this (relative) are treated as zero.
pub const SUPERDIAGONAL_FLOOR: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimilarityError {
    #[error("not in the reconstructible class: {0}")]
    NotInClass(String),
    #[error("need 0 < alpha < beta, got alpha = {alpha}, beta = {beta}")]
    ParameterOrder { alpha: f64, beta: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

pub type Result<T> = std::result::Result<T, SimilarityError>;

/// Unitary `U` and upper triangular `T = U* A U` for a unicellular `A`, or
/// `None` when `A` is not (numerically) a single Jordan block.
///
/// With `lambda = trace / n`, repeatedly takes a null vector of the trailing
/// compression of `A - lambda I` (smallest right singular vector), moves it
/// to the front with a Householder reflector and recurses.
pub fn triangularize_unicellular(a: &CMatrix) -> Result<Option<(CMatrix, CMatrix)>> {
    let n = a.n();
    let lambda = a.trace() / n as f64;
    let nil = a.shift_diag(-lambda);
    let scale = spectral_norm(&nil)?;
    if n == 1 {
        return Ok(Some((CMatrix::identity(1), a.clone())));
    }
    if scale == 0.0 {
        return Ok(None);
    }
    let mut u = CMatrix::identity(n);
    for s in 0..n - 1 {
        let m = n - s;
        let current = &(&u.adjoint() * &nil) * &u;
        let block = CMatrix::from_fn(m, |i, j| current[(s + i, s + j)]);
        let dec = svd(&block)?;
        if dec.sigma[m - 1] > NULL_TOL * scale {
            return Ok(None);
        }
        if s == 0 && dec.sigma[m - 2] <= GAP_FACTOR * NULL_TOL * scale {
            return Ok(None);
        }
        let v: Vec<Complex64> = (0..m).map(|i| dec.v[(i, m - 1)]).collect();
        let h = householder_to_e1(&v);
        u = CMatrix::from_fn(n, |i, j| {
            if j < s {
                u[(i, j)]
            } else {
                (0..m).map(|k| u[(i, s + k)] * h[(k, j - s)]).sum()
            }
        });
    }
    let mut t = &(&u.adjoint() * a) * &u;
    for i in 0..n {
        for j in 0..i {
            t[(i, j)] = C0;
        }
    }
    Ok(Some((u, t)))
}

// unitary H with H e_1 = v (unit v)
fn householder_to_e1(v: &[Complex64]) -> CMatrix {
    let m = v.len();
    let phase = if v[0].norm() > 0.0 { v[0] / v[0].norm() } else { C1 };
    // w = v - phase e1; H = phase (I - 2 w w*/w*w) maps e1 to v up to the
    // correction below
    let mut w = v.to_vec();
    w[0] -= phase;
    let wn: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    if wn < 1e-300 {
        return CMatrix::identity(m).scale(phase);
    }
    // R = I - 2 w w* / w*w sends phase*e1 to v, hence R(e1) = v / phase
    CMatrix::from_fn(m, |i, j| {
        let id = if i == j { C1 } else { C0 };
        (id - w[i] * w[j].conj() * (2.0 / wn)) * phase
    })
}

/// Single Jordan block test (one eigenvalue, geometric multiplicity one).
pub fn is_unicellular(a: &CMatrix) -> Result<bool> {
    Ok(triangularize_unicellular(a)?.is_some())
}

/// Diagonal unitary `W` (`w_1 = 1`) making the superdiagonal of `W* T W`
/// real and positive, and that matrix.
pub fn positive_superdiagonal(t: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = t.n();
    let floor = SUPERDIAGONAL_FLOOR * (1.0 + t.max_abs());
    let mut w = vec![C1; n];
    for k in 0..n.saturating_sub(1) {
        let x = t[(k, k + 1)];
        if x.norm() <= floor {
            return Err(SimilarityError::NotInClass(format!("superdiagonal entry ({}, {}) vanishes", k + 1, k + 2)));
        }
        let phase = if x.im == 0.0 && x.re > 0.0 { C1 } else { x.conj() / x.norm() };
        w[k + 1] = w[k] * phase;
    }
    let mut c = CMatrix::from_fn(n, |i, j| if j >= i { w[i].conj() * t[(i, j)] * w[j] } else { C0 });
    for k in 0..n.saturating_sub(1) {
        c[(k, k + 1)] = Complex64::new(c[(k, k + 1)].norm(), 0.0);
    }
    Ok((CMatrix::diag(&w), c))
}

/// Canonical representative under diagonal unitaries, with the unitary
/// carrying `A` to it.
///
/// With `triangularize = false` the input must already be upper triangular.
/// Otherwise unicellular inputs are triangularized through their invariant
/// flag and anything else through the Schur form.
pub fn canonical_form(a: &CMatrix, triangularize: bool) -> Result<(UnitaryWitness, CMatrix)> {
    let (u, t) = if triangularize {
        match triangularize_unicellular(a)? {
            Some(ut) => ut,
            None => {
                let s = schur(a)?;
                (s.unitary.u, s.t)
            }
        }
    } else {
        if !a.is_upper_triangular(1e-12 * (1.0 + a.max_abs())) {
            return Err(SimilarityError::NotInClass("matrix is not upper triangular".into()));
        }
        (CMatrix::identity(a.n()), a.clone())
    };
    let (w, c) = positive_superdiagonal(&t)?;
    Ok((UnitaryWitness::new(&u * &w), c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Similar,
    NotSimilar,
    Inconclusive,
}

/// A polynomial and index at which the principal norm profiles differ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Separation {
    /// 1-based leading submatrix order.
    pub index: usize,
    pub poly: Polynomial,
    pub norm_a: f64,
    pub norm_b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    OrderMismatch { left: usize, right: usize },
    /// First canonical entry (1-based, reconstruction order) that disagrees.
    Entry { row: usize, col: usize, a: Complex64, b: Complex64, separation: Option<Separation> },
    Invariant { witness: Witness },
}

#[derive(Clone, Debug)]
pub struct SimilarityReport {
    pub verdict: Verdict,
    /// `B = U* A U`, present for `Similar`.
    pub witness: Option<UnitaryWitness>,
    /// `|U* A U - B|_F` for the witness.
    pub witness_residual: Option<f64>,
    pub obstruction: Option<Obstruction>,
    pub method: String,
    pub reason: Option<String>,
    /// Largest canonical-entry difference, when both canonical forms exist.
    pub max_entry_diff: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SimilarityOptions {
    /// Relative tolerance on canonical entries.
    pub tol: f64,
    /// Relative bound on `|U* A U - B|_F / max(1, |A|_F)` for a `Similar` verdict.
    pub witness_tol: f64,
    /// Word length for the trace falsifier outside the unicellular class;
    /// `None` means `2n` (capped at 12).
    pub word_len: Option<usize>,
}

impl Default for SimilarityOptions {
    fn default() -> Self {
        SimilarityOptions { tol: DEFAULT_TOL, witness_tol: 1e-7, word_len: None }
    }
}

/// Positions in the order the reconstruction determines them: `(1,1)`, then
/// column by column, each column bottom-up from the superdiagonal.
pub fn reconstruction_order(n: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 0)];
    for k in 1..n {
        for r in (0..k).rev() {
            out.push((r, k));
        }
    }
    out
}

pub fn decide_unitary_similarity(a: &CMatrix, b: &CMatrix) -> Result<SimilarityReport> {
    decide_unitary_similarity_with(a, b, &SimilarityOptions::default())
}

pub fn decide_unitary_similarity_with(a: &CMatrix, b: &CMatrix, opts: &SimilarityOptions) -> Result<SimilarityReport> {
    let n = a.n();
    if n != b.n() {
        return Ok(SimilarityReport {
            verdict: Verdict::NotSimilar,
            witness: None,
            witness_residual: None,
            obstruction: Some(Obstruction::OrderMismatch { left: n, right: b.n() }),
            method: "order comparison".into(),
            reason: None,
            max_entry_diff: None,
        });
    }
    let (ta, tb) = rayon::join(|| triangularize_unicellular(a), || triangularize_unicellular(b));
    let (Some((ua, ta)), Some((ub, tb))) = (ta?, tb?) else {
        return fallback(a, b, opts, "outside unicellular class");
    };
    for (t, name) in [(&ta, "A"), (&tb, "B")] {
        if let Some(why) = class_violation(t) {
            return fallback(a, b, opts, &format!("{name} outside the unicellular class: {why}"));
        }
    }
    let (wa, ca) = positive_superdiagonal(&ta)?;
    let (wb, cb) = positive_superdiagonal(&tb)?;
    let scale = 1.0 + spectral_norm(a)?.max(spectral_norm(b)?);
    let diffs: Vec<((usize, usize), f64)> =
        reconstruction_order(n).into_iter().map(|(i, j)| ((i, j), (ca[(i, j)] - cb[(i, j)]).norm())).collect();
    let max_diff = diffs.iter().map(|d| d.1).fold(0.0, f64::max);
    let method = "flag triangularization + positive-superdiagonal canonical form".to_string();

    if let Some(&((i, j), _)) = diffs.iter().find(|d| d.1 > 10.0 * opts.tol * scale) {
        let separation = separating_polynomial(&ca, &cb, i, j)?;
        return Ok(SimilarityReport {
            verdict: Verdict::NotSimilar,
            witness: None,
            witness_residual: None,
            obstruction: Some(Obstruction::Entry { row: i + 1, col: j + 1, a: ca[(i, j)], b: cb[(i, j)], separation }),
            method,
            reason: None,
            max_entry_diff: Some(max_diff),
        });
    }
    let u = &(&(&ua * &wa) * &wb.adjoint()) * &ub.adjoint();
    let witness = UnitaryWitness::new(u);
    let residual = (&crate::linalg::unitary_conjugate(a, &witness.u) - b).frobenius_norm();
    let residual_ok = residual <= opts.witness_tol * a.frobenius_norm().max(1.0);
    let (verdict, reason) = if max_diff > opts.tol * scale {
        (Verdict::Inconclusive, Some(format!("canonical forms agree only to {max_diff:.3e}")))
    } else if !residual_ok {
        (Verdict::Inconclusive, Some(format!("witness residual {residual:.3e} too large")))
    } else {
        (Verdict::Similar, None)
    };
    Ok(SimilarityReport {
        verdict,
        witness: Some(witness),
        witness_residual: Some(residual),
        obstruction: None,
        method,
        reason,
        max_entry_diff: Some(max_diff),
    })
}

fn class_violation(t: &CMatrix) -> Option<String> {
    let n = t.n();
    let mean = t.trace() / n as f64;
    let scale = 1.0 + spectral_norm(t).unwrap_or(f64::INFINITY);
    if let Some(i) = (0..n).find(|&i| (t[(i, i)] - mean).norm() > DIAGONAL_BAND * scale) {
        return Some(format!("diagonal entry {} is off the mean eigenvalue", i + 1));
    }
    if let Some(k) = (0..n.saturating_sub(1)).find(|&k| t[(k, k + 1)].norm() <= SUPERDIAGONAL_FLOOR * scale) {
        return Some(format!("superdiagonal entry ({}, {}) vanishes", k + 1, k + 2));
    }
    None
}

fn fallback(a: &CMatrix, b: &CMatrix, opts: &SimilarityOptions, reason: &str) -> Result<SimilarityReport> {
    let len = opts.word_len.unwrap_or((2 * a.n()).min(12));
    let rep = specht_test(a, b, len, opts.tol)?;
    let (verdict, obstruction) = match (rep.matched, rep.witness) {
        (false, Some(witness)) => (Verdict::NotSimilar, Some(Obstruction::Invariant { witness })),
        _ => (Verdict::Inconclusive, None),
    };
    Ok(SimilarityReport {
        verdict,
        witness: None,
        witness_residual: None,
        obstruction,
        method: format!("trace words up to length {len}"),
        reason: Some(reason.to_string()),
        max_entry_diff: None,
    })
}

/// Candidate polynomials probing canonical entry `(i, j)` (0-based) of
/// matrices with common diagonal `lambda`, the way the reconstruction reads
/// that entry, paired with the leading order they are applied at.
fn probes(c: &CMatrix, i: usize, j: usize) -> Vec<(usize, Polynomial)> {
    let lambda = c[(0, 0)];
    let shift = Polynomial::linear(lambda);
    let at = |f: Polynomial| f.compose(&shift);
    let k = j + 1;
    if (i, j) == (0, 0) {
        let im = Complex64::new(0.0, 1.0);
        return [C0, C1, im].into_iter().map(|w| (1, Polynomial::linear(w))).collect();
    }
    if i + 1 == j {
        return vec![(k, at(Polynomial::monomial(j)))];
    }
    let pi: f64 = (0..j).map(|l| c[(l, l + 1)].re).product();
    let p = i + 1; // 1-based row: corner of the p-th power
    let mut out = Vec::new();
    if k == 3 {
        let im = Complex64::new(0.0, 1.0);
        for w in [C0, C1, im] {
            out.push((3, at(&Polynomial::t() - &Polynomial::monomial(2).scale(w / pi))));
        }
    }
    let power = c.shift_diag(-lambda).pow(p);
    let h0 = spectral_norm(&power.leading_submatrix(k).expect("k <= n")).unwrap_or(1.0);
    let mut zs = sample_offsets(h0);
    let s = zs[1].re;
    for a in -2..=2 {
        for b in -2..=2 {
            zs.push(Complex64::new(a as f64, b as f64) * (s / 2.0));
        }
    }
    for z in zs {
        out.push((k, at(&Polynomial::monomial(p) + &Polynomial::monomial(j).scale(z / pi))));
    }
    out
}

/// Polynomial and index separating the principal norm profiles of two
/// canonical forms whose first disagreement is at `(i, j)` (0-based).
pub fn separating_polynomial(ca: &CMatrix, cb: &CMatrix, i: usize, j: usize) -> Result<Option<Separation>> {
    let mut best: Option<(f64, Separation)> = None;
    for (index, poly) in probes(ca, i, j) {
        let norm_a = spectral_norm(&poly.eval_matrix(&ca.leading_submatrix(index)?))?;
        let norm_b = spectral_norm(&poly.eval_matrix(&cb.leading_submatrix(index)?))?;
        let gap = (norm_a - norm_b).abs() / (1.0 + norm_a.max(norm_b));
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, Separation { index, poly, norm_a, norm_b }));
        }
    }
    Ok(best.filter(|(g, _)| *g > 0.0).map(|(_, s)| s))
}

/// Rows `i = 1..n`, columns the family: `|f_j(A_i)|`.
pub fn principal_norm_profile(a: &CMatrix, family: &PolynomialFamily) -> Result<Vec<Vec<f64>>> {
    (1..=a.n())
        .into_par_iter()
        .map(|i| {
            let sub = a.leading_submatrix(i)?;
            family.polys.iter().map(|f| Ok(spectral_norm(&f.eval_matrix(&sub))?)).collect()
        })
        .collect()
}

/// The 3x3 pair with superdiagonals `(alpha, beta)` and `(beta, alpha)`:
/// equal norms `|f(.)|` for every polynomial, yet not unitarily similar.
pub fn counterexample_pair(alpha: f64, beta: f64) -> Result<(CMatrix, CMatrix)> {
    if !(alpha > 0.0 && alpha < beta && beta.is_finite()) {
        return Err(SimilarityError::ParameterOrder { alpha, beta });
    }
    let a = CMatrix::from_real(&[&[0., alpha, 0.], &[0., 0., beta], &[0., 0., 0.]]);
    let ap = CMatrix::from_real(&[&[0., beta, 0.], &[0., 0., alpha], &[0., 0., 0.]]);
    Ok((a, ap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitary_conjugate;
    use crate::random::{diagonal_unitary, haar_unitary, rng, unicellular_triangular};
    use crate::toeplitz::ones_nilpotent;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unicellular_examples() {
        assert!(is_unicellular(&ones_nilpotent(5)).unwrap());
        assert!(!is_unicellular(&CMatrix::zeros(2)).unwrap());
        let (a, ap) = counterexample_pair(1.0, 2.0).unwrap();
        assert!(is_unicellular(&a).unwrap() && is_unicellular(&ap).unwrap());
        assert!(!is_unicellular(&CMatrix::diag(&[C0, C1])).unwrap());
        assert!(is_unicellular(&CMatrix::identity(1)).unwrap());
        // nilpotent of index 2 in order 3: two Jordan blocks
        let two_blocks = CMatrix::from_real(&[&[0., 1., 0.], &[0., 0., 0.], &[0., 0., 0.]]);
        assert!(!is_unicellular(&two_blocks).unwrap());
    }

    #[test]
    fn triangularization_recovers_flag() {
        let mut r = rng(5);
        let t0 = unicellular_triangular(&mut r, 6, c(0.3, -1.0), (0.5, 2.0), 1.0);
        let u = haar_unitary(&mut r, 6);
        let a = unitary_conjugate(&t0, &u.adjoint());
        let (v, t) = triangularize_unicellular(&a).unwrap().unwrap();
        assert!((&unitary_conjugate(&a, &v) - &t).frobenius_norm() < 1e-12);
        let (_, c1) = positive_superdiagonal(&t).unwrap();
        let (_, c0) = positive_superdiagonal(&t0).unwrap();
        assert!(c1.max_abs_diff(&c0) < 1e-11, "{c1:?} vs {c0:?}");
    }

    #[test]
    fn canonical_form_examples() {
        let a = CMatrix::from_rows(vec![
            vec![C0, c(-1.0, 0.0), c(0.5, 0.5)],
            vec![C0, C0, c(0.0, 1.0)],
            vec![C0, C0, C0],
        ])
        .unwrap();
        let (w, ca) = canonical_form(&a, false).unwrap();
        assert!((ca[(0, 1)] - C1).norm() < 1e-15 && (ca[(1, 2)] - C1).norm() < 1e-15);
        assert!((&unitary_conjugate(&a, &w.u) - &ca).frobenius_norm() < 1e-15);
        let q = ones_nilpotent(4);
        let (w, cq) = canonical_form(&q, false).unwrap();
        assert_eq!(cq, q);
        assert_eq!(w.u, CMatrix::identity(4));
        let (_, ap) = counterexample_pair(1.0, 2.0).unwrap();
        assert_eq!(canonical_form(&ap, false).unwrap().1, ap);
        let (_, twice) = canonical_form(&ca, false).unwrap();
        assert_eq!(twice, ca);
        assert!(canonical_form(&CMatrix::zeros(2), false).is_err());
    }

    #[test]
    fn decide_examples() {
        let mut r = rng(9);
        let t0 = unicellular_triangular(&mut r, 7, c(1.0, 1.0), (0.5, 2.0), 1.0);
        let u = haar_unitary(&mut r, 7);
        let b = unitary_conjugate(&t0, &u);
        let rep = decide_unitary_similarity(&t0, &b).unwrap();
        assert_eq!(rep.verdict, Verdict::Similar, "{rep:?}");
        assert!(rep.witness_residual.unwrap() <= 1e-7);

        let (a, ap) = counterexample_pair(1.0, 2.0).unwrap();
        let rep = decide_unitary_similarity(&a, &ap).unwrap();
        assert_eq!(rep.verdict, Verdict::NotSimilar);
        let Some(Obstruction::Entry { row, col, separation: Some(sep), .. }) = rep.obstruction else { panic!() };
        assert_eq!((row, col), (1, 2));
        assert_eq!(sep.index, 2);
        assert!((sep.norm_a - sep.norm_b).abs() > 0.5);

        let rep = decide_unitary_similarity(&a, &a).unwrap();
        assert_eq!(rep.verdict, Verdict::Similar);
        assert!(rep.witness.unwrap().u.max_abs_diff(&CMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn diagonal_unitary_changes_nothing() {
        let mut r = rng(2);
        let t = unicellular_triangular(&mut r, 5, c(0.0, 2.0), (0.5, 2.0), 1.0);
        let w = diagonal_unitary(&mut r, 5);
        let (_, c1) = canonical_form(&t, false).unwrap();
        let (_, c2) = canonical_form(&unitary_conjugate(&t, &w), false).unwrap();
        assert!(c1.max_abs_diff(&c2) < 1e-14);
    }

    #[test]
    fn outside_class_falls_back_to_traces() {
        let d1 = CMatrix::diag(&[C0, C1]);
        let d2 = CMatrix::diag(&[C0, c(2.0, 0.0)]);
        let rep = decide_unitary_similarity(&d1, &d2).unwrap();
        assert_eq!(rep.verdict, Verdict::NotSimilar);
        assert!(matches!(rep.obstruction, Some(Obstruction::Invariant { .. })));
        let rep = decide_unitary_similarity(&d1, &d1).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        let rep = decide_unitary_similarity(&d1, &CMatrix::identity(3)).unwrap();
        assert_eq!(rep.verdict, Verdict::NotSimilar);
    }

    #[test]
    fn profile_examples() {
        let (a, ap) = counterexample_pair(1.0, 2.0).unwrap();
        let fam = PolynomialFamily::standard(3, 8, 1);
        let pa = principal_norm_profile(&a, &fam).unwrap();
        let pb = principal_norm_profile(&ap, &fam).unwrap();
        assert_eq!(pa.len(), 3);
        for (j, f) in fam.polys.iter().enumerate() {
            assert!((pa[0][j] - f.eval(C0).norm()).abs() < 1e-15);
        }
        let row2 = pa[1].iter().zip(&pb[1]).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(row2 > 0.1);
        let mut r = rng(3);
        let t = unicellular_triangular(&mut r, 4, c(0.5, 0.0), (0.5, 2.0), 1.0);
        let tw = unitary_conjugate(&t, &diagonal_unitary(&mut r, 4));
        let p1 = principal_norm_profile(&t, &fam).unwrap();
        let p2 = principal_norm_profile(&tw, &fam).unwrap();
        for (x, y) in p1.iter().flatten().zip(p2.iter().flatten()) {
            assert!((x - y).abs() <= 1e-10 * (1.0 + x));
        }
    }

    #[test]
    fn counterexample_examples() {
        let (a, ap) = counterexample_pair(1.0, 2.0).unwrap();
        assert_eq!(a[(0, 1)], C1);
        assert_eq!(ap[(0, 1)], c(2.0, 0.0));
        let flip = CMatrix::from_real(&[&[0., 0., 1.], &[0., 1., 0.], &[1., 0., 0.]]);
        assert_eq!(unitary_conjugate(&a.transpose(), &flip), ap);
        assert!(counterexample_pair(2.0, 1.0).is_err());
        assert!(counterexample_pair(0.0, 1.0).is_err());
    }
}
