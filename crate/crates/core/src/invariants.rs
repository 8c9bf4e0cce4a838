//! Unitary-similarity invariants as executable tests: polynomial norm
//! profiles, trace words in `(A, A*)`, tensor norms and the numerical range.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{hermitian_eigenvalues, kron, spectral_norm, CMatrix, LinalgError};
use crate::poly::Polynomial;
use crate::random::{complex_in_disc, gaussian_matrix, rng};

/// Default cap on the number of words a trace test may enumerate.
pub const DEFAULT_WORD_BUDGET: usize = 1 << 22;
/// Recursion depth below which word subtrees are split across threads.
const PAR_DEPTH: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("word length {max_len} enumerates {words} words, above the budget of {budget}")]
    Budget { max_len: usize, words: u128, budget: usize },
    #[error("polynomial family must be nonempty")]
    EmptyFamily,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, InvariantError>;

/// Finite stand-in for "all polynomials".
#[derive(Clone, Debug)]
pub struct PolynomialFamily {
    pub polys: Vec<Polynomial>,
    pub description: String,
}

impl PolynomialFamily {
    pub fn new(polys: Vec<Polynomial>, description: impl Into<String>) -> Result<Self> {
        if polys.is_empty() {
            return Err(InvariantError::EmptyFamily);
        }
        Ok(PolynomialFamily { polys, description: description.into() })
    }

    /// `1, t, ..., t^d`
    pub fn monomials(d: usize) -> Self {
        PolynomialFamily { polys: (0..=d).map(Polynomial::monomial).collect(), description: format!("monomials <= {d}") }
    }

    /// `size` polynomials of degree `<= d` whose coefficients are uniform on
    /// the complex unit disc.
    pub fn random(size: usize, d: usize, seed: u64) -> Self {
        let mut r = rng(seed);
        let polys = (0..size)
            .map(|_| Polynomial::new((0..=d).map(|_| complex_in_disc(&mut r, 1.0)).collect()))
            .collect();
        PolynomialFamily { polys, description: format!("seeded random degree <= {d} (seed {seed}, size {size})") }
    }

    /// Monomials up to `d` followed by `size` random polynomials of degree `<= d`.
    pub fn standard(d: usize, size: usize, seed: u64) -> Self {
        let mut fam = Self::monomials(d);
        fam.polys.extend(Self::random(size, d, seed).polys);
        fam.description = format!("monomials <= {d} + seeded random degree <= {d} (seed {seed}, size {size})");
        fam
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

/// What achieved the worst gap (or, for trace words, the first failure).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Polynomial { index: usize, poly: Polynomial, norm_a: f64, norm_b: f64 },
    Word { word: String, trace_a: Complex64, trace_b: Complex64 },
    TensorSample { index: usize, seed: u64, norm_a: f64, norm_b: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub matched: bool,
    pub worst_gap: f64,
    pub witness: Option<Witness>,
    pub queries: usize,
}

fn check_orders(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(InvariantError::DimensionMismatch { left: a.n(), right: b.n() });
    }
    Ok(())
}

/// `[|f(A)| for f in F]`
pub fn norm_profile(a: &CMatrix, family: &PolynomialFamily) -> Result<Vec<f64>> {
    family.polys.par_iter().map(|f| Ok(spectral_norm(&f.eval_matrix(a))?)).collect()
}

/// Compares `|f(A)|` with `|f(B)|` over the family. The gap of a single
/// polynomial is `|.|f(A)| - |f(B)|.| / (1 + max(|f(A)|, |f(B)|))`.
pub fn norms_match(a: &CMatrix, b: &CMatrix, family: &PolynomialFamily, tol: f64) -> Result<InvariantReport> {
    check_orders(a, b)?;
    let na = norm_profile(a, family)?;
    let nb = norm_profile(b, family)?;
    let (index, worst_gap) = na
        .iter()
        .zip(&nb)
        .map(|(x, y)| (x - y).abs() / (1.0 + x.max(*y)))
        .enumerate()
        .fold((0, 0.0), |best, (i, g)| if g > best.1 { (i, g) } else { best });
    Ok(InvariantReport {
        matched: worst_gap <= tol,
        worst_gap,
        witness: Some(Witness::Polynomial {
            index,
            poly: family.polys[index].clone(),
            norm_a: na[index],
            norm_b: nb[index],
        }),
        queries: 2 * family.len(),
    })
}

/// `Trace w(X, X*)` with `x -> X`, `y -> X*`.
pub fn word_trace(a: &CMatrix, word: &str) -> Complex64 {
    let adj = a.adjoint();
    let mut p = CMatrix::identity(a.n());
    for ch in word.chars() {
        p = match ch {
            'x' => &p * a,
            'y' => &p * &adj,
            other => panic!("word letters are x and y, got {other:?}"),
        };
    }
    p.trace()
}

/// Number of nonempty words of length `<= max_len` in two letters.
pub fn word_count(max_len: usize) -> u128 {
    (1u128 << (max_len as u32 + 1).min(127)) - 2
}

#[derive(Clone, Debug, Default)]
struct WordSummary {
    worst: Option<(f64, String, Complex64, Complex64)>,
    first_fail: Option<(String, Complex64, Complex64)>,
    words: usize,
}

fn word_order(a: &str, b: &str) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl WordSummary {
    fn merge(mut self, other: WordSummary) -> WordSummary {
        self.words += other.words;
        self.worst = match (self.worst, other.worst) {
            (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && word_order(&y.1, &x.1).is_lt()) { y } else { x }),
            (x, y) => x.or(y),
        };
        self.first_fail = match (self.first_fail, other.first_fail) {
            (Some(x), Some(y)) => Some(if word_order(&y.0, &x.0).is_lt() { y } else { x }),
            (x, y) => x.or(y),
        };
        self
    }
}

struct WordWalk<'a> {
    letters_a: [&'a CMatrix; 2],
    letters_b: [&'a CMatrix; 2],
    max_len: usize,
    // denominators 1 + n s^len per length
    scale: Vec<f64>,
    tol: f64,
}

// tr(P X) without forming P X
fn trace_of_product(p: &CMatrix, x: &CMatrix) -> Complex64 {
    let n = p.n();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += p[(i, j)] * x[(j, i)];
        }
    }
    s
}

impl WordWalk<'_> {
    fn visit(&self, pa: &CMatrix, pb: &CMatrix, word: &mut String) -> WordSummary {
        let depth = word.len();
        let mut out = WordSummary::default();
        let mut children: Vec<(CMatrix, CMatrix, String)> = Vec::new();
        for (k, ch) in ['x', 'y'].into_iter().enumerate() {
            let (xa, xb) = (self.letters_a[k], self.letters_b[k]);
            let (ta, tb) = if depth + 1 < self.max_len {
                let (na, nb) = (pa * xa, pb * xb);
                let t = (na.trace(), nb.trace());
                word.push(ch);
                children.push((na, nb, word.clone()));
                word.pop();
                t
            } else {
                (trace_of_product(pa, xa), trace_of_product(pb, xb))
            };
            word.push(ch);
            let gap = (ta - tb).norm() / self.scale[depth + 1];
            out.words += 1;
            if out.worst.as_ref().is_none_or(|w| gap > w.0) {
                out.worst = Some((gap, word.clone(), ta, tb));
            }
            if gap > self.tol && out.first_fail.is_none() {
                out.first_fail = Some((word.clone(), ta, tb));
            }
            word.pop();
        }
        let recurse = |(na, nb, mut w): (CMatrix, CMatrix, String)| self.visit(&na, &nb, &mut w);
        let mut it = children.into_iter();
        match (it.next(), it.next()) {
            (Some(c0), Some(c1)) if depth < PAR_DEPTH => {
                let (s0, s1) = rayon::join(|| recurse(c0), || recurse(c1));
                out.merge(s0).merge(s1)
            }
            (c0, c1) => c0.into_iter().chain(c1).map(recurse).fold(out, WordSummary::merge),
        }
    }
}

/// Compares `Trace w(A, A*)` with `Trace w(B, B*)` over every word of length
/// `1..=max_len`. Words are ordered by length, then lexicographically with
/// `x < y`; the witness of a failure is the first failing word in that order.
///
/// The gap of a word of length `l` is `|tr_A - tr_B| / (1 + n s^l)` with
/// `s = max(|A|, |B|)`. A pass only means that no obstruction exists up to
/// `max_len`.
pub fn specht_test(a: &CMatrix, b: &CMatrix, max_len: usize, tol: f64) -> Result<InvariantReport> {
    specht_test_with_budget(a, b, max_len, tol, DEFAULT_WORD_BUDGET)
}

pub fn specht_test_with_budget(
    a: &CMatrix,
    b: &CMatrix,
    max_len: usize,
    tol: f64,
    budget: usize,
) -> Result<InvariantReport> {
    check_orders(a, b)?;
    let words = word_count(max_len);
    if max_len >= 127 || words > budget as u128 {
        return Err(InvariantError::Budget { max_len, words, budget });
    }
    if max_len == 0 {
        return Ok(InvariantReport { matched: true, worst_gap: 0.0, witness: None, queries: 0 });
    }
    let n = a.n() as f64;
    let s = spectral_norm(a)?.max(spectral_norm(b)?);
    let (aa, ba) = (a.adjoint(), b.adjoint());
    let walk = WordWalk {
        letters_a: [a, &aa],
        letters_b: [b, &ba],
        max_len,
        scale: (0..=max_len).map(|l| 1.0 + n * s.powi(l as i32)).collect(),
        tol,
    };
    let id = CMatrix::identity(a.n());
    let summary = walk.visit(&id, &id, &mut String::new());
    let worst_gap = summary.worst.as_ref().map_or(0.0, |w| w.0);
    let witness = match (summary.first_fail, summary.worst) {
        (Some((word, trace_a, trace_b)), _) => Some(Witness::Word { word, trace_a, trace_b }),
        (None, Some((_, word, trace_a, trace_b))) => Some(Witness::Word { word, trace_a, trace_b }),
        _ => None,
    };
    Ok(InvariantReport { matched: worst_gap <= tol, worst_gap, witness, queries: summary.words })
}

/// The `k`-th tensor sample `(C, D)`; reproducible from `(seed, k)` alone.
pub fn tensor_sample(n: usize, seed: u64, k: usize) -> (CMatrix, CMatrix) {
    let mut r = rng(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    // burn one draw so that neighbouring streams do not share a prefix
    let _: u64 = r.random();
    let c = gaussian_matrix(&mut r, n);
    let d = gaussian_matrix(&mut r, n);
    (c, d)
}

/// `|A (x) C + I (x) D|` against `|B (x) C + I (x) D|` for seeded complex
/// Gaussian `(C, D)`. Gaps are relative: `|.|x| - |y|.| / (1 + max)`.
pub fn arveson_test(a: &CMatrix, b: &CMatrix, samples: usize, seed: u64, tol: f64) -> Result<InvariantReport> {
    check_orders(a, b)?;
    let n = a.n();
    let id = CMatrix::identity(n);
    let gaps: Vec<(f64, f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let (c, d) = tensor_sample(n, seed, k);
            let tail = kron(&id, &d);
            let na = spectral_norm(&(&kron(a, &c) + &tail))?;
            let nb = spectral_norm(&(&kron(b, &c) + &tail))?;
            Ok(((na - nb).abs() / (1.0 + na.max(nb)), na, nb))
        })
        .collect::<Result<_>>()?;
    let mut worst = None;
    for (k, &(g, na, nb)) in gaps.iter().enumerate() {
        if worst.is_none_or(|(_, wg, _, _)| g > wg) {
            worst = Some((k, g, na, nb));
        }
    }
    let worst_gap = worst.map_or(0.0, |w| w.1);
    Ok(InvariantReport {
        matched: worst_gap <= tol,
        worst_gap,
        witness: worst.map(|(index, _, norm_a, norm_b)| Witness::TensorSample { index, seed, norm_a, norm_b }),
        queries: 2 * samples,
    })
}

/// Support function of the numerical range in direction `theta`:
/// the largest eigenvalue of `Re(e^{-i theta} A)`.
pub fn numerical_range_support(a: &CMatrix, theta: f64) -> Result<f64> {
    let rotated = a.scale(Complex64::from_polar(1.0, -theta));
    let values = hermitian_eigenvalues(&rotated)?;
    Ok(values.last().copied().unwrap_or(0.0))
}

/// The compression of `A` to `span{e_i, e_{i+1}}` (1-based `i`).
pub fn compression_2x2(a: &CMatrix, i: usize) -> Result<CMatrix> {
    let n = a.n();
    if i == 0 || i + 1 > n {
        return Err(LinalgError::IndexOutOfRange { index: i, max: n.saturating_sub(1) }.into());
    }
    Ok(CMatrix::from_fn(2, |r, c| a[(i - 1 + r, i - 1 + c)]))
}
