use std::cmp::Ordering;

use num_complex::Complex64;

use super::{CMatrix, LinalgError, Result, UnitaryWitness, C0, C1};

/// Per-eigenvalue iteration cap for the shifted QR sweep.
const ITER_PER_EIGENVALUE: usize = 100;
const DEFLATION_TOL: f64 = 1e-14;

/// Complex Schur factorization `A = U T U*`.
#[derive(Clone, Debug)]
pub struct Schur {
    pub unitary: UnitaryWitness,
    pub t: CMatrix,
}

/// Householder reduction to upper Hessenberg form: returns `(Q, H)` with
/// `A = Q H Q*`.
pub fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.n();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { C1 };
        let mut v = x;
        v[0] += phase * xnorm;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            continue;
        }
        // H <- P H P with P = I - 2 v v*/v*v acting on rows/cols k+1..n
        for j in 0..n {
            let dot: Complex64 = (0..v.len()).map(|r| v[r].conj() * h[(k + 1 + r, j)]).sum();
            let f = dot * (2.0 / vn2);
            for r in 0..v.len() {
                let d = v[r] * f;
                h[(k + 1 + r, j)] -= d;
            }
        }
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let dot: Complex64 = (0..v.len()).map(|r| m[(i, k + 1 + r)] * v[r]).sum();
                let f = dot * (2.0 / vn2);
                for r in 0..v.len() {
                    let d = f * v[r].conj();
                    m[(i, k + 1 + r)] -= d;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C0;
        }
    }
    (q, h)
}

/// Complex Schur form by Hessenberg reduction and Wilkinson-shifted QR.
///
/// The diagonal of `T` is sorted lexicographically by (real, imaginary)
/// part through adjacent unitary swaps, so the output is deterministic.
pub fn schur(a: &CMatrix) -> Result<Schur> {
    let n = a.n();
    let (mut z, mut h) = hessenberg(a);
    let scale = h.frobenius_norm();
    let small = f64::EPSILON * scale;

    let mut hi = n.saturating_sub(1);
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let local = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if sub <= DEFLATION_TOL * local || sub <= small {
                h[(l, l - 1)] = C0;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > ITER_PER_EIGENVALUE * n {
            return Err(LinalgError::NoConvergence { routine: "shifted qr", iterations: total });
        }
        let mu = if iter % 11 == 10 {
            // exceptional shift breaks cycles
            h[(hi, hi)] + Complex64::new(0.75, 0.5) * h[(hi, hi - 1)].norm()
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, &mut z, l, hi, mu);
    }

    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = C0;
        }
    }
    sort_diagonal(&mut h, &mut z);
    Ok(Schur { unitary: UnitaryWitness::new(z), t: h })
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Unitary `G` with `G* [x; y] = [r; 0]`, returned as `(g11, g12, g21, g22)`.
fn givens(x: Complex64, y: Complex64) -> Option<(Complex64, Complex64, Complex64, Complex64)> {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r == 0.0 {
        return None;
    }
    let (c, s) = (x / r, y / r);
    // G = [[c, -conj(s)], [s, conj(c)]]
    Some((c, -s.conj(), s, c.conj()))
}

fn rotate_rows(m: &mut CMatrix, p: usize, q: usize, g: (Complex64, Complex64, Complex64, Complex64), cols: std::ops::Range<usize>) {
    let (g11, g12, g21, g22) = g;
    for j in cols {
        let (x, y) = (m[(p, j)], m[(q, j)]);
        m[(p, j)] = g11.conj() * x + g21.conj() * y;
        m[(q, j)] = g12.conj() * x + g22.conj() * y;
    }
}

fn rotate_cols(m: &mut CMatrix, p: usize, q: usize, g: (Complex64, Complex64, Complex64, Complex64), rows: std::ops::Range<usize>) {
    let (g11, g12, g21, g22) = g;
    for i in rows {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = x * g11 + y * g21;
        m[(i, q)] = x * g12 + y * g22;
    }
}

fn qr_step(h: &mut CMatrix, z: &mut CMatrix, lo: usize, hi: usize, mu: Complex64) {
    let n = h.n();
    for k in lo..=hi {
        h[(k, k)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let g = givens(h[(k, k)], h[(k + 1, k)]);
        if let Some(g) = g {
            rotate_rows(h, k, k + 1, g, k..n);
            h[(k + 1, k)] = C0;
        }
        rots.push(g);
    }
    for (k, g) in (lo..hi).zip(rots) {
        if let Some(g) = g {
            rotate_cols(h, k, k + 1, g, 0..(k + 2).min(hi + 1));
            rotate_cols(z, k, k + 1, g, 0..n);
        }
    }
    for k in lo..=hi {
        h[(k, k)] += mu;
    }
}

fn lex(a: Complex64, b: Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn sort_diagonal(t: &mut CMatrix, z: &mut CMatrix) {
    let n = t.n();
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1 + pass) {
            if lex(t[(k, k)], t[(k + 1, k + 1)]) == Ordering::Greater {
                swap_adjacent(t, z, k);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}

// Exchanges the diagonal entries at k and k+1 of an upper triangular T.
fn swap_adjacent(t: &mut CMatrix, z: &mut CMatrix, k: usize) {
    let n = t.n();
    let (t11, t22) = (t[(k, k)], t[(k + 1, k + 1)]);
    // eigenvector of the 2x2 block for t22 becomes the new leading basis vector
    let Some(g) = givens(t[(k, k + 1)], t22 - t11) else {
        return;
    };
    rotate_cols(t, k, k + 1, g, 0..n);
    rotate_rows(t, k, k + 1, g, 0..n);
    rotate_cols(z, k, k + 1, g, 0..n);
    t[(k + 1, k)] = C0;
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
}

/// Eigenvalues with multiplicity, in the Schur diagonal order.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let s = schur(a)?;
    Ok((0..a.n()).map(|i| s.t[(i, i)]).collect())
}

/// `max |lambda|` over the computed eigenvalues.
pub fn spectral_radius(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitary_conjugate;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check(a: &CMatrix) -> Schur {
        let s = schur(a).unwrap();
        assert!(s.unitary.unitarity_residual < 1e-12, "{}", s.unitary.unitarity_residual);
        let back = unitary_conjugate(a, &s.unitary.u);
        assert!((&back - &s.t).frobenius_norm() <= 1e-12 * (1.0 + a.frobenius_norm()));
        s
    }

    #[test]
    fn hessenberg_shape() {
        let a = CMatrix::from_fn(6, |i, j| c((i * 7 + j * 3) as f64 % 5.0, (i + j) as f64 * 0.1));
        let (q, h) = hessenberg(&a);
        for i in 0..6usize {
            for j in 0..i.saturating_sub(1) {
                assert_eq!(h[(i, j)], C0);
            }
        }
        assert!((&unitary_conjugate(&a, &q) - &h).frobenius_norm() < 1e-12);
    }

    #[test]
    fn triangular_input_keeps_diagonal() {
        let a = CMatrix::from_rows(vec![
            vec![c(-1., 0.), c(2., 1.), c(0., 3.)],
            vec![C0, c(0., 2.), c(1., 0.)],
            vec![C0, C0, c(4., 0.)],
        ])
        .unwrap();
        let s = check(&a);
        let d: Vec<Complex64> = (0..3).map(|i| s.t[(i, i)]).collect();
        assert_eq!(d, vec![c(-1., 0.), c(0., 2.), c(4., 0.)]);
        assert!(s.unitary.u.max_abs_diff(&CMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn hermitian_gives_real_diagonal() {
        let b = CMatrix::from_fn(4, |i, j| c((i + j) as f64, i as f64 - j as f64));
        let h = &b + &b.adjoint();
        let s = check(&h);
        for i in 0..4 {
            assert!(s.t[(i, i)].im.abs() < 1e-12);
            for j in i + 1..4 {
                assert!(s.t[(i, j)].norm() < 1e-10);
            }
        }
    }

    #[test]
    fn lower_shift_is_swapped() {
        let a = CMatrix::from_real(&[&[0., 0.], &[1., 0.]]);
        let s = check(&a);
        assert!((s.t[(0, 1)].norm() - 1.0).abs() < 1e-14);
        assert!(s.t[(0, 0)].norm() < 1e-14 && s.t[(1, 1)].norm() < 1e-14);
        // U maps e1 to a multiple of e2
        assert!(s.unitary.u[(0, 0)].norm() < 1e-14 && (s.unitary.u[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn companion_of_t2_minus_1() {
        let comp = CMatrix::from_real(&[&[0., 1.], &[1., 0.]]);
        let e = eigenvalues(&comp).unwrap();
        assert!((e[0] - c(-1., 0.)).norm() < 1e-13);
        assert!((e[1] - c(1., 0.)).norm() < 1e-13);
    }

    #[test]
    fn nilpotent_and_diagonal_radius() {
        let q = CMatrix::from_fn(5, |i, j| if j > i { C1 } else { C0 });
        assert_eq!(spectral_radius(&q).unwrap(), 0.0);
        for e in eigenvalues(&q).unwrap() {
            assert_eq!(e, C0);
        }
        let d = CMatrix::diag(&[c(1., 0.), c(0., 2.), c(-3., 0.)]);
        assert!((spectral_radius(&d).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn dense_matrix_converges() {
        let a = CMatrix::from_fn(9, |i, j| c(((i * 13 + j * 7) % 11) as f64 - 5.0, ((i * 3 + j) % 4) as f64));
        let s = check(&a);
        let diag: Vec<Complex64> = (0..9).map(|i| s.t[(i, i)]).collect();
        assert!(diag.windows(2).all(|w| lex(w[0], w[1]) != Ordering::Greater));
        let tr: Complex64 = diag.iter().sum();
        assert!((tr - a.trace()).norm() < 1e-10);
    }
}
