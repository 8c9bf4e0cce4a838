use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{spectral_norm, CMatrix, LinalgError};
use crate::poly::Polynomial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("index {index} outside 1..={n}")]
    Index { index: usize, n: usize },
    #[error("hidden matrix outside the reconstructible class: {0}")]
    Hypothesis(String),
    #[error("oracle transport: {0}")]
    Transport(String),
    #[error("oracle reported: {0}")]
    Remote(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Black box answering `|f(A_i)|` for a hidden matrix `A`, where `A_i` is
/// its leading `i x i` principal submatrix (1-based `i`).
pub trait NormOracle {
    fn order(&self) -> usize;
    fn query(&self, i: usize, f: &Polynomial) -> Result<f64, OracleError>;
    fn query_count(&self) -> usize;
}

impl<O: NormOracle + ?Sized> NormOracle for &O {
    fn order(&self) -> usize {
        (**self).order()
    }
    fn query(&self, i: usize, f: &Polynomial) -> Result<f64, OracleError> {
        (**self).query(i, f)
    }
    fn query_count(&self) -> usize {
        (**self).query_count()
    }
}

/// Forward simulator over a known matrix.
#[derive(Debug)]
pub struct SimulatedOracle {
    leading: Vec<CMatrix>,
    count: AtomicUsize,
}

/// Relative size below which a superdiagonal entry counts as zero.
const SUPERDIAGONAL_FLOOR: f64 = 1e-8;

impl SimulatedOracle {
    /// Accepts upper triangular matrices with constant diagonal and
    /// nonvanishing first superdiagonal.
    pub fn new(hidden: &CMatrix) -> Result<Self, OracleError> {
        let n = hidden.n();
        let scale = 1.0 + hidden.max_abs();
        if hidden.lower_max_abs() > 1e-12 * scale {
            return Err(OracleError::Hypothesis("matrix is not upper triangular".into()));
        }
        let lambda = hidden[(0, 0)];
        for i in 0..n {
            if (hidden[(i, i)] - lambda).norm() > 1e-12 * scale {
                return Err(OracleError::Hypothesis(format!("diagonal entry {} differs from entry 1", i + 1)));
            }
            if i + 1 < n && hidden[(i, i + 1)].norm() <= SUPERDIAGONAL_FLOOR * scale {
                return Err(OracleError::Hypothesis(format!("superdiagonal entry ({}, {}) vanishes", i + 1, i + 2)));
            }
        }
        Self::unchecked(hidden)
    }

    /// Any matrix; used to feed deliberately invalid data to the reconstructor.
    pub fn unchecked(hidden: &CMatrix) -> Result<Self, OracleError> {
        let leading = (1..=hidden.n()).map(|k| hidden.leading_submatrix(k)).collect::<Result<_, _>>()?;
        Ok(SimulatedOracle { leading, count: AtomicUsize::new(0) })
    }

    pub fn hidden(&self) -> &CMatrix {
        self.leading.last().expect("order >= 1")
    }
}

impl NormOracle for SimulatedOracle {
    fn order(&self) -> usize {
        self.leading.len()
    }

    fn query(&self, i: usize, f: &Polynomial) -> Result<f64, OracleError> {
        let n = self.order();
        if i == 0 || i > n {
            return Err(OracleError::Index { index: i, n });
        }
        self.count.fetch_add(1, Ordering::Relaxed);
        Ok(spectral_norm(&f.eval_matrix(&self.leading[i - 1]))?)
    }

    fn query_count(&self) -> usize {
        self.count.load(Ordering::Relaxed)
    }
}

/// Presents `A - lambda I` by composing every query with `t - lambda`.
pub struct ShiftedOracle<O> {
    inner: O,
    lambda: Complex64,
}

impl<O: NormOracle> ShiftedOracle<O> {
    pub fn new(inner: O, lambda: Complex64) -> Self {
        ShiftedOracle { inner, lambda }
    }
}

impl<O: NormOracle> NormOracle for ShiftedOracle<O> {
    fn order(&self) -> usize {
        self.inner.order()
    }
    fn query(&self, i: usize, f: &Polynomial) -> Result<f64, OracleError> {
        self.inner.query(i, &f.compose(&Polynomial::linear(self.lambda)))
    }
    fn query_count(&self) -> usize {
        self.inner.query_count()
    }
}

#[derive(Serialize, Deserialize)]
pub struct OracleRequest {
    pub i: usize,
    pub poly: Polynomial,
}

#[derive(Serialize, Deserialize, Default)]
pub struct OracleResponse {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Client side of the line protocol: one request object per line out, one
/// response object per line back.
pub struct LineOracle<R, W> {
    io: Mutex<(R, W)>,
    n: usize,
    count: AtomicUsize,
}

impl<R: BufRead, W: Write> LineOracle<R, W> {
    pub fn new(reader: R, writer: W, n: usize) -> Self {
        LineOracle { io: Mutex::new((reader, writer)), n, count: AtomicUsize::new(0) }
    }
}

impl<R: BufRead, W: Write> NormOracle for LineOracle<R, W> {
    fn order(&self) -> usize {
        self.n
    }

    fn query(&self, i: usize, f: &Polynomial) -> Result<f64, OracleError> {
        if i == 0 || i > self.n {
            return Err(OracleError::Index { index: i, n: self.n });
        }
        let transport = |e: std::io::Error| OracleError::Transport(e.to_string());
        let request = serde_json::to_string(&OracleRequest { i, poly: f.clone() })
            .map_err(|e| OracleError::Transport(e.to_string()))?;
        let mut guard = self.io.lock().map_err(|_| OracleError::Transport("poisoned lock".into()))?;
        let (reader, writer) = &mut *guard;
        writeln!(writer, "{request}").map_err(transport)?;
        writer.flush().map_err(transport)?;
        let mut line = String::new();
        if reader.read_line(&mut line).map_err(transport)? == 0 {
            return Err(OracleError::Transport("oracle closed its output".into()));
        }
        self.count.fetch_add(1, Ordering::Relaxed);
        let resp: OracleResponse =
            serde_json::from_str(line.trim()).map_err(|e| OracleError::Transport(format!("bad response {line:?}: {e}")))?;
        match (resp.norm, resp.error) {
            (_, Some(msg)) => Err(OracleError::Remote(msg)),
            (Some(x), None) if x.is_finite() && x >= 0.0 => Ok(x),
            (other, None) => Err(OracleError::Transport(format!("invalid norm {other:?}"))),
        }
    }

    fn query_count(&self) -> usize {
        self.count.load(Ordering::Relaxed)
    }
}

/// Server side of the line protocol; returns when the input ends.
pub fn serve_oracle(oracle: &dyn NormOracle, reader: impl BufRead, mut writer: impl Write) -> std::io::Result<()> {
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let resp = match serde_json::from_str::<OracleRequest>(&line) {
            Ok(req) => match oracle.query(req.i, &req.poly) {
                Ok(x) => OracleResponse { norm: Some(x), error: None },
                Err(e) => OracleResponse { norm: None, error: Some(e.to_string()) },
            },
            Err(e) => OracleResponse { norm: None, error: Some(format!("malformed request: {e}")) },
        };
        writeln!(writer, "{}", serde_json::to_string(&resp).expect("response serializes"))?;
        writer.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toeplitz::ones_nilpotent;

    #[test]
    fn simulator_examples() {
        let o = SimulatedOracle::new(&ones_nilpotent(3)).unwrap();
        assert_eq!(o.query(2, &Polynomial::t()).unwrap(), 1.0);
        let a = CMatrix::from_fn(4, |i, j| match j as i64 - i as i64 {
            0 => Complex64::new(1.0, 1.0),
            1 => Complex64::new(0.0, 0.5 + i as f64),
            2 | 3 => Complex64::new(2.0, -1.0),
            _ => Complex64::new(0.0, 0.0),
        });
        let o = SimulatedOracle::new(&a).unwrap();
        let shifted = ShiftedOracle::new(&o, Complex64::new(1.0, 1.0));
        let top = shifted.query(4, &Polynomial::monomial(3)).unwrap();
        assert!((top - 0.5 * 1.5 * 2.5).abs() < 1e-12);
        assert!(o.query(1, &Polynomial::linear(Complex64::new(1.0, 1.0))).unwrap() == 0.0);
        assert_eq!(o.query_count(), 2);
        assert!(o.query(5, &Polynomial::t()).is_err());
    }

    #[test]
    fn simulator_rejects_invalid_hidden_matrices() {
        assert!(SimulatedOracle::new(&CMatrix::identity(3)).is_err());
        let mut q = ones_nilpotent(3);
        q[(1, 1)] = Complex64::new(1.0, 0.0);
        assert!(SimulatedOracle::new(&q).is_err());
        let mut q = ones_nilpotent(3);
        q[(2, 0)] = Complex64::new(1.0, 0.0);
        assert!(SimulatedOracle::new(&q).is_err());
    }

    #[test]
    fn line_protocol_round_trip() {
        let sim = SimulatedOracle::new(&ones_nilpotent(3)).unwrap();
        let requests = [
            serde_json::to_string(&OracleRequest { i: 3, poly: Polynomial::t() }).unwrap(),
            "{\"i\": 9, \"poly\": {\"coeffs\": [[0, 0], [1, 0]]}}".to_string(),
            "garbage".to_string(),
        ]
        .join("\n");
        let mut out = Vec::new();
        serve_oracle(&sim, requests.as_bytes(), &mut out).unwrap();
        let lines: Vec<&str> = std::str::from_utf8(&out).unwrap().lines().collect();
        let expected = spectral_norm(&ones_nilpotent(3)).unwrap();
        let first: OracleResponse = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first.norm, Some(expected));
        assert!(lines[1].contains("error") && lines[2].contains("malformed"));

        let client = LineOracle::new(std::io::Cursor::new(out), Vec::new(), 3);
        assert_eq!(client.query(3, &Polynomial::t()).unwrap(), expected);
        assert!(matches!(client.query(3, &Polynomial::t()), Err(OracleError::Remote(_))));
        assert!(matches!(client.query(3, &Polynomial::t()), Err(OracleError::Remote(_))));
        assert!(matches!(client.query(3, &Polynomial::t()), Err(OracleError::Transport(_))));
    }
}
