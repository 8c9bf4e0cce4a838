//! JSON exchange formats for matrices and polynomials.
//!
//! Matrices: `{"n": 2, "entries": [[[re, im], [re, im]], [[re, im], [re, im]]]}`,
//! row-major. Polynomials: `{"coeffs": [[re, im], ...]}`, ascending powers.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{CMatrix, LinalgError};
use crate::poly::Polynomial;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("declared order {declared} but found {rows} rows")]
    OrderMismatch { declared: usize, rows: usize },
    #[error(transparent)]
    Matrix(#[from] LinalgError),
}

#[derive(Deserialize)]
struct MatrixDoc {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

pub fn parse_matrix(text: &str) -> Result<CMatrix, JsonError> {
    let doc: MatrixDoc = serde_json::from_str(text)?;
    if doc.entries.len() != doc.n {
        return Err(JsonError::OrderMismatch { declared: doc.n, rows: doc.entries.len() });
    }
    let rows = doc.entries.into_iter().map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect();
    Ok(CMatrix::from_rows(rows)?)
}

// `{:e}` with 16 fractional digits: 17 significant digits, always round-trips.
fn number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn matrix_to_json(a: &CMatrix) -> String {
    let rows: Vec<String> = a
        .rows()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|z| format!("[{}, {}]", number(z.re), number(z.im))).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("{{\"n\": {}, \"entries\": [{}]}}", a.n(), rows.join(", "))
}

/// Embeds a matrix inside a serde-built report without losing digits.
pub fn matrix_raw(a: &CMatrix) -> Box<serde_json::value::RawValue> {
    serde_json::value::RawValue::from_string(matrix_to_json(a)).expect("matrix JSON is well formed")
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyDoc { coeffs: self.coeffs().iter().map(|c| [c.re, c.im]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = PolyDoc::deserialize(d)?;
        if doc.coeffs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(D::Error::custom("polynomial coefficients must be finite"));
        }
        Ok(Polynomial::new(doc.coeffs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
    }
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial, JsonError> {
    Ok(serde_json::from_str(text)?)
}
