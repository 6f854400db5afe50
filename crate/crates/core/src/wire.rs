//! Serde helpers for the on-disk representation of complex data: a complex
//! number is a `[re, im]` pair and a matrix is a row-major nested array.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{CMat, CVec};

/// A complex scalar as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireComplex(pub [f64; 2]);

impl From<Complex64> for WireComplex {
    fn from(z: Complex64) -> Self {
        Self([z.re, z.im])
    }
}

impl From<WireComplex> for Complex64 {
    fn from(w: WireComplex) -> Self {
        Complex64::new(w.0[0], w.0[1])
    }
}

pub type WireVector = Vec<WireComplex>;
pub type WireMatrix = Vec<Vec<WireComplex>>;

pub fn vector_to_wire(v: &CVec) -> WireVector {
    v.iter().map(|&z| z.into()).collect()
}

pub fn vector_from_wire(v: &[WireComplex]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&w| w.into()))
}

pub fn matrix_to_wire(m: &CMat) -> WireMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

/// Rows must be equally long; returns the offending row index otherwise.
pub fn matrix_from_wire(rows: &[Vec<WireComplex>]) -> Result<CMat, usize> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().position(|r| r.len() != m) {
        return Err(bad);
    }
    Ok(CMat::from_fn(n, m, |i, j| rows[i][j].into()))
}

pub fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    WireComplex::from(*z).serialize(s)
}

pub fn ser_cvec<S: Serializer>(v: &CVec, s: S) -> Result<S::Ok, S::Error> {
    vector_to_wire(v).serialize(s)
}

pub fn ser_opt_cvec<S: Serializer>(v: &Option<CVec>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(vector_to_wire).serialize(s)
}

pub fn de_cmat<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
    let rows = WireMatrix::deserialize(d)?;
    matrix_from_wire(&rows).map_err(|row| D::Error::custom(format!("ragged matrix at row {row}")))
}
