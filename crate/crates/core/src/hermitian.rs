use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest allowed `max |H - H^dagger|`, relative to `max(1, max |H_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub type CMatrix = DMatrix<Complex64>;

/// Dense complex matrix checked to be Hermitian up to [`HERMITIAN_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    entries: CMatrix,
}

/// `max_ij |H_ij - conj(H_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// `max_ij |a_ij - b_ij|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

impl HermitianMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare(entries.nrows(), entries.ncols()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite matrix entry".into()));
        }
        let dev = hermitian_deviation(&entries);
        if dev > HERMITIAN_TOL * max_abs(&entries).max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            entries: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(diag[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> CMatrix {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn deviation(&self) -> f64 {
        hermitian_deviation(&self.entries)
    }

    /// `(H + H^dagger) / 2`.
    pub fn symmetrized(&self) -> CMatrix {
        (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0)
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `sqrt(sum |H_ij|^2)`, computed from the entries.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            entries: &self.entries * Complex64::new(s, 0.0),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&MatrixJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_str(s)?;
        raw.try_into()
    }
}

/// Wire form: `{dim, entries: [[re, im], ...]}` in row-major order.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(h: &HermitianMatrix) -> Self {
        let n = h.dim();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = h.entries[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self { dim: n, entries }
    }
}

impl TryFrom<MatrixJson> for HermitianMatrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        if raw.entries.len() != raw.dim * raw.dim {
            return Err(Error::DimensionMismatch {
                expected: raw.dim * raw.dim,
                found: raw.entries.len(),
            });
        }
        let m = CMatrix::from_row_iterator(
            raw.dim,
            raw.dim,
            raw.entries.into_iter().map(|[re, im]| Complex64::new(re, im)),
        );
        HermitianMatrix::new(m)
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatrixJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian(_))));
        assert!(matches!(
            HermitianMatrix::new(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare(2, 3))
        ));
    }

    #[test]
    fn json_is_row_major() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.25),
                Complex64::new(0.5, -0.25),
                Complex64::new(-2.0, 0.0),
            ],
        );
        let h = HermitianMatrix::new(m).unwrap();
        let s = h.to_json().unwrap();
        assert_eq!(
            s,
            r#"{"dim":2,"entries":[[1.0,0.0],[0.5,0.25],[0.5,-0.25],[-2.0,0.0]]}"#
        );
        assert_eq!(HermitianMatrix::from_json(&s).unwrap(), h);
    }
}
