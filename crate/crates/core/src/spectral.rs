//! Spectra, Schatten norms and von Neumann entropy of Hermitian matrices.
//!
//! The dense eigensolver is nalgebra's Hermitian (`SymmetricEigen`) routine,
//! applied to the symmetrized matrix `(H + H^dagger) / 2`.

use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{hermitian_deviation, max_abs, CMatrix, HermitianMatrix, HERMITIAN_TOL};

/// Eigenvalues below this magnitude of negativity are treated as zero.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of the trace from one in [`entropy`].
pub const TRACE_TOL: f64 = 1e-8;

/// Real eigenvalues in descending order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Norms {
    /// `max |lambda|`
    pub op: f64,
    /// `sqrt(sum lambda^2)`
    pub hs: f64,
    /// `sum |lambda|`
    pub tr_abs: f64,
}

fn checked_symmetrized(h: &HermitianMatrix) -> Result<CMatrix> {
    let dev = hermitian_deviation(h.matrix());
    if dev > HERMITIAN_TOL * max_abs(h.matrix()).max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(h.symmetrized())
}

fn sort_descending(values: &mut [(f64, usize)]) {
    values.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
}

pub fn eig_hermitian(h: &HermitianMatrix) -> Result<Spectrum> {
    let sym = checked_symmetrized(h)?;
    let dim = sym.nrows();
    if dim == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            dim,
        });
    }
    let mut eigenvalues: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok(Spectrum { eigenvalues, dim })
}

/// Eigenvalues (descending) and the matching unit eigenvectors as columns.
pub fn eigh(h: &HermitianMatrix) -> Result<(Spectrum, CMatrix)> {
    let sym = checked_symmetrized(h)?;
    let dim = sym.nrows();
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    sort_descending(&mut order);
    let vectors = CMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c].1)]);
    Ok((
        Spectrum {
            eigenvalues: order.iter().map(|p| p.0).collect(),
            dim,
        },
        vectors,
    ))
}

impl Spectrum {
    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn norms(&self) -> Norms {
        let op = self.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let hs = self.eigenvalues.iter().map(|v| v * v).sum::<f64>().sqrt();
        let tr_abs = self.eigenvalues.iter().map(|v| v.abs()).sum();
        Norms { op, hs, tr_abs }
    }
}

pub fn norms(h: &HermitianMatrix) -> Result<Norms> {
    Ok(eig_hermitian(h)?.norms())
}

/// `-sum lambda log lambda` (natural log, `0 log 0 = 0`) of a spectrum whose
/// values are already validated.
pub fn entropy_of_spectrum(spectrum: &Spectrum) -> f64 {
    spectrum
        .eigenvalues
        .iter()
        .map(|&v| v.clamp(0.0, 1.0))
        .filter(|&v| v > 0.0)
        .map(|v| -v * v.ln())
        .sum()
}

/// Von Neumann entropy of a trace-one PSD matrix.
pub fn entropy(h: &HermitianMatrix) -> Result<f64> {
    let tr = h.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceNormalization(tr));
    }
    let spectrum = eig_hermitian(h)?;
    if spectrum.min() < -PSD_TOL {
        return Err(Error::InvalidParameter(format!(
            "matrix is not positive semidefinite (min eigenvalue {:e})",
            spectrum.min()
        )));
    }
    Ok(entropy_of_spectrum(&spectrum))
}
