//! Full Fock-space matrices of the cubic ladder sums built from a
//! coefficient tensor.

use num_complex::Complex64;

use super::tensor::CoefficientTensor4;
use crate::error::{Error, Result};
use crate::fock_basis::{apply_word, LadderOp, OccupationMask};
use crate::hermitian::CMatrix;

/// Largest `M` for the full-Fock certificates (`2^8 = 256` basis states).
pub const MAX_FULL_FOCK_MODES: usize = 8;

pub(crate) fn check_modes(modes: usize) -> Result<()> {
    if modes > MAX_FULL_FOCK_MODES {
        return Err(Error::DimensionOverflow {
            dim: 1 << modes.min(63),
            cap: 1 << MAX_FULL_FOCK_MODES,
        });
    }
    Ok(())
}

/// `out += coeff * word` on the full Fock space.
fn add_word(out: &mut CMatrix, coeff: Complex64, word: &[LadderOp], modes: usize) {
    if coeff == Complex64::new(0.0, 0.0) {
        return;
    }
    for col in 0..1usize << modes {
        let mask = OccupationMask {
            bits: col as u32,
            modes,
        };
        if let Some((sign, image)) = apply_word(word, mask) {
            out[(image.bits as usize, col)] += coeff * sign as f64;
        }
    }
}

fn zeros(modes: usize) -> CMatrix {
    CMatrix::zeros(1 << modes, 1 << modes)
}

use LadderOp as Op;

/// `B_n = sum_{k,l,m} conj(A_{k,l,m,n}) c_m* c_l c_k`.
pub fn cubic_operator(a: &CoefficientTensor4, n: usize) -> CMatrix {
    let m = a.modes();
    let mut out = zeros(m);
    for k in 0..m {
        for l in 0..m {
            for mm in 0..m {
                let word = [Op::create(mm), Op::annihilate(l), Op::annihilate(k)];
                add_word(&mut out, a.get(k, l, mm, n).conj(), &word, m);
            }
        }
    }
    out
}

/// `{B^dagger, B} = B^dagger B + B B^dagger`.
pub fn anticommutator_with_adjoint(b: &CMatrix) -> CMatrix {
    b.ad_mul(b) + b * b.adjoint()
}

/// Right-hand side of the anticommutator identity for antisymmetric `A`:
/// `sum_m |X_m|^2 + 4 sum_k |Y_k|^2 - 2 sum_{k,l} |Z_kl|^2` with `|X|^2 = X* X`,
/// `X_m = sum_{k,l} conj(A_{klmn}) c_l c_k`, `Y_k = sum_{l,m} A_{klmn} c_l* c_m`,
/// `Z_kl = sum_m A_{klmn} c_m`.
pub fn anticommutator_expansion(a: &CoefficientTensor4, n: usize) -> CMatrix {
    let m = a.modes();
    let mut out = zeros(m);
    for mm in 0..m {
        let mut x = zeros(m);
        for k in 0..m {
            for l in 0..m {
                add_word(&mut x, a.get(k, l, mm, n).conj(), &[Op::annihilate(l), Op::annihilate(k)], m);
            }
        }
        out += x.ad_mul(&x);
    }
    for k in 0..m {
        let mut y = zeros(m);
        for l in 0..m {
            for mm in 0..m {
                add_word(&mut y, a.get(k, l, mm, n), &[Op::create(l), Op::annihilate(mm)], m);
            }
        }
        out += y.ad_mul(&y) * Complex64::new(4.0, 0.0);
    }
    for k in 0..m {
        for l in 0..m {
            let mut z = zeros(m);
            for mm in 0..m {
                add_word(&mut z, a.get(k, l, mm, n), &[Op::annihilate(mm)], m);
            }
            out -= z.ad_mul(&z) * Complex64::new(2.0, 0.0);
        }
    }
    out
}

/// `S = sum_n {B_n^dagger, B_n}` on the full Fock space.
pub fn anticommutator_sum(a: &CoefficientTensor4) -> CMatrix {
    let m = a.modes();
    let mut s = zeros(m);
    for n in 0..m {
        s += anticommutator_with_adjoint(&cubic_operator(a, n));
    }
    s
}

/// Rows and columns of a full-Fock matrix whose masks have popcount `N`.
pub fn restrict_to_sector(op: &CMatrix, modes: usize, particles: usize) -> CMatrix {
    let idx: Vec<usize> = (0..1usize << modes)
        .filter(|b| b.count_ones() as usize == particles)
        .collect();
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| op[(idx[i], idx[j])])
}
