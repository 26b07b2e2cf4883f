//! One- and two-body reduced density matrices.
//!
//! Two-mode operators act on `h (x) h` with the row-major flattening
//! `(k, l) -> k * M + l`, used alike for `gamma2`, the exchange operator and
//! coefficient tensors.
//!
//! Entry conventions (inner products conjugate-linear on the left):
//! - `gamma1[k, m] = <c_m psi, c_k psi>`
//! - `gamma2[(k, l), (m, n)] = <c_n c_m psi, c_l c_k psi>`

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock_basis::MAX_FOCK_MODES;
use crate::hermitian::{CMatrix, HermitianMatrix};
use crate::states::SectorVector;

/// Two-body matrices are `M^2 x M^2`; `M` is capped like full-Fock work.
pub const MAX_RDM_MODES: usize = MAX_FOCK_MODES;

#[inline]
pub fn pair_index(k: usize, l: usize, modes: usize) -> usize {
    k * modes + l
}

#[inline]
pub fn unflatten_pair(index: usize, modes: usize) -> (usize, usize) {
    (index / modes, index % modes)
}

/// `v_kl = c_l c_k psi` for one ordered pair `k < l`.
#[derive(Clone, Debug)]
pub struct PairVector {
    pub k: usize,
    pub l: usize,
    pub vector: SectorVector,
}

/// All `c_l c_k psi` with `k < l`, in lexicographic `(k, l)` order. Empty
/// when `N < 2`. No normalization is required.
pub fn pair_vectors(psi: &SectorVector) -> Vec<PairVector> {
    let m = psi.modes();
    if psi.particles() < 2 {
        return Vec::new();
    }
    let singles: Vec<SectorVector> = (0..m)
        .map(|k| psi.annihilate(k).expect("N >= 1"))
        .collect();
    let mut out = Vec::with_capacity(m * (m - 1) / 2);
    for (k, ck) in singles.iter().enumerate() {
        for l in k + 1..m {
            out.push(PairVector {
                k,
                l,
                vector: ck.annihilate(l).expect("N >= 2"),
            });
        }
    }
    out
}

/// Gram matrix `G[a][b] = <v_b, v_a>` over the pair vectors.
pub(crate) fn pair_gram(pairs: &[PairVector]) -> Vec<Vec<Complex64>> {
    let p = pairs.len();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); p]; p];
    for a in 0..p {
        for b in a..p {
            let z = pairs[b].vector.inner(&pairs[a].vector);
            g[a][b] = z;
            g[b][a] = z.conj();
        }
    }
    g
}

fn check_rdm_input(psi: &SectorVector) -> Result<()> {
    if psi.modes() > MAX_RDM_MODES {
        return Err(Error::DimensionOverflow {
            dim: (psi.modes() * psi.modes()) as u64,
            cap: (MAX_RDM_MODES * MAX_RDM_MODES) as u64,
        });
    }
    psi.ensure_normalized()
}

/// One-body density matrix, `M x M`.
pub fn gamma1(psi: &SectorVector) -> Result<HermitianMatrix> {
    psi.ensure_normalized()?;
    let m = psi.modes();
    if psi.particles() == 0 {
        return Ok(HermitianMatrix::zeros(m));
    }
    let singles: Vec<SectorVector> = (0..m)
        .map(|k| psi.annihilate(k).expect("N >= 1"))
        .collect();
    let mut g = CMatrix::zeros(m, m);
    for k in 0..m {
        for j in k..m {
            let z = singles[j].inner(&singles[k]);
            g[(k, j)] = z;
            g[(j, k)] = z.conj();
        }
    }
    HermitianMatrix::new(g)
}

/// Two-body density matrix, `M^2 x M^2`, assembled from the Gram matrix of
/// the pair vectors `c_l c_k psi`.
pub fn gamma2(psi: &SectorVector) -> Result<HermitianMatrix> {
    check_rdm_input(psi)?;
    let m = psi.modes();
    let pairs = pair_vectors(psi);
    let gram = pair_gram(&pairs);
    let mut out = CMatrix::zeros(m * m, m * m);
    for (a, pa) in pairs.iter().enumerate() {
        let (k, l) = (pa.k, pa.l);
        for (b, pb) in pairs.iter().enumerate() {
            let (mm, n) = (pb.k, pb.l);
            let z = gram[a][b];
            out[(pair_index(k, l, m), pair_index(mm, n, m))] = z;
            out[(pair_index(l, k, m), pair_index(mm, n, m))] = -z;
            out[(pair_index(k, l, m), pair_index(n, mm, m))] = -z;
            out[(pair_index(l, k, m), pair_index(n, mm, m))] = z;
        }
    }
    HermitianMatrix::new(out)
}

/// `(1 - Ex)(g1 (x) g1)`: entry `g1[k,m] g1[l,n] - g1[l,m] g1[k,n]`.
pub fn exchange_corrected_product(g1: &HermitianMatrix) -> CMatrix {
    let m = g1.dim();
    let g = g1.matrix();
    CMatrix::from_fn(m * m, m * m, |row, col| {
        let (k, l) = unflatten_pair(row, m);
        let (mm, n) = unflatten_pair(col, m);
        g[(k, mm)] * g[(l, n)] - g[(l, mm)] * g[(k, n)]
    })
}

/// `gamma2 - (1 - Ex)(gamma1 (x) gamma1)` from precomputed RDMs.
pub fn truncate(g1: &HermitianMatrix, g2: &HermitianMatrix) -> Result<HermitianMatrix> {
    let m = g1.dim();
    if g2.dim() != m * m {
        return Err(Error::DimensionMismatch {
            expected: m * m,
            found: g2.dim(),
        });
    }
    HermitianMatrix::new(g2.matrix() - exchange_corrected_product(g1))
}

/// Truncated two-body matrix; zero exactly on Slater states.
pub fn gamma2_truncated(psi: &SectorVector) -> Result<HermitianMatrix> {
    let g1 = gamma1(psi)?;
    let g2 = gamma2(psi)?;
    truncate(&g1, &g2)
}

/// Swap `u_k (x) u_l <-> u_l (x) u_k` as an `M^2 x M^2` permutation matrix.
pub fn exchange_matrix(modes: usize) -> HermitianMatrix {
    let d = modes * modes;
    let mut ex = CMatrix::zeros(d, d);
    for k in 0..modes {
        for l in 0..modes {
            ex[(pair_index(l, k, modes), pair_index(k, l, modes))] = Complex64::new(1.0, 0.0);
        }
    }
    HermitianMatrix::new(ex).expect("permutation of a swap is symmetric")
}

/// `tr(gamma1 (1 - gamma1)) = tr(gamma1) - sum |gamma1_ij|^2`.
pub fn slater_defect(g1: &HermitianMatrix) -> f64 {
    let sq: f64 = g1.matrix().iter().map(|z| z.norm_sqr()).sum();
    g1.trace() - sq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::max_abs_diff;
    use crate::states::{random_state, slater, yang_pairing};

    #[test]
    fn gamma1_of_slater_is_projection() {
        let g = gamma1(&slater(4, &[0, 1]).unwrap()).unwrap();
        let want = HermitianMatrix::from_real_diagonal(&[1.0, 1.0, 0.0, 0.0]);
        assert!(max_abs_diff(g.matrix(), want.matrix()) < 1e-15);
    }

    #[test]
    fn gamma1_of_small_pairing_is_half_identity() {
        let g = gamma1(&yang_pairing(4, 2).unwrap()).unwrap();
        let want = HermitianMatrix::identity(4).scaled(0.5);
        assert!(max_abs_diff(g.matrix(), want.matrix()) < 1e-14);
    }

    #[test]
    fn traces() {
        for (m, n, seed) in [(5, 2, 1), (6, 3, 2), (7, 4, 3), (4, 4, 4), (3, 1, 5)] {
            let psi = random_state(m, n, seed).unwrap();
            assert!((gamma1(&psi).unwrap().trace() - n as f64).abs() < 1e-10);
            let want = (n * n.saturating_sub(1)) as f64;
            assert!((gamma2(&psi).unwrap().trace() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn single_particle_has_no_pairs() {
        let psi = random_state(5, 1, 3).unwrap();
        let g2 = gamma2(&psi).unwrap();
        assert!(g2.matrix().iter().all(|z| z.norm() == 0.0));
        let g1 = gamma1(&psi).unwrap();
        let t = gamma2_truncated(&psi).unwrap();
        let want = -exchange_corrected_product(&g1);
        assert!(max_abs_diff(t.matrix(), &want) < 1e-15);
    }

    #[test]
    fn two_mode_slater_block() {
        let g2 = gamma2(&slater(2, &[0, 1]).unwrap()).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let (a, b) = (pair_index(0, 1, 2), pair_index(1, 0, 2));
        for row in 0..4 {
            for col in 0..4 {
                let want = match (row, col) {
                    (r, c) if r == a && c == a => one,
                    (r, c) if r == b && c == b => one,
                    (r, c) if (r == a && c == b) || (r == b && c == a) => -one,
                    _ => Complex64::new(0.0, 0.0),
                };
                assert_eq!(g2.get(row, col), want, "entry ({row},{col})");
            }
        }
    }

    #[test]
    fn truncated_vanishes_on_slater() {
        let t = gamma2_truncated(&slater(6, &[1, 3, 4]).unwrap()).unwrap();
        assert!(t.matrix().iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn truncated_trace() {
        let psi = random_state(6, 3, 1).unwrap();
        let g1 = gamma1(&psi).unwrap();
        let t = gamma2_truncated(&psi).unwrap();
        let tr_g1_sq: f64 = g1.matrix().iter().map(|z| z.norm_sqr()).sum();
        let want = 6.0 - (9.0 - tr_g1_sq);
        assert!((t.trace() - want).abs() < 1e-10);
    }

    #[test]
    fn exchange_examples() {
        assert_eq!(exchange_matrix(1).matrix()[(0, 0)], Complex64::new(1.0, 0.0));
        let ex = exchange_matrix(2);
        for (k, l) in [(0, 0), (1, 1)] {
            let i = pair_index(k, l, 2);
            assert_eq!(ex.get(i, i), Complex64::new(1.0, 0.0));
        }
        assert_eq!(ex.get(pair_index(0, 1, 2), pair_index(1, 0, 2)), Complex64::new(1.0, 0.0));
        let ex6 = exchange_matrix(6);
        let sq = ex6.matrix() * ex6.matrix();
        assert_eq!(sq, CMatrix::identity(36, 36));
    }

    #[test]
    fn not_normalized_is_rejected() {
        let mut psi = random_state(4, 2, 1).unwrap();
        psi.scale(Complex64::new(1.1, 0.0));
        assert!(matches!(gamma1(&psi), Err(Error::NotNormalized(_))));
        assert!(matches!(gamma2(&psi), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn mode_cap() {
        let psi = slater(15, &[0]).unwrap();
        assert!(matches!(gamma2(&psi), Err(Error::DimensionOverflow { .. })));
    }
}
