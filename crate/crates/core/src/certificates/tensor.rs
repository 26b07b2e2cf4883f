use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hermitian::CMatrix;
use crate::rdm::pair_index;
use crate::states::gaussian;

/// Coefficients `A_{k,l,m,n} = <u_k (x) u_l, A (u_m (x) u_n)>` stored as an
/// `M^2 x M^2` matrix with row `(k, l)` and column `(m, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTensor4 {
    modes: usize,
    entries: CMatrix,
    antisymmetrized: bool,
}

impl CoefficientTensor4 {
    pub fn zeros(modes: usize) -> Self {
        Self::from_matrix(modes, CMatrix::zeros(modes * modes, modes * modes))
            .expect("shape is consistent")
    }

    pub fn from_matrix(modes: usize, entries: CMatrix) -> Result<Self> {
        let d = modes * modes;
        if entries.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: entries.nrows(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite tensor entry".into()));
        }
        let antisymmetrized = is_antisymmetric(modes, &entries);
        Ok(Self {
            modes,
            entries,
            antisymmetrized,
        })
    }

    /// Entries are i.i.d. standard complex Gaussians.
    pub fn random(modes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = modes * modes;
        let entries = CMatrix::from_fn(d, d, |_, _| gaussian(&mut rng));
        Self::from_matrix(modes, entries).expect("finite by construction")
    }

    /// Random tensor made antisymmetric in its first index pair.
    pub fn random_antisymmetric(modes: usize, seed: u64) -> Self {
        antisymmetrize(&Self::random(modes, seed))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    /// True iff `A_{l,k,m,n} = -A_{k,l,m,n}` holds exactly.
    pub fn is_antisymmetrized(&self) -> bool {
        self.antisymmetrized
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize, m: usize, n: usize) -> Complex64 {
        self.entries[(pair_index(k, l, self.modes), pair_index(m, n, self.modes))]
    }

    pub fn hs_norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_norm_sqr().sqrt()
    }
}

fn is_antisymmetric(modes: usize, entries: &CMatrix) -> bool {
    for k in 0..modes {
        for l in 0..modes {
            let (a, b) = (pair_index(k, l, modes), pair_index(l, k, modes));
            for col in 0..modes * modes {
                if entries[(b, col)] != -entries[(a, col)] {
                    return false;
                }
            }
        }
    }
    true
}

/// `(A_{k,l,m,n} - A_{l,k,m,n}) / 2`. The ladder sum
/// `sum conj(A_{k,l,m,n}) c_m* c_l c_k` is unchanged by this replacement.
pub fn antisymmetrize(a: &CoefficientTensor4) -> CoefficientTensor4 {
    let m = a.modes;
    let d = m * m;
    let mut out = CMatrix::zeros(d, d);
    let mut diff_sq = 0.0;
    for k in 0..m {
        for l in 0..m {
            let (r, s) = (pair_index(k, l, m), pair_index(l, k, m));
            for col in 0..d {
                let diff = a.entries[(r, col)] - a.entries[(s, col)];
                diff_sq += diff.norm_sqr();
                out[(r, col)] = diff * 0.5;
            }
        }
    }
    let input_sq = a.hs_norm_sqr();
    assert!(
        diff_sq <= 4.0 * input_sq * (1.0 + 1e-12),
        "antisymmetrization grew the HS norm: {diff_sq} > 4 * {input_sq}"
    );
    CoefficientTensor4::from_matrix(m, out).expect("finite by construction")
}
