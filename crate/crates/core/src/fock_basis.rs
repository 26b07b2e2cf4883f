//! Occupation-number basis of the fermionic Fock space over `M` modes.
//!
//! A basis vector is an `M`-bit mask; bit `k` set means mode `k` is occupied.
//! Modes are 0-based. Ladder operators follow the Jordan-Wigner convention:
//! `c_k` and `c_k*` acting on a mask pick up `(-1)^p` where `p` is the number
//! of occupied modes with index strictly below `k`. With this convention
//! `c_0* c_1* ... c_{N-1}* |0>` is the mask `0b1...1` with sign `+1`.
//!
//! Sector bases (fixed particle number) are ordered by increasing integer
//! value of the mask, which for a fixed popcount coincides with colex order,
//! so ranks are given by the combinatorial number system.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest number of modes accepted for sector computations.
pub const MAX_SECTOR_MODES: usize = 30;
/// Largest number of modes for which full Fock-space matrices are built.
pub const MAX_FOCK_MODES: usize = 14;
/// Default cap on the dimension of a single sector.
pub const DEFAULT_DIM_CAP: u64 = 1_000_000;

const BINOM: [[u64; MAX_SECTOR_MODES + 2]; MAX_SECTOR_MODES + 2] = pascal();

const fn pascal() -> [[u64; MAX_SECTOR_MODES + 2]; MAX_SECTOR_MODES + 2] {
    let mut t = [[0u64; MAX_SECTOR_MODES + 2]; MAX_SECTOR_MODES + 2];
    let mut n = 0;
    while n < MAX_SECTOR_MODES + 2 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
            k += 1;
        }
        n += 1;
    }
    t
}

/// `C(n, k)` for `n <= 31`; zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        BINOM[n][k]
    }
}

/// A basis vector of the Fock space over `modes` single-particle modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationMask {
    pub bits: u32,
    pub modes: usize,
}

impl OccupationMask {
    pub fn new(bits: u32, modes: usize) -> Result<Self> {
        if modes > MAX_SECTOR_MODES {
            return Err(Error::InvalidSector {
                modes,
                particles: 0,
                max_modes: MAX_SECTOR_MODES,
            });
        }
        if modes < 32 && bits >> modes != 0 {
            return Err(Error::InvalidParameter(format!(
                "mask {bits:#b} has bits beyond M = {modes}"
            )));
        }
        Ok(Self { bits, modes })
    }

    /// Mask with exactly the given modes occupied.
    pub fn from_modes(occupied: &[usize], modes: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &k in occupied {
            if k >= modes {
                return Err(Error::ModeOutOfRange { mode: k, modes });
            }
            bits |= 1 << k;
        }
        Self::new(bits, modes)
    }

    #[inline]
    pub fn particles(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_occupied(self, k: usize) -> bool {
        self.bits >> k & 1 == 1
    }

    /// Occupied modes in ascending order.
    pub fn occupied(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..self.modes).filter(move |&k| bits >> k & 1 == 1)
    }

    /// Jordan-Wigner parity `(-1)^(occupied modes below k)`.
    #[inline]
    fn parity_below(self, k: usize) -> i8 {
        let below = self.bits & ((1u32 << k) - 1);
        if below.count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// `c_k` applied to a basis mask. `None` stands for the zero vector.
#[inline]
pub fn apply_annihilation(k: usize, mask: OccupationMask) -> Option<(i8, OccupationMask)> {
    debug_assert!(k < mask.modes);
    if !mask.is_occupied(k) {
        return None;
    }
    let sign = mask.parity_below(k);
    Some((
        sign,
        OccupationMask {
            bits: mask.bits & !(1 << k),
            modes: mask.modes,
        },
    ))
}

/// `c_k*` applied to a basis mask. `None` stands for the zero vector.
#[inline]
pub fn apply_creation(k: usize, mask: OccupationMask) -> Option<(i8, OccupationMask)> {
    debug_assert!(k < mask.modes);
    if mask.is_occupied(k) {
        return None;
    }
    let sign = mask.parity_below(k);
    Some((
        sign,
        OccupationMask {
            bits: mask.bits | 1 << k,
            modes: mask.modes,
        },
    ))
}

/// One factor of an operator word: `c_mode*` when `dagger`, else `c_mode`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LadderOp {
    pub dagger: bool,
    pub mode: usize,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        Self { dagger: true, mode }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            dagger: false,
            mode,
        }
    }

    #[inline]
    pub fn apply(self, mask: OccupationMask) -> Option<(i8, OccupationMask)> {
        if self.dagger {
            apply_creation(self.mode, mask)
        } else {
            apply_annihilation(self.mode, mask)
        }
    }
}

/// Applies the product `word[0] word[1] ... word[n-1]` to a mask (rightmost
/// factor first).
pub fn apply_word(word: &[LadderOp], mask: OccupationMask) -> Option<(i8, OccupationMask)> {
    let mut sign = 1i8;
    let mut cur = mask;
    for op in word.iter().rev() {
        let (s, next) = op.apply(cur)?;
        sign *= s;
        cur = next;
    }
    Some((sign, cur))
}

fn check_fock_modes(modes: usize) -> Result<()> {
    if modes > MAX_FOCK_MODES {
        return Err(Error::DimensionOverflow {
            dim: 1u64 << modes.min(63),
            cap: 1u64 << MAX_FOCK_MODES,
        });
    }
    Ok(())
}

/// Dense `2^M x 2^M` matrix of an operator word on the full Fock space,
/// basis ordered by increasing mask value.
pub fn operator_matrix(word: &[LadderOp], modes: usize) -> Result<DMatrix<Complex64>> {
    check_fock_modes(modes)?;
    for op in word {
        if op.mode >= modes {
            return Err(Error::ModeOutOfRange {
                mode: op.mode,
                modes,
            });
        }
    }
    let dim = 1usize << modes;
    let mut out = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mask = OccupationMask {
            bits: col as u32,
            modes,
        };
        if let Some((sign, image)) = apply_word(word, mask) {
            out[(image.bits as usize, col)] = Complex64::new(sign as f64, 0.0);
        }
    }
    Ok(out)
}

/// All masks of fixed particle number, sorted by integer value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorBasis {
    modes: usize,
    particles: usize,
    masks: Vec<u32>,
}

/// Validates `(M, N)` and returns `C(M, N)` when it fits under `cap`.
pub fn sector_dimension(modes: usize, particles: usize, cap: u64) -> Result<usize> {
    if modes > MAX_SECTOR_MODES || particles > modes {
        return Err(Error::InvalidSector {
            modes,
            particles,
            max_modes: MAX_SECTOR_MODES,
        });
    }
    let dim = binomial(modes, particles);
    if dim > cap {
        return Err(Error::DimensionOverflow { dim, cap });
    }
    Ok(dim as usize)
}

/// Enumerates the `N`-particle sector with the default dimension cap.
pub fn enumerate_sector(modes: usize, particles: usize) -> Result<SectorBasis> {
    SectorBasis::with_cap(modes, particles, DEFAULT_DIM_CAP)
}

impl SectorBasis {
    pub fn with_cap(modes: usize, particles: usize, cap: u64) -> Result<Self> {
        let dim = sector_dimension(modes, particles, cap)?;
        let mut masks = Vec::with_capacity(dim);
        if particles == 0 {
            masks.push(0);
        } else {
            // Gosper's hack: next larger integer with the same popcount.
            let limit = 1u64 << modes;
            let mut v: u64 = (1u64 << particles) - 1;
            while v < limit {
                masks.push(v as u32);
                let c = v & v.wrapping_neg();
                let r = v + c;
                v = (((r ^ v) >> 2) / c) | r;
            }
        }
        debug_assert_eq!(masks.len(), dim);
        Ok(Self {
            modes,
            particles,
            masks,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn mask(&self, index: usize) -> OccupationMask {
        OccupationMask {
            bits: self.masks[index],
            modes: self.modes,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = OccupationMask> + '_ {
        let modes = self.modes;
        self.masks
            .iter()
            .map(move |&bits| OccupationMask { bits, modes })
    }

    /// Position of `mask` in this basis, `None` if it is not in the sector.
    pub fn rank(&self, mask: OccupationMask) -> Option<usize> {
        if mask.modes != self.modes || mask.particles() != self.particles {
            return None;
        }
        Some(colex_rank(mask.bits))
    }

    /// Inverse of [`SectorBasis::rank`], computed without the stored list.
    pub fn unrank(&self, index: usize) -> Option<OccupationMask> {
        if index >= self.len() {
            return None;
        }
        Some(OccupationMask {
            bits: colex_unrank(index as u64, self.particles, self.modes),
            modes: self.modes,
        })
    }
}

/// Rank of a mask among masks of equal popcount ordered by value:
/// `sum_i C(p_i, i + 1)` over set bits `p_0 < p_1 < ...`.
#[inline]
pub fn colex_rank(bits: u32) -> usize {
    let mut rank = 0u64;
    let mut rest = bits;
    let mut i = 1;
    while rest != 0 {
        let p = rest.trailing_zeros() as usize;
        rank += binomial(p, i);
        rest &= rest - 1;
        i += 1;
    }
    rank as usize
}

/// Inverse of [`colex_rank`] for `particles` set bits below `modes`.
pub fn colex_unrank(mut rank: u64, particles: usize, modes: usize) -> u32 {
    let mut bits = 0u32;
    let mut upper = modes;
    for i in (1..=particles).rev() {
        let mut p = upper - 1;
        while binomial(p, i) > rank {
            p -= 1;
        }
        bits |= 1 << p;
        rank -= binomial(p, i);
        upper = p;
    }
    bits
}

/// Matrix of the second-quantized rotation induced by a single-particle
/// matrix `u` on the `N`-particle sector: entry `(a, b)` is the minor of `u`
/// with rows from mask `a` and columns from mask `b`.
pub fn sector_representation(u: &DMatrix<Complex64>, particles: usize) -> Result<DMatrix<Complex64>> {
    if u.nrows() != u.ncols() {
        return Err(Error::NotSquare(u.nrows(), u.ncols()));
    }
    let basis = enumerate_sector(u.nrows(), particles)?;
    let dim = basis.len();
    let mut out = DMatrix::zeros(dim, dim);
    let occ: Vec<Vec<usize>> = basis.iter().map(|m| m.occupied().collect()).collect();
    for (a, rows) in occ.iter().enumerate() {
        for (b, cols) in occ.iter().enumerate() {
            out[(a, b)] = if particles == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                DMatrix::from_fn(particles, particles, |i, j| u[(rows[i], cols[j])]).determinant()
            };
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(bits: u32, modes: usize) -> OccupationMask {
        OccupationMask::new(bits, modes).unwrap()
    }

    #[test]
    fn small_sectors() {
        let b = enumerate_sector(2, 1).unwrap();
        assert_eq!(b.masks(), &[0b01, 0b10]);
        let b = enumerate_sector(4, 2).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.masks()[0], 0b0011);
        assert_eq!(*b.masks().last().unwrap(), 0b1100);
        assert_eq!(enumerate_sector(3, 0).unwrap().masks(), &[0]);
        assert_eq!(enumerate_sector(3, 3).unwrap().masks(), &[0b111]);
    }

    #[test]
    fn sector_size_matches_direct_count() {
        let direct = (0u32..256).filter(|b| b.count_ones() == 4).count();
        assert_eq!(direct, 70);
        assert_eq!(enumerate_sector(8, 4).unwrap().len(), direct);
    }

    #[test]
    fn sector_is_sorted_and_ranks_invert() {
        for m in 0..=10 {
            for n in 0..=m {
                let b = enumerate_sector(m, n).unwrap();
                assert!(b.masks().windows(2).all(|w| w[0] < w[1]));
                for (i, mk) in b.iter().enumerate() {
                    assert_eq!(b.rank(mk), Some(i));
                    assert_eq!(b.unrank(i), Some(mk));
                }
                assert_eq!(b.unrank(b.len()), None);
            }
        }
    }

    #[test]
    fn sector_errors() {
        assert!(matches!(
            enumerate_sector(3, 4),
            Err(Error::InvalidSector { .. })
        ));
        assert!(matches!(
            enumerate_sector(31, 1),
            Err(Error::InvalidSector { .. })
        ));
        assert!(matches!(
            enumerate_sector(30, 15),
            Err(Error::DimensionOverflow { .. })
        ));
        assert!(matches!(
            SectorBasis::with_cap(8, 4, 69),
            Err(Error::DimensionOverflow { dim: 70, cap: 69 })
        ));
    }

    #[test]
    fn annihilation_examples() {
        let m = mask(0b011, 3);
        assert_eq!(apply_annihilation(0, m), Some((1, mask(0b010, 3))));
        assert_eq!(apply_annihilation(1, m), Some((-1, mask(0b001, 3))));
        assert_eq!(apply_annihilation(2, m), None);
    }

    #[test]
    fn creation_examples() {
        assert_eq!(
            apply_creation(0, mask(0b010, 3)),
            Some((1, mask(0b011, 3)))
        );
        assert_eq!(apply_creation(1, mask(0b010, 3)), None);
        assert_eq!(
            apply_creation(2, mask(0b011, 3)),
            Some((1, mask(0b111, 3)))
        );
    }

    #[test]
    fn creation_after_annihilation_is_occupation() {
        for bits in 0..16u32 {
            let m = mask(bits, 4);
            for k in 0..4 {
                let got = apply_annihilation(k, m).and_then(|(s1, m1)| {
                    apply_creation(k, m1).map(|(s2, m2)| (s1 * s2, m2))
                });
                if m.is_occupied(k) {
                    assert_eq!(got, Some((1, m)));
                } else {
                    assert_eq!(got, None);
                }
            }
        }
    }

    #[test]
    fn canonical_slater_sign() {
        let word: Vec<_> = (0..4).map(LadderOp::create).collect();
        assert_eq!(apply_word(&word, mask(0, 4)), Some((1, mask(0b1111, 4))));
    }

    #[test]
    fn single_mode_words() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let a = operator_matrix(&[LadderOp::annihilate(0), LadderOp::create(0)], 1).unwrap();
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[one, zero, zero, zero]));
        let n = operator_matrix(&[LadderOp::create(0), LadderOp::annihilate(0)], 1).unwrap();
        assert_eq!(n, DMatrix::from_row_slice(2, 2, &[zero, zero, zero, one]));
    }

    #[test]
    fn fock_cap() {
        assert!(matches!(
            operator_matrix(&[], 15),
            Err(Error::DimensionOverflow { .. })
        ));
        assert!(matches!(
            operator_matrix(&[LadderOp::create(3)], 3),
            Err(Error::ModeOutOfRange { .. })
        ));
    }

    #[test]
    fn sector_representation_of_identity() {
        let id = DMatrix::<Complex64>::identity(5, 5);
        for n in 0..=5 {
            let r = sector_representation(&id, n).unwrap();
            assert_eq!(r, DMatrix::identity(r.nrows(), r.ncols()));
        }
    }
}
