//! N-particle state vectors and the state families used throughout the
//! toolkit: Slater determinants, pairing states, Haar-random states and
//! perturbed Slater states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_basis::{
    apply_annihilation, apply_creation, colex_rank, enumerate_sector, sector_dimension,
    OccupationMask, SectorBasis, DEFAULT_DIM_CAP,
};

/// Tolerance for "normalized" on constructed states.
pub const NORM_TOL: f64 = 1e-12;
/// Largest deviation of `||psi||` from one accepted by RDM routines.
pub const NORM_ACCEPT_TOL: f64 = 1e-8;

/// Amplitudes over the `N`-particle sector, indexed by the rank of each mask
/// in the ascending-mask basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorVector {
    modes: usize,
    particles: usize,
    amps: Vec<Complex64>,
}

impl SectorVector {
    pub fn zeros(modes: usize, particles: usize) -> Result<Self> {
        let dim = sector_dimension(modes, particles, DEFAULT_DIM_CAP)?;
        Ok(Self {
            modes,
            particles,
            amps: vec![Complex64::new(0.0, 0.0); dim],
        })
    }

    pub fn from_amplitudes(modes: usize, particles: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = sector_dimension(modes, particles, DEFAULT_DIM_CAP)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amps.len(),
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(Self {
            modes,
            particles,
            amps,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn basis(&self) -> SectorBasis {
        enumerate_sector(self.modes, self.particles).expect("sector validated at construction")
    }

    /// Amplitude of a basis mask, zero when the mask is outside the sector.
    pub fn amplitude(&self, mask: OccupationMask) -> Complex64 {
        if mask.modes != self.modes || mask.particles() != self.particles {
            return Complex64::new(0.0, 0.0);
        }
        self.amps[colex_rank(mask.bits)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    /// Errors unless `||psi||` is within [`NORM_ACCEPT_TOL`] of one.
    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORM_ACCEPT_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        let inv = 1.0 / n;
        self.amps.iter_mut().for_each(|z| *z *= inv);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &SectorVector) -> Complex64 {
        debug_assert_eq!(self.modes, other.modes);
        debug_assert_eq!(self.particles, other.particles);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: Complex64, other: &SectorVector) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += alpha * b;
        }
    }

    pub fn scale(&mut self, alpha: Complex64) {
        self.amps.iter_mut().for_each(|z| *z *= alpha);
    }

    /// `c_k psi`. `None` when `N = 0`, where the image is the zero vector of
    /// an empty sector.
    pub fn annihilate(&self, k: usize) -> Option<SectorVector> {
        assert!(k < self.modes, "mode {k} out of range for M = {}", self.modes);
        if self.particles == 0 {
            return None;
        }
        let mut out = SectorVector::zeros(self.modes, self.particles - 1).ok()?;
        for (mask, amp) in self.basis().iter().zip(&self.amps) {
            if let Some((sign, image)) = apply_annihilation(k, mask) {
                out.amps[colex_rank(image.bits)] += *amp * sign as f64;
            }
        }
        Some(out)
    }

    /// `c_k* psi`. `None` when `N = M`.
    pub fn create(&self, k: usize) -> Option<SectorVector> {
        assert!(k < self.modes, "mode {k} out of range for M = {}", self.modes);
        if self.particles == self.modes {
            return None;
        }
        let mut out = SectorVector::zeros(self.modes, self.particles + 1).ok()?;
        for (mask, amp) in self.basis().iter().zip(&self.amps) {
            if let Some((sign, image)) = apply_creation(k, mask) {
                out.amps[colex_rank(image.bits)] += *amp * sign as f64;
            }
        }
        Some(out)
    }

    /// `c(f) psi = sum_j conj(f_j) c_j psi` for a mode-space vector `f`.
    pub fn annihilate_vector(&self, f: &[Complex64]) -> Option<SectorVector> {
        assert_eq!(f.len(), self.modes);
        if self.particles == 0 {
            return None;
        }
        let mut out = SectorVector::zeros(self.modes, self.particles - 1).ok()?;
        for (j, fj) in f.iter().enumerate() {
            if *fj != Complex64::new(0.0, 0.0) {
                let part = self.annihilate(j)?;
                out.axpy(fj.conj(), &part);
            }
        }
        Some(out)
    }

    /// `c*(f) psi = sum_j f_j c_j* psi`.
    pub fn create_vector(&self, f: &[Complex64]) -> Option<SectorVector> {
        assert_eq!(f.len(), self.modes);
        if self.particles == self.modes {
            return None;
        }
        let mut out = SectorVector::zeros(self.modes, self.particles + 1).ok()?;
        for (j, fj) in f.iter().enumerate() {
            if *fj != Complex64::new(0.0, 0.0) {
                let part = self.create(j)?;
                out.axpy(*fj, &part);
            }
        }
        Some(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&SectorVectorJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SectorVectorJson = serde_json::from_str(s)?;
        raw.try_into()
    }
}

/// Wire form: `{M, N, basis_order: "mask-ascending", amps: [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct SectorVectorJson {
    #[serde(rename = "M")]
    modes: usize,
    #[serde(rename = "N")]
    particles: usize,
    basis_order: String,
    amps: Vec<[f64; 2]>,
}

const BASIS_ORDER: &str = "mask-ascending";

impl From<&SectorVector> for SectorVectorJson {
    fn from(v: &SectorVector) -> Self {
        Self {
            modes: v.modes,
            particles: v.particles,
            basis_order: BASIS_ORDER.to_string(),
            amps: v.amps.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<SectorVectorJson> for SectorVector {
    type Error = Error;

    fn try_from(raw: SectorVectorJson) -> Result<Self> {
        if raw.basis_order != BASIS_ORDER {
            return Err(Error::InvalidParameter(format!(
                "unsupported basis_order {:?}",
                raw.basis_order
            )));
        }
        let amps = raw
            .amps
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        SectorVector::from_amplitudes(raw.modes, raw.particles, amps)
    }
}

impl Serialize for SectorVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SectorVectorJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SectorVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SectorVectorJson::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}

/// Slater determinant `c*_{i_1} ... c*_{i_N} |0>` with `i_1 < ... < i_N`.
pub fn slater(modes: usize, occupied: &[usize]) -> Result<SectorVector> {
    let mask = OccupationMask::from_modes(occupied, modes)?;
    if mask.particles() != occupied.len() {
        return Err(Error::InvalidParameter(format!(
            "duplicate modes in {occupied:?}"
        )));
    }
    let mut v = SectorVector::zeros(modes, mask.particles())?;
    v.amps[colex_rank(mask.bits)] = Complex64::new(1.0, 0.0);
    Ok(v)
}

/// The Slater state filling modes `0..N`.
pub fn lowest_slater(modes: usize, particles: usize) -> Result<SectorVector> {
    let occ: Vec<usize> = (0..particles).collect();
    slater(modes, &occ)
}

/// Normalized `(b*)^{N/2} |0>` with `b* = sum_j c*_{2j} c*_{2j+1}`.
///
/// Expanding the power gives every union of `N/2` distinct pairs with the
/// same coefficient; each pair `c*_{2j} c*_{2j+1}` is already in ascending
/// order and pairs commute, so every such mask carries sign `+1`.
pub fn yang_pairing(modes: usize, particles: usize) -> Result<SectorVector> {
    if modes % 2 != 0 || particles % 2 != 0 {
        return Err(Error::Parity { modes, particles });
    }
    let mut v = SectorVector::zeros(modes, particles)?;
    let pair_basis = enumerate_sector(modes / 2, particles / 2)?;
    let amp = Complex64::new(1.0 / (pair_basis.len() as f64).sqrt(), 0.0);
    for pairs in pair_basis.iter() {
        let bits = pairs
            .occupied()
            .fold(0u32, |acc, j| acc | 0b11 << (2 * j));
        v.amps[colex_rank(bits)] = amp;
    }
    Ok(v)
}

pub(crate) fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector in the sector: normalized i.i.d. standard complex
/// Gaussians from a ChaCha8 stream seeded with `seed`.
pub fn random_state(modes: usize, particles: usize, seed: u64) -> Result<SectorVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = SectorVector::zeros(modes, particles)?;
    v.amps.iter_mut().for_each(|z| *z = gaussian(&mut rng));
    v.normalized()
}

/// `normalize((1 - t) slater + t random)` where the Slater state fills
/// modes `0..N` and the random part is [`random_state`] with `seed`.
pub fn near_slater(modes: usize, particles: usize, t: f64, seed: u64) -> Result<SectorVector> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("t = {t} outside [0, 1]")));
    }
    let mut v = lowest_slater(modes, particles)?;
    if t == 0.0 {
        return Ok(v);
    }
    let r = random_state(modes, particles, seed)?;
    v.scale(Complex64::new(1.0 - t, 0.0));
    v.axpy(Complex64::new(t, 0.0), &r);
    v.normalized()
}

/// Applies the rotation induced by a unitary `u` on the modes.
pub fn rotate_modes(psi: &SectorVector, u: &nalgebra::DMatrix<Complex64>) -> Result<SectorVector> {
    if u.nrows() != psi.modes {
        return Err(Error::DimensionMismatch {
            expected: psi.modes,
            found: u.nrows(),
        });
    }
    let rep = crate::fock_basis::sector_representation(u, psi.particles)?;
    let x = nalgebra::DVector::from_column_slice(&psi.amps);
    let y = rep * x;
    SectorVector::from_amplitudes(psi.modes, psi.particles, y.as_slice().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn slater_examples() {
        let v = slater(2, &[0, 1]).unwrap();
        assert_eq!(v.amplitudes(), &[c(1.0)]);
        let v = slater(4, &[0, 2]).unwrap();
        let basis = v.basis();
        for (mask, amp) in basis.iter().zip(v.amplitudes()) {
            let want = if mask.bits == 0b0101 { 1.0 } else { 0.0 };
            assert_eq!(*amp, c(want));
        }
        assert!(slater(4, &[1, 1]).is_err());
        assert!(slater(4, &[4]).is_err());
    }

    #[test]
    fn pairing_four_two() {
        let v = yang_pairing(4, 2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        for (mask, amp) in v.basis().iter().zip(v.amplitudes()) {
            let want = if mask.bits == 0b0011 || mask.bits == 0b1100 {
                h
            } else {
                0.0
            };
            assert!((amp - c(want)).norm() < 1e-15);
        }
    }

    #[test]
    fn pairing_eight_four_is_uniform_over_pair_masks() {
        let v = yang_pairing(8, 4).unwrap();
        let nonzero: Vec<_> = v
            .basis()
            .iter()
            .zip(v.amplitudes())
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(m, a)| (m.bits, *a))
            .collect();
        assert_eq!(nonzero.len(), 6);
        for (bits, a) in nonzero {
            for j in 0..4 {
                let pair = bits >> (2 * j) & 0b11;
                assert!(pair == 0 || pair == 0b11);
            }
            assert!((a - c(1.0 / 6f64.sqrt())).norm() < 1e-15);
        }
        assert!(v.is_normalized());
    }

    #[test]
    fn pairing_parity_error() {
        assert!(matches!(yang_pairing(5, 2), Err(Error::Parity { .. })));
        assert!(matches!(yang_pairing(6, 3), Err(Error::Parity { .. })));
    }

    #[test]
    fn pairing_matches_operator_power() {
        // (b*)^{N/2}|0> built by repeated operator application.
        let (m, n) = (6, 4);
        let mut v = SectorVector::from_amplitudes(m, 0, vec![c(1.0)]).unwrap();
        for _ in 0..n / 2 {
            let mut next = SectorVector::zeros(m, v.particles() + 2).unwrap();
            for j in 0..m / 2 {
                if let Some(w) = v.create(2 * j + 1).and_then(|w| w.create(2 * j)) {
                    next.axpy(c(1.0), &w);
                }
            }
            v = next;
        }
        let v = v.normalized().unwrap();
        let want = yang_pairing(m, n).unwrap();
        for (a, b) in v.amplitudes().iter().zip(want.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn random_is_deterministic_and_normalized() {
        let a = random_state(6, 3, 1).unwrap();
        let b = random_state(6, 3, 1).unwrap();
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert_ne!(a, random_state(6, 3, 2).unwrap());
    }

    #[test]
    fn near_slater_endpoints() {
        assert_eq!(near_slater(6, 3, 0.0, 4).unwrap(), lowest_slater(6, 3).unwrap());
        let one = near_slater(6, 3, 1.0, 4).unwrap();
        let r = random_state(6, 3, 4).unwrap();
        for (a, b) in one.amplitudes().iter().zip(r.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!(near_slater(6, 3, 1.5, 4).is_err());
        assert!(near_slater(6, 3, 0.3, 4).unwrap().is_normalized());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let v = random_state(5, 2, 17).unwrap();
        let s = v.to_json().unwrap();
        assert!(s.contains("\"basis_order\":\"mask-ascending\""));
        let back = SectorVector::from_json(&s).unwrap();
        assert_eq!(back, v);
        let bad = s.replace("mask-ascending", "gray");
        assert!(SectorVector::from_json(&bad).is_err());
    }

    #[test]
    fn ladder_edges_are_zero() {
        let vac = SectorVector::from_amplitudes(3, 0, vec![c(1.0)]).unwrap();
        assert!(vac.annihilate(0).is_none());
        let full = slater(3, &[0, 1, 2]).unwrap();
        assert!(full.create(1).is_none());
    }
}
