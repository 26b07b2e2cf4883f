//! State families, the standard test battery, and the per-state certificate
//! suite shared by the CLI and the acceptance tests.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::states::{lowest_slater, near_slater, random_state, slater, yang_pairing};

/// Largest `M` at which the state-independent full-Fock checks join the suite.
pub const OPERATOR_CHECK_MAX_MODES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Slater,
    Pairing,
    Random,
    NearSlater,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Slater,
        Family::Pairing,
        Family::Random,
        Family::NearSlater,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Slater => "slater",
            Family::Pairing => "pairing",
            Family::Random => "random",
            Family::NearSlater => "near_slater",
        }
    }

    pub fn uses_seed(self) -> bool {
        matches!(self, Family::Random | Family::NearSlater)
    }

    pub fn uses_t(self) -> bool {
        self == Family::NearSlater
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slater" => Ok(Family::Slater),
            "pairing" => Ok(Family::Pairing),
            "random" => Ok(Family::Random),
            "near_slater" | "near-slater" => Ok(Family::NearSlater),
            other => Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        }
    }
}

/// Builds a member of a family. Slater and near-Slater states fill modes
/// `0..N`; `seed` and `t` are ignored by families that do not use them.
pub fn build_state(
    family: Family,
    modes: usize,
    particles: usize,
    seed: u64,
    t: f64,
) -> Result<SectorVector> {
    match family {
        Family::Slater => lowest_slater(modes, particles),
        Family::Pairing => yang_pairing(modes, particles),
        Family::Random => random_state(modes, particles, seed),
        Family::NearSlater => near_slater(modes, particles, t, seed),
    }
}

/// A labelled state of the standard battery.
#[derive(Clone, Debug)]
pub struct BatteryState {
    pub family: Family,
    pub seed: Option<u64>,
    pub t: Option<f64>,
    pub state: SectorVector,
}

pub const PAIRING_CASES: [(usize, usize); 4] = [(4, 2), (6, 2), (8, 4), (10, 4)];
pub const NEAR_SLATER_T: [f64; 5] = [0.0, 1e-3, 1e-2, 1e-1, 1.0];
pub const NEAR_SLATER_CASES: [(usize, usize, u64); 4] = [(5, 2, 1), (6, 3, 2), (8, 4, 2), (8, 4, 3)];
pub const RANDOM_STATES: usize = 200;

/// Every Slater state over the mode basis with `M <= max_modes`.
pub fn all_slater_states(max_modes: usize) -> Vec<BatteryState> {
    let mut out = Vec::new();
    for m in 1..=max_modes {
        for bits in 0u32..1 << m {
            let occ: Vec<usize> = (0..m).filter(|k| bits >> k & 1 == 1).collect();
            out.push(BatteryState {
                family: Family::Slater,
                seed: None,
                t: None,
                state: slater(m, &occ).expect("valid occupation"),
            });
        }
    }
    out
}

/// `(M, N)` with `2 <= N <= M <= max_modes`, lexicographic.
pub fn sector_grid(max_modes: usize) -> Vec<(usize, usize)> {
    (2..=max_modes)
        .flat_map(|m| (2..=m).map(move |n| (m, n)))
        .collect()
}

/// `count` random states cycling through [`sector_grid`], seeds `0..count`.
pub fn random_battery(count: usize, max_modes: usize) -> Vec<BatteryState> {
    let grid = sector_grid(max_modes);
    (0..count)
        .map(|i| {
            let (m, n) = grid[i % grid.len()];
            let seed = i as u64;
            BatteryState {
                family: Family::Random,
                seed: Some(seed),
                t: None,
                state: random_state(m, n, seed).expect("valid sector"),
            }
        })
        .collect()
}

pub fn pairing_battery() -> Vec<BatteryState> {
    PAIRING_CASES
        .iter()
        .map(|&(m, n)| BatteryState {
            family: Family::Pairing,
            seed: None,
            t: None,
            state: yang_pairing(m, n).expect("even sector"),
        })
        .collect()
}

pub fn near_slater_battery() -> Vec<BatteryState> {
    let mut out = Vec::new();
    for &(m, n, seed) in &NEAR_SLATER_CASES {
        for &t in &NEAR_SLATER_T {
            out.push(BatteryState {
                family: Family::NearSlater,
                seed: Some(seed),
                t: Some(t),
                state: near_slater(m, n, t, seed).expect("valid sector"),
            });
        }
    }
    out
}

/// Slater states with `M <= 8`, the pairing cases, 200 random states over
/// `2 <= N <= M <= 8`, and the near-Slater sweeps.
pub fn standard_battery() -> Vec<BatteryState> {
    let mut out = all_slater_states(8);
    out.extend(pairing_battery());
    out.extend(random_battery(RANDOM_STATES, 8));
    out.extend(near_slater_battery());
    out
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Seed for the random test objects (tensors, projections, `Phi`).
    pub seed: u64,
    /// Run the full-Fock operator checks when `M <= OPERATOR_CHECK_MAX_MODES`.
    pub operator_checks: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            operator_checks: true,
        }
    }
}

/// Runs every certificate applicable to `psi`.
pub fn certify_state(psi: &SectorVector, opts: &SuiteOptions) -> Result<Vec<CertificateReport>> {
    let m = psi.modes();
    let n = psi.particles();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let phi = DMatrix::from_fn(m, m, |_, _| gaussian(&mut rng));

    let mut out = vec![
        check_trace_identities(psi)?,
        check_quadratic_form(psi, &phi)?,
        check_hs_bound(psi)?,
        check_truncated_bound(psi)?,
        check_op_bounds(psi)?,
    ];
    if n >= 2 {
        out.push(check_entropy_bound(psi)?);
    }
    out.push(check_trace_duality(
        psi,
        &CoefficientTensor4::random(m, opts.seed ^ 0xa5a5),
    )?);
    out.push(check_truncated_pair_identity(psi)?);
    let rank = (m / 2).max(1).min(m);
    out.push(check_bach_bound(
        psi,
        &random_projection(m, rank, opts.seed ^ 0x5a5a)?,
    )?);

    if opts.operator_checks && m <= OPERATOR_CHECK_MAX_MODES {
        let anti = CoefficientTensor4::random_antisymmetric(m, opts.seed ^ 0x1234);
        for mode in 0..m {
            out.push(check_anticommutator_identity(&anti, mode)?);
        }
        out.push(check_anticommutator_sum_bound(
            &CoefficientTensor4::random(m, opts.seed ^ 0x4321),
            n,
        )?);
    }
    Ok(out)
}
