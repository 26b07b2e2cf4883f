//! Sweeps over `(family, M, N, seed, t)` written as CSV.

use fermi_rdm::certificates::suite::{build_state, Family};
use fermi_rdm::certificates::{
    check_entropy_bound, check_hs_bound, check_op_bounds, check_truncated_bound,
};
use fermi_rdm::fock_basis::sector_dimension;
use fermi_rdm::rdm::{gamma1, gamma2, slater_defect, truncate, MAX_RDM_MODES};
use fermi_rdm::spectral::norms;
use fermi_rdm::{Error, Result};
use rayon::prelude::*;

/// Bumped whenever the column set or its meaning changes.
pub const SCHEMA_VERSION: u32 = 1;

pub const HEADER: [&str; 17] = [
    "schema_version",
    "family",
    "M",
    "N",
    "seed",
    "t",
    "hs_gamma2",
    "op_gamma2",
    "tr_gamma2",
    "hs_gamma2T",
    "tr_g1_1mg1",
    "entropy",
    "margin_hs_bound",
    "margin_truncated_hs_bound",
    "margin_op_bounds",
    "margin_entropy_bound",
    "all_pass",
];

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub families: Vec<Family>,
    pub modes: Vec<usize>,
    /// `None` means every `N` in `0..=M`.
    pub particles: Option<Vec<usize>>,
    pub seeds: Vec<u64>,
    pub t_values: Vec<f64>,
    pub cap_dim: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowKey {
    pub family: Family,
    pub modes: usize,
    pub particles: usize,
    pub seed: Option<u64>,
    pub t: Option<f64>,
}

impl SweepSpec {
    /// Rows in lexicographic order of `(family, M, N, seed, t)`. Pairing
    /// rows with odd `M` or `N` are skipped.
    pub fn rows(&self) -> Result<Vec<RowKey>> {
        if self.families.is_empty() {
            return Err(Error::InvalidParameter("no families selected".into()));
        }
        let mut families = self.families.clone();
        families.sort();
        families.dedup();
        let mut modes = self.modes.clone();
        modes.sort_unstable();
        modes.dedup();
        let mut seeds = self.seeds.clone();
        seeds.sort_unstable();
        seeds.dedup();
        let mut t_values = self.t_values.clone();
        t_values.sort_by(f64::total_cmp);
        t_values.dedup();
        let mut out = Vec::new();
        for &family in &families {
            for &m in &modes {
                if m > MAX_RDM_MODES {
                    return Err(Error::InvalidParameter(format!(
                        "M = {m} exceeds the limit {MAX_RDM_MODES}"
                    )));
                }
                let ns: Vec<usize> = match &self.particles {
                    Some(ns) => {
                        let mut ns: Vec<usize> = ns.iter().copied().filter(|&n| n <= m).collect();
                        ns.sort_unstable();
                        ns.dedup();
                        ns
                    }
                    None => (0..=m).collect(),
                };
                for n in ns {
                    if family == Family::Pairing && (m % 2 != 0 || n % 2 != 0) {
                        continue;
                    }
                    sector_dimension(m, n, self.cap_dim)?;
                    let seeds: Vec<Option<u64>> = if family.uses_seed() {
                        seeds.iter().copied().map(Some).collect()
                    } else {
                        vec![None]
                    };
                    for seed in seeds {
                        let ts: Vec<Option<f64>> = if family.uses_t() {
                            t_values.iter().copied().map(Some).collect()
                        } else {
                            vec![None]
                        };
                        for t in ts {
                            out.push(RowKey {
                                family,
                                modes: m,
                                particles: n,
                                seed,
                                t,
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// 17 significant digits, enough to round-trip any `f64`. Negative zero
/// prints as zero.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn compute_row(key: &RowKey) -> Result<Vec<String>> {
    let psi = build_state(
        key.family,
        key.modes,
        key.particles,
        key.seed.unwrap_or(0),
        key.t.unwrap_or(0.0),
    )?;
    let g1 = gamma1(&psi)?;
    let g2 = gamma2(&psi)?;
    let n2 = norms(&g2)?;
    let truncated = truncate(&g1, &g2)?;

    let hs = check_hs_bound(&psi)?;
    let tr = check_truncated_bound(&psi)?;
    let op = check_op_bounds(&psi)?;
    let ent = if key.particles >= 2 {
        Some(check_entropy_bound(&psi)?)
    } else {
        None
    };
    let all_pass = hs.pass && tr.pass && op.pass && ent.as_ref().is_none_or(|r| r.pass);

    Ok(vec![
        SCHEMA_VERSION.to_string(),
        key.family.to_string(),
        key.modes.to_string(),
        key.particles.to_string(),
        opt(key.seed),
        key.t.map(fmt_f64).unwrap_or_default(),
        fmt_f64(n2.hs),
        fmt_f64(n2.op),
        fmt_f64(g2.trace()),
        fmt_f64(truncated.frobenius_norm()),
        fmt_f64(slater_defect(&g1)),
        ent.as_ref()
            .map(|r| fmt_f64(r.context["entropy"]))
            .unwrap_or_default(),
        fmt_f64(hs.margin),
        fmt_f64(tr.margin),
        fmt_f64(op.margin),
        ent.as_ref().map(|r| fmt_f64(r.margin)).unwrap_or_default(),
        all_pass.to_string(),
    ])
}

/// All rows, computed on `threads` workers and returned in row order.
pub fn run(spec: &SweepSpec, threads: usize) -> Result<Vec<Vec<String>>> {
    let keys = spec.rows()?;
    if threads <= 1 {
        return keys.iter().map(compute_row).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    pool.install(|| keys.par_iter().map(compute_row).collect())
}

pub fn write_csv<W: std::io::Write>(out: W, rows: &[Vec<String>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
