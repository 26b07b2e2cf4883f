//! Projected gradient ascent of `||gamma2||_HS^2` over the unit sphere of
//! the `N`-particle sector.
//!
//! With `v_a = c_l c_k psi` for pairs `a = (k, l)`, `k < l`, and the Gram
//! matrix `G_ab = <v_b, v_a>`, the objective is the quartic
//! `f(psi) = 4 sum_ab |G_ab|^2`, and its real gradient (packed as
//! `df/dRe + i df/dIm`) is `16 sum_b L_b^dagger (sum_a G_ba v_a)` with
//! `L_b = c_l c_k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_basis::sector_dimension;
use crate::fock_basis::DEFAULT_DIM_CAP;
use crate::rdm::{pair_gram, pair_vectors, MAX_RDM_MODES};
use crate::states::{lowest_slater, random_state, yang_pairing, SectorVector};

/// Allowed excess of any optimum over `sqrt(5) N` before the run is
/// reported as a counterexample.
pub const HS_BOUND_SLACK: f64 = 1e-6;
/// Halvings tried per iteration before the ascent is declared stalled.
const MAX_HALVINGS: usize = 60;
/// Relative change of `f` treated as rounding noise. Close to the optimum
/// the true increase of a step drops below this, and such steps are judged
/// by whether they shrink the projected gradient instead.
const NOISE_FLOOR: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    pub step_size: f64,
    pub tol_grad: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            step_size: 0.1,
            tol_grad: 1e-8,
            restarts: 8,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "step_size must be positive (got {})",
                self.step_size
            )));
        }
        if !(self.tol_grad > 0.0 && self.tol_grad.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tol_grad must be positive (got {})",
                self.tol_grad
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub start: String,
    pub value: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    #[serde(rename = "M")]
    pub modes: usize,
    #[serde(rename = "N")]
    pub particles: usize,
    /// `||gamma2||_HS` at the best state found.
    pub best_value: f64,
    pub best_value_over_n: f64,
    pub sqrt5_n: f64,
    pub slater_value: f64,
    pub best_start: String,
    pub best_state: SectorVector,
    /// `(iteration, ||gamma2||_HS)` along the best run.
    pub trajectory: Vec<(usize, f64)>,
    pub converged: bool,
    pub runs: Vec<RunSummary>,
    pub config: OptimizerConfig,
}

/// `||gamma2||_HS^2` without the normalization check (homogeneous of
/// degree four in the amplitudes).
pub fn hs_squared_unchecked(psi: &SectorVector) -> f64 {
    let pairs = pair_vectors(psi);
    let gram = pair_gram(&pairs);
    4.0 * gram
        .iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
}

fn check_modes(psi: &SectorVector) -> Result<()> {
    if psi.modes() > MAX_RDM_MODES {
        return Err(Error::DimensionOverflow {
            dim: (psi.modes() * psi.modes()) as u64,
            cap: (MAX_RDM_MODES * MAX_RDM_MODES) as u64,
        });
    }
    Ok(())
}

/// `||gamma2||_HS^2` of a normalized state.
pub fn objective(psi: &SectorVector) -> Result<f64> {
    check_modes(psi)?;
    psi.ensure_normalized()?;
    Ok(hs_squared_unchecked(psi))
}

/// Real gradient of [`hs_squared_unchecked`] with respect to the amplitudes,
/// entry `j` being `df/dRe(psi_j) + i df/dIm(psi_j)`.
pub fn gradient(psi: &SectorVector) -> Result<Vec<Complex64>> {
    check_modes(psi)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; psi.dim()];
    if psi.particles() < 2 {
        return Ok(out);
    }
    let pairs = pair_vectors(psi);
    let gram = pair_gram(&pairs);
    let lower = psi.particles() - 2;
    for (b, pb) in pairs.iter().enumerate() {
        let mut w = SectorVector::zeros(psi.modes(), lower)?;
        for (a, pa) in pairs.iter().enumerate() {
            w.axpy(gram[b][a], &pa.vector);
        }
        // L_b^dagger = c_k* c_l*
        let lifted = w
            .create(pb.l)
            .and_then(|x| x.create(pb.k))
            .expect("N - 2 < M");
        for (o, x) in out.iter_mut().zip(lifted.amplitudes()) {
            *o += 16.0 * x;
        }
    }
    Ok(out)
}

/// Tangential part `g - Re<psi, g> psi` of a gradient at a unit vector.
fn project_tangent(psi: &SectorVector, g: &[Complex64]) -> Vec<Complex64> {
    let radial: f64 = psi
        .amplitudes()
        .iter()
        .zip(g)
        .map(|(p, x)| (p.conj() * x).re)
        .sum();
    g.iter()
        .zip(psi.amplitudes())
        .map(|(x, p)| x - p * radial)
        .collect()
}

/// Outcome of a single ascent.
#[derive(Clone, Debug)]
pub struct Ascent {
    pub state: SectorVector,
    /// Final `||gamma2||_HS^2`.
    pub value_sq: f64,
    pub trajectory: Vec<(usize, f64)>,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
}

/// One projected gradient ascent from `init`. `observe` sees every accepted
/// iterate, starting with the normalized initial state at iteration 0.
pub fn ascend(
    init: SectorVector,
    cfg: &OptimizerConfig,
    mut observe: impl FnMut(usize, &SectorVector),
) -> Result<Ascent> {
    cfg.validate()?;
    check_modes(&init)?;
    let mut psi = init.normalized()?;
    observe(0, &psi);
    let mut f = hs_squared_unchecked(&psi);
    let mut trajectory = vec![(0, f.sqrt())];
    let mut rg = tangent_gradient(&psi)?;
    let mut grad_norm = l2(&rg);
    let mut converged = grad_norm < cfg.tol_grad;
    let mut iterations = 0;
    while !converged && iterations < cfg.max_iters {
        let noise = NOISE_FLOOR * f.max(1.0);
        let mut step = cfg.step_size;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let amps: Vec<Complex64> = psi
                .amplitudes()
                .iter()
                .zip(&rg)
                .map(|(p, d)| p + d * step)
                .collect();
            let cand =
                SectorVector::from_amplitudes(psi.modes(), psi.particles(), amps)?.normalized()?;
            let fc = hs_squared_unchecked(&cand);
            if fc > f + noise {
                accepted = Some((cand, fc, None));
                break;
            }
            if fc >= f - noise {
                // the value cannot tell; ask the gradient instead
                let rc = tangent_gradient(&cand)?;
                if l2(&rc) < grad_norm {
                    accepted = Some((cand, fc, Some(rc)));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((cand, fc, rc)) = accepted else {
            break;
        };
        iterations += 1;
        rg = match rc {
            Some(rc) => rc,
            None => tangent_gradient(&cand)?,
        };
        psi = cand;
        f = fc;
        grad_norm = l2(&rg);
        converged = grad_norm < cfg.tol_grad;
        observe(iterations, &psi);
        trajectory.push((iterations, f.sqrt()));
    }
    Ok(Ascent {
        state: psi,
        value_sq: f,
        trajectory,
        iterations,
        grad_norm,
        converged,
    })
}

fn tangent_gradient(psi: &SectorVector) -> Result<Vec<Complex64>> {
    Ok(project_tangent(psi, &gradient(psi)?))
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn starting_points(
    modes: usize,
    particles: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<(String, SectorVector)>> {
    let mut starts = Vec::with_capacity(cfg.restarts + 2);
    for i in 0..cfg.restarts {
        let seed = cfg.seed.wrapping_add(i as u64);
        starts.push((
            format!("random:{seed}"),
            random_state(modes, particles, seed)?,
        ));
    }
    starts.push(("slater".to_string(), lowest_slater(modes, particles)?));
    if modes % 2 == 0 && particles % 2 == 0 {
        starts.push(("pairing".to_string(), yang_pairing(modes, particles)?));
    }
    Ok(starts)
}

/// Runs the ascent from every starting point and keeps the best.
pub fn maximize(modes: usize, particles: usize, cfg: &OptimizerConfig) -> Result<ExtremalResult> {
    maximize_with_threads(modes, particles, cfg, 1)
}

/// As [`maximize`], spreading the independent runs over `threads` workers.
/// The result does not depend on `threads`.
pub fn maximize_with_threads(
    modes: usize,
    particles: usize,
    cfg: &OptimizerConfig,
    threads: usize,
) -> Result<ExtremalResult> {
    cfg.validate()?;
    sector_dimension(modes, particles, DEFAULT_DIM_CAP)?;
    if modes > MAX_RDM_MODES {
        return Err(Error::DimensionOverflow {
            dim: (modes * modes) as u64,
            cap: (MAX_RDM_MODES * MAX_RDM_MODES) as u64,
        });
    }
    let starts = starting_points(modes, particles, cfg)?;
    let run_one = |label: &String, init: &SectorVector| {
        ascend(init.clone(), cfg, |_, _| {}).map(|a| (label.clone(), a))
    };
    let runs: Vec<(String, Ascent)> = if threads <= 1 {
        starts
            .iter()
            .map(|(label, init)| run_one(label, init))
            .collect::<Result<_>>()?
    } else {
        let chunk = starts.len().div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = starts
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|(label, init)| run_one(label, init))
                            .collect::<Result<Vec<_>>>()
                    })
                })
                .collect();
            let mut all = Vec::new();
            for h in handles {
                all.extend(h.join().expect("ascent worker panicked")?);
            }
            Ok::<_, Error>(all)
        })?
    };

    // Highest value wins; ties go to the earlier starting point.
    let best = runs
        .iter()
        .enumerate()
        .max_by(|(i, (_, a)), (j, (_, b))| a.value_sq.total_cmp(&b.value_sq).then(j.cmp(i)))
        .map(|(i, _)| i)
        .expect("at least the Slater start");

    let n = particles as f64;
    let sqrt5_n = 5f64.sqrt() * n;
    let summaries = runs
        .iter()
        .map(|(start, r)| RunSummary {
            start: start.clone(),
            value: r.value_sq.sqrt(),
            iterations: r.iterations,
            grad_norm: r.grad_norm,
            converged: r.converged,
        })
        .collect();
    let (best_start, run) = &runs[best];
    let best_value = run.value_sq.sqrt();
    let result = ExtremalResult {
        modes,
        particles,
        best_value,
        best_value_over_n: if n > 0.0 { best_value / n } else { 0.0 },
        sqrt5_n,
        slater_value: (2.0 * n * (n - 1.0)).max(0.0).sqrt(),
        best_start: best_start.clone(),
        best_state: run.state.clone(),
        trajectory: run.trajectory.clone(),
        converged: run.converged,
        runs: summaries,
        config: cfg.clone(),
    };
    if best_value > sqrt5_n + HS_BOUND_SLACK {
        return Err(Error::HsBoundExceeded(Box::new(result)));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::slater;

    #[test]
    fn objective_examples() {
        assert!((objective(&slater(4, &[0, 1]).unwrap()).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(objective(&random_state(5, 1, 1).unwrap()).unwrap(), 0.0);
        let mut psi = random_state(4, 2, 1).unwrap();
        psi.scale(Complex64::new(2.0, 0.0));
        assert!(objective(&psi).is_err());
    }

    #[test]
    fn objective_matches_gamma2() {
        let psi = random_state(6, 3, 4).unwrap();
        let hs = crate::rdm::gamma2(&psi).unwrap().frobenius_norm();
        assert!((objective(&psi).unwrap() - hs * hs).abs() < 1e-10);
    }

    #[test]
    fn euler_identity() {
        // f is homogeneous of degree 4, so Re<psi, grad f> = 4 f.
        let psi = random_state(6, 3, 2).unwrap();
        let g = gradient(&psi).unwrap();
        let radial: f64 = psi
            .amplitudes()
            .iter()
            .zip(&g)
            .map(|(p, x)| (p.conj() * x).re)
            .sum();
        assert!((radial - 4.0 * objective(&psi).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig {
            step_size: 0.0,
            ..Default::default()
        };
        assert!(maximize(4, 2, &bad).is_err());
        let bad = OptimizerConfig {
            tol_grad: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let cfg = OptimizerConfig {
            max_iters: 50,
            restarts: 3,
            seed: 5,
            ..Default::default()
        };
        let a = maximize(5, 2, &cfg).unwrap();
        let b = maximize_with_threads(5, 2, &cfg, 3).unwrap();
        assert_eq!(a, b);
    }
}
