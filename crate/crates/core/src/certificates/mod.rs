//! One checker per identity or inequality satisfied by the reduced density
//! matrices. Each returns a [`CertificateReport`].
//!
//! Conventions for reports:
//! - inequalities are stated as `lhs <= rhs`, `margin = rhs - lhs`;
//! - identities report `lhs` = max deviation, `rhs = 0`, `margin = -lhs`;
//! - checks that test two conditions at once report the smaller slack as
//!   `margin` and list both in the context;
//! - `pass` iff `margin >= -tolerance`, the tolerance being stored under
//!   `"tolerance"` in the context.

mod fock_ops;
mod tensor;

pub mod suite;

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use fock_ops::{
    anticommutator_expansion, anticommutator_sum, anticommutator_with_adjoint, cubic_operator,
    restrict_to_sector, MAX_FULL_FOCK_MODES,
};
pub use tensor::{antisymmetrize, CoefficientTensor4};

use crate::error::{Error, Result};
use crate::hermitian::{hermitian_deviation, max_abs_diff, CMatrix, HermitianMatrix};
use crate::rdm::{gamma1, gamma2, pair_vectors, slater_defect, truncate};
use crate::spectral::{eig_hermitian, entropy_of_spectrum, norms};
use crate::states::{gaussian, SectorVector};

/// Tolerance for comparisons that go through an eigensolver.
pub const SCALAR_TOL: f64 = 1e-8;
/// Tolerance for identities that only involve matrix assembly.
pub const MATRIX_TOL: f64 = 1e-10;
/// Constant in the projected lower bound on the truncated two-body matrix.
pub const BACH_CONSTANT: f64 = 7.554;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    pub context: BTreeMap<String, f64>,
}

impl CertificateReport {
    /// `lhs <= rhs` up to `tol`.
    pub fn inequality(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::with_margin(name, lhs, rhs, rhs - lhs, tol)
    }

    /// An identity whose largest violation is `deviation`.
    pub fn identity(name: &str, deviation: f64, tol: f64) -> Self {
        Self::with_margin(name, deviation, 0.0, -deviation, tol)
    }

    fn with_margin(name: &str, lhs: f64, rhs: f64, margin: f64, tol: f64) -> Self {
        let mut context = BTreeMap::new();
        context.insert("tolerance".to_string(), tol);
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            margin,
            // NaN anywhere fails the check.
            pass: margin >= -tol,
            context,
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.context.insert(key.to_string(), value);
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.context.get("tolerance").copied().unwrap_or(0.0)
    }

    fn with_state(self, psi: &SectorVector) -> Self {
        self.with("M", psi.modes() as f64)
            .with("N", psi.particles() as f64)
    }

    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn n_f64(psi: &SectorVector) -> f64 {
    psi.particles() as f64
}

/// `tr(gamma1) = N` and `tr(gamma2) = N(N-1)`.
pub fn check_trace_identities(psi: &SectorVector) -> Result<CertificateReport> {
    let n = n_f64(psi);
    let t1 = gamma1(psi)?.trace();
    let t2 = gamma2(psi)?.trace();
    let dev = (t1 - n).abs().max((t2 - n * (n - 1.0)).abs());
    Ok(CertificateReport::identity("trace_identities", dev, MATRIX_TOL)
        .with_state(psi)
        .with("tr_gamma1", t1)
        .with("tr_gamma2", t2))
}

/// `<Phi, gamma2 Phi> = || sum_{k,l} Phi_{k,l} c_l c_k psi ||^2` for the
/// coefficient matrix `phi` (`phi[(k, l)] = Phi_{k,l}`), compared relative
/// to `max(1, |rhs|)`.
pub fn check_quadratic_form(psi: &SectorVector, phi: &CMatrix) -> Result<CertificateReport> {
    let m = psi.modes();
    if phi.shape() != (m, m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: phi.nrows(),
        });
    }
    let g2 = gamma2(psi)?;
    // Phi as a vector of h (x) h has components conj(Phi_{k,l}).
    let x = DVector::from_fn(m * m, |i, _| phi[(i / m, i % m)].conj());
    let form = (x.adjoint() * g2.matrix() * &x)[(0, 0)];

    let mut direct = 0.0;
    if psi.particles() >= 2 {
        let pairs = pair_vectors(psi);
        let mut acc = SectorVector::zeros(m, psi.particles() - 2)?;
        for p in &pairs {
            // v_lk = -v_kl
            let coeff = phi[(p.k, p.l)] - phi[(p.l, p.k)];
            acc.axpy(coeff, &p.vector);
        }
        direct = acc.norm_sqr();
    }
    let dev = (form - Complex64::new(direct, 0.0)).norm() / direct.abs().max(1.0);
    Ok(CertificateReport::identity("quadratic_form", dev, MATRIX_TOL)
        .with_state(psi)
        .with("form", form.re)
        .with("direct", direct))
}

/// `||gamma2||_HS <= sqrt(5) N`.
pub fn check_hs_bound(psi: &SectorVector) -> Result<CertificateReport> {
    let n = n_f64(psi);
    let hs = norms(&gamma2(psi)?)?.hs;
    let rhs = 5f64.sqrt() * n;
    Ok(CertificateReport::inequality("hs_bound", hs, rhs, SCALAR_TOL)
        .with_state(psi)
        .with("hs_over_n", if n > 0.0 { hs / n } else { 0.0 })
        .with("slater_value", (2.0 * n * (n - 1.0)).max(0.0).sqrt()))
}

/// `||gamma2^T||_HS <= sqrt(5 N tr(gamma1 (1 - gamma1)))`.
pub fn check_truncated_bound(psi: &SectorVector) -> Result<CertificateReport> {
    let n = n_f64(psi);
    let g1 = gamma1(psi)?;
    let t = truncate(&g1, &gamma2(psi)?)?;
    let defect = slater_defect(&g1);
    let lhs = norms(&t)?.hs;
    let rhs = (5.0 * n * defect.max(0.0)).sqrt();
    Ok(
        CertificateReport::inequality("truncated_hs_bound", lhs, rhs, SCALAR_TOL)
            .with_state(psi)
            .with("tr_g1_1mg1", defect),
    )
}

/// Pairing-state value `N (M - N + 2) / M` of `||gamma2||_op` for even `M`, `N`.
pub fn yang_value(modes: usize, particles: usize) -> Option<f64> {
    if modes == 0 || modes % 2 != 0 || particles % 2 != 0 {
        return None;
    }
    let (m, n) = (modes as f64, particles as f64);
    Some(n * (m - n + 2.0) / m)
}

/// `||gamma1||_op <= 1` and `||gamma2||_op <= N`; for even `M`, `N` the
/// pairing value and its gap to this state are reported as context.
pub fn check_op_bounds(psi: &SectorVector) -> Result<CertificateReport> {
    let n = n_f64(psi);
    let op1 = norms(&gamma1(psi)?)?.op;
    let op2 = norms(&gamma2(psi)?)?.op;
    let slack2 = n - op2;
    let slack1 = 1.0 - op1;
    let margin = slack2.min(slack1);
    let mut r = CertificateReport::with_margin("op_bounds", op2, n, margin, SCALAR_TOL)
        .with_state(psi)
        .with("gamma1_op", op1)
        .with("gamma2_op", op2)
        .with("gamma1_margin", slack1)
        .with("gamma2_margin", slack2);
    if let Some(y) = yang_value(psi.modes(), psi.particles()) {
        r = r.with("yang_value", y).with("yang_gap", y - op2);
    }
    Ok(r)
}

/// `2 log N - log(5 (1 + (2N - 1)/(N - 1)^2))` for `N >= 2`.
pub fn entropy_lower_bound(particles: usize) -> f64 {
    let n = particles as f64;
    2.0 * n.ln() - (5.0 * (1.0 + (2.0 * n - 1.0) / ((n - 1.0) * (n - 1.0)))).ln()
}

/// Entropy of `gamma2 / (N (N - 1))` against the bound above, plus the
/// Jensen step `S >= -log tr(gbar^2)`.
pub fn check_entropy_bound(psi: &SectorVector) -> Result<CertificateReport> {
    let np = psi.particles();
    if np < 2 {
        return Err(Error::InvalidParameter(format!(
            "entropy bound needs N >= 2 (got N = {np})"
        )));
    }
    let n = np as f64;
    let normalized = gamma2(psi)?.scaled(1.0 / (n * (n - 1.0)));
    let spectrum = eig_hermitian(&normalized)?;
    let s = entropy_of_spectrum(&spectrum);
    let hs_sq: f64 = spectrum.eigenvalues.iter().map(|v| v * v).sum();
    let jensen = -hs_sq.ln();
    let bound = entropy_lower_bound(np);
    let margin = (s - bound).min(s - jensen);
    Ok(
        CertificateReport::with_margin("entropy_bound", bound, s, margin, SCALAR_TOL)
            .with_state(psi)
            .with("entropy", s)
            .with("jensen_bound", jensen)
            .with("bound_margin", s - bound)
            .with("jensen_margin", s - jensen),
    )
}

/// `{B_n^dagger, B_n}` equals its three-term expansion for antisymmetric `A`.
pub fn check_anticommutator_identity(
    a: &CoefficientTensor4,
    n: usize,
) -> Result<CertificateReport> {
    let m = a.modes();
    fock_ops::check_modes(m)?;
    if !a.is_antisymmetrized() {
        return Err(Error::InvalidParameter(
            "anticommutator identity needs A antisymmetric in (k, l)".into(),
        ));
    }
    if n >= m {
        return Err(Error::ModeOutOfRange { mode: n, modes: m });
    }
    let lhs = anticommutator_with_adjoint(&cubic_operator(a, n));
    let rhs = anticommutator_expansion(a, n);
    let dev = max_abs_diff(&lhs, &rhs);
    Ok(
        CertificateReport::identity("anticommutator_identity", dev, MATRIX_TOL)
            .with("M", m as f64)
            .with("n", n as f64)
            .with("scale", crate::hermitian::max_abs(&lhs)),
    )
}

/// `lambda_max` of `sum_n {B_n^dagger, B_n}` on the `N`-particle sector is at
/// most `5 N ||A||_HS^2`, for arbitrary `A`. The full-Fock `lambda_max` is
/// recorded as context only.
pub fn check_anticommutator_sum_bound(
    a: &CoefficientTensor4,
    particles: usize,
) -> Result<CertificateReport> {
    let m = a.modes();
    fock_ops::check_modes(m)?;
    if particles > m {
        return Err(Error::InvalidSector {
            modes: m,
            particles,
            max_modes: MAX_FULL_FOCK_MODES,
        });
    }
    let full = anticommutator_sum(a);
    let sector = HermitianMatrix::new(restrict_to_sector(&full, m, particles))?;
    let lam = eig_hermitian(&sector)?.max();
    let lam_full = eig_hermitian(&HermitianMatrix::new(full)?)?.max();
    let hs_sq = a.hs_norm_sqr();
    let rhs = 5.0 * particles as f64 * hs_sq;
    Ok(
        CertificateReport::inequality("anticommutator_sum_bound", lam, rhs, SCALAR_TOL)
            .with("M", m as f64)
            .with("N", particles as f64)
            .with("ratio", if rhs > 0.0 { lam / rhs } else { 0.0 })
            .with("full_fock_lambda_max", lam_full)
            .with("a_hs_sqr", hs_sq),
    )
}

/// `tr(A gamma2)` computed as a matrix trace and as
/// `-sum_n <B_n psi, c_n psi>`; the two must agree, and `|tr(A gamma2)|` is
/// compared to `sqrt(5) N ||A||_HS`.
pub fn check_trace_duality(
    psi: &SectorVector,
    a: &CoefficientTensor4,
) -> Result<CertificateReport> {
    let m = psi.modes();
    if a.modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: a.modes(),
        });
    }
    let g2 = gamma2(psi)?;
    let via_matrix = (a.matrix() * g2.matrix()).trace();
    let via_ladders = trace_via_ladders(psi, a);
    let dev = (via_matrix - via_ladders).norm();
    let lhs = via_matrix.norm();
    let rhs = 5f64.sqrt() * n_f64(psi) * a.hs_norm();
    let slack = rhs - lhs;
    let agree = MATRIX_TOL - dev;
    // both conditions must hold; each is measured against its own tolerance
    let margin = if agree < 0.0 { agree - SCALAR_TOL } else { slack };
    Ok(
        CertificateReport::with_margin("trace_duality", lhs, rhs, margin, SCALAR_TOL)
            .with_state(psi)
            .with("trace_re", via_matrix.re)
            .with("trace_im", via_matrix.im)
            .with("route_deviation", dev)
            .with("route_tolerance", MATRIX_TOL),
    )
}

/// `-sum_n <sum_{k,l,m} conj(A_{klmn}) c_m* c_l c_k psi, c_n psi>`.
fn trace_via_ladders(psi: &SectorVector, a: &CoefficientTensor4) -> Complex64 {
    let m = psi.modes();
    let zero = Complex64::new(0.0, 0.0);
    if psi.particles() < 2 {
        return zero;
    }
    let pairs = pair_vectors(psi);
    // c_m* v_kl for k < l; the (l, k) terms enter with a minus sign.
    let raised: Vec<Vec<Option<SectorVector>>> = pairs
        .iter()
        .map(|p| (0..m).map(|mm| p.vector.create(mm)).collect())
        .collect();
    let mut total = zero;
    for n in 0..m {
        let cn = psi.annihilate(n).expect("N >= 2");
        let mut b = SectorVector::zeros(m, psi.particles() - 1).expect("valid sector");
        for (p, row) in pairs.iter().zip(&raised) {
            for (mm, w) in row.iter().enumerate() {
                if let Some(w) = w {
                    let coeff = (a.get(p.k, p.l, mm, n) - a.get(p.l, p.k, mm, n)).conj();
                    b.axpy(coeff, w);
                }
            }
        }
        total -= b.inner(&cn);
    }
    total
}

fn vec_c(v: &DVector<Complex64>) -> Vec<Complex64> {
    v.iter().copied().collect()
}

/// Both sides of the truncated-pair identity for mode-space vectors
/// `phi1, phi2, psi1, psi2`.
pub fn truncated_pair_sides(
    psi: &SectorVector,
    g1: &HermitianMatrix,
    truncated: &HermitianMatrix,
    phi1: &DVector<Complex64>,
    phi2: &DVector<Complex64>,
    psi1: &DVector<Complex64>,
    psi2: &DVector<Complex64>,
) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let lhs = (phi1.kronecker(phi2).adjoint() * truncated.matrix() * psi1.kronecker(psi2))[(0, 0)];

    let g1phi2 = g1.matrix() * phi2;
    let rest_phi2 = phi2 - &g1phi2;
    let (f1, s1, s2) = (vec_c(phi1), vec_c(psi1), vec_c(psi2));

    // <c*(g1 phi2) psi, c*(psi1) c*(psi2) c(phi1) psi>
    let first = match (
        psi.create_vector(&vec_c(&g1phi2)),
        psi.annihilate_vector(&f1)
            .and_then(|v| v.create_vector(&s2))
            .and_then(|v| v.create_vector(&s1)),
    ) {
        (Some(x), Some(y)) => x.inner(&y),
        _ => zero,
    };
    // <c(psi2) c(psi1) psi, c(phi1) c((1 - g1) phi2) psi>
    let second = match (
        psi.annihilate_vector(&s1)
            .and_then(|v| v.annihilate_vector(&s2)),
        psi.annihilate_vector(&vec_c(&rest_phi2))
            .and_then(|v| v.annihilate_vector(&f1)),
    ) {
        (Some(x), Some(y)) => x.inner(&y),
        _ => zero,
    };
    (lhs, first - second)
}

const TRUNCATED_PAIR_SEED: u64 = 0x7275_6e63;
const TRUNCATED_PAIR_SAMPLES: usize = 50;
const TRUNCATED_PAIR_BASIS_MAX_MODES: usize = 5;

/// The truncated two-body matrix written through ladder operators of
/// `gamma1 phi2` and `(1 - gamma1) phi2`. All basis 4-tuples for `M <= 5`,
/// otherwise 50 seeded random 4-tuples.
pub fn check_truncated_pair_identity(psi: &SectorVector) -> Result<CertificateReport> {
    let m = psi.modes();
    let g1 = gamma1(psi)?;
    let t = truncate(&g1, &gamma2(psi)?)?;
    let mut dev = 0.0f64;
    let mut tuples = 0usize;
    if m <= TRUNCATED_PAIR_BASIS_MAX_MODES {
        let unit = |i: usize| {
            let mut v = DVector::zeros(m);
            v[i] = Complex64::new(1.0, 0.0);
            v
        };
        for k in 0..m {
            for l in 0..m {
                for mm in 0..m {
                    for n in 0..m {
                        let (lhs, rhs) =
                            truncated_pair_sides(psi, &g1, &t, &unit(k), &unit(l), &unit(mm), &unit(n));
                        dev = dev.max((lhs - rhs).norm());
                        tuples += 1;
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(TRUNCATED_PAIR_SEED);
        let mut draw = || {
            let v = DVector::from_fn(m, |_, _| gaussian(&mut rng));
            let norm = v.norm();
            v / Complex64::new(norm, 0.0)
        };
        for _ in 0..TRUNCATED_PAIR_SAMPLES {
            let (a, b, c, d) = (draw(), draw(), draw(), draw());
            let (lhs, rhs) = truncated_pair_sides(psi, &g1, &t, &a, &b, &c, &d);
            dev = dev.max((lhs - rhs).norm());
            tuples += 1;
        }
    }
    Ok(
        CertificateReport::identity("truncated_pair_identity", dev, MATRIX_TOL)
            .with_state(psi)
            .with("tuples", tuples as f64),
    )
}

/// Orthogonal projection onto the span of `rank` seeded complex Gaussian
/// vectors in `C^M`.
pub fn random_projection(modes: usize, rank: usize, seed: u64) -> Result<HermitianMatrix> {
    if rank > modes {
        return Err(Error::InvalidParameter(format!(
            "projection rank {rank} exceeds M = {modes}"
        )));
    }
    if rank == 0 {
        return Ok(HermitianMatrix::zeros(modes));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(modes, rank, |_, _| gaussian(&mut rng));
    let q = g.qr().q();
    let q = q.columns(0, rank);
    let x = q * q.adjoint();
    HermitianMatrix::new((&x + x.adjoint()) * Complex64::new(0.5, 0.0))
}

/// `tr((X (x) X) gamma2^T) >= -tr(X gamma1) min{1, 7.554 sqrt(tr(X gamma1 (1 - gamma1)))}`
/// for an orthogonal projection `X`.
pub fn check_bach_bound(psi: &SectorVector, x: &HermitianMatrix) -> Result<CertificateReport> {
    let m = psi.modes();
    if x.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: x.dim(),
        });
    }
    let xm = x.matrix();
    let proj_dev = max_abs_diff(&(xm * xm), xm).max(hermitian_deviation(xm));
    if proj_dev > MATRIX_TOL {
        return Err(Error::NotProjection(proj_dev));
    }
    let g1 = gamma1(psi)?;
    let t = truncate(&g1, &gamma2(psi)?)?;
    let value = (xm.kronecker(xm) * t.matrix()).trace().re;
    let x_occ = (xm * g1.matrix()).trace().re;
    let defect_mat = g1.matrix() - g1.matrix() * g1.matrix();
    let x_defect = (xm * defect_mat).trace().re;
    let factor = (BACH_CONSTANT * x_defect.max(0.0).sqrt()).min(1.0);
    let bound = -x_occ * factor;
    Ok(CertificateReport::inequality("bach_bound", bound, value, SCALAR_TOL)
        .with_state(psi)
        .with("tr_x_gamma1", x_occ)
        .with("tr_x_defect", x_defect)
        .with("rank", xm.trace().re.round()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdm::pair_index;
    use crate::states::{lowest_slater, random_state, slater, yang_pairing};

    #[test]
    fn report_json_line() {
        let r = CertificateReport::inequality("x", 1.0, 2.0, 1e-8).with("M", 3.0);
        let line = r.to_json_line();
        assert!(!line.contains('\n'));
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["name"], "x");
        assert_eq!(v["pass"], true);
        assert_eq!(v["margin"], 1.0);
        assert_eq!(v["context"]["M"], 3.0);
        let back: CertificateReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
        let nan = CertificateReport::inequality("y", f64::NAN, 1.0, 1e-8);
        assert!(!nan.pass);
    }

    #[test]
    fn hs_bound_on_slater() {
        let r = check_hs_bound(&slater(6, &[0, 1, 2]).unwrap()).unwrap();
        assert!((r.lhs - 12f64.sqrt()).abs() < 1e-10);
        assert!((r.rhs - 3.0 * 5f64.sqrt()).abs() < 1e-14);
        assert!(r.pass);
        let r = check_hs_bound(&random_state(5, 1, 2).unwrap()).unwrap();
        assert_eq!(r.lhs, 0.0);
    }

    #[test]
    fn truncated_bound_on_slater_is_equality() {
        let r = check_truncated_bound(&slater(5, &[1, 4]).unwrap()).unwrap();
        assert!(r.lhs < 1e-12 && r.rhs < 1e-6);
        assert!(r.pass);
        assert!(check_truncated_bound(&random_state(6, 3, 1).unwrap()).unwrap().pass);
    }

    #[test]
    fn op_bounds_examples() {
        let r = check_op_bounds(&yang_pairing(8, 4).unwrap()).unwrap();
        assert!((r.lhs - 3.0).abs() < 1e-8, "{}", r.lhs);
        assert!(r.context["yang_gap"].abs() < 1e-8);
        let r = check_op_bounds(&yang_pairing(4, 2).unwrap()).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-8);
        let r = check_op_bounds(&slater(6, &[0, 1, 2]).unwrap()).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-8);
        assert!(r.pass);
    }

    #[test]
    fn entropy_examples() {
        let r = check_entropy_bound(&slater(6, &[0, 1, 2]).unwrap()).unwrap();
        assert!((r.rhs - 3f64.ln()).abs() < 1e-8);
        let want = 2.0 * 3f64.ln() - (5.0 * (1.0 + 5.0 / 4.0f64)).ln();
        assert!((r.lhs - want).abs() < 1e-14);
        assert!(r.pass);
        let r = check_entropy_bound(&yang_pairing(4, 2).unwrap()).unwrap();
        assert!((r.lhs - (4.0f64 / 20.0).ln()).abs() < 1e-14);
        assert!(r.pass);
        assert!(check_entropy_bound(&random_state(6, 3, 5).unwrap()).unwrap().pass);
        assert!(check_entropy_bound(&lowest_slater(4, 1).unwrap()).is_err());
    }

    #[test]
    fn anticommutator_identity_zero_and_hand_case() {
        let r = check_anticommutator_identity(&CoefficientTensor4::zeros(3), 1).unwrap();
        assert_eq!(r.lhs, 0.0);
        let mut e = CMatrix::zeros(4, 4);
        e[(pair_index(0, 1, 2), pair_index(0, 0, 2))] = Complex64::new(1.0, 0.0);
        e[(pair_index(1, 0, 2), pair_index(0, 0, 2))] = Complex64::new(-1.0, 0.0);
        let a = CoefficientTensor4::from_matrix(2, e).unwrap();
        let r = check_anticommutator_identity(&a, 0).unwrap();
        assert!(r.pass && r.lhs < 1e-14, "{r:?}");
        assert!(check_anticommutator_identity(&CoefficientTensor4::random(2, 1), 0).is_err());
    }

    #[test]
    fn anticommutator_sum_bound_small() {
        let r = check_anticommutator_sum_bound(&CoefficientTensor4::zeros(3), 2).unwrap();
        assert_eq!(r.lhs, 0.0);
        let a = CoefficientTensor4::random(4, 7);
        let r = check_anticommutator_sum_bound(&a, 2).unwrap();
        assert!(r.pass, "{r:?}");
        let r0 = check_anticommutator_sum_bound(&a, 0).unwrap();
        assert!(r0.lhs.abs() < 1e-12);
    }

    #[test]
    fn trace_duality_cases() {
        let psi = random_state(5, 2, 3).unwrap();
        let id = CoefficientTensor4::from_matrix(5, CMatrix::identity(25, 25)).unwrap();
        let r = check_trace_duality(&psi, &id).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-10 && r.pass);
        let a = CoefficientTensor4::random(5, 8);
        let r = check_trace_duality(&psi, &a).unwrap();
        assert!(r.context["route_deviation"] < 1e-10 && r.pass, "{r:?}");
        let g2 = gamma2(&psi).unwrap();
        let hs = g2.frobenius_norm();
        let aligned = CoefficientTensor4::from_matrix(5, g2.matrix() / Complex64::new(hs, 0.0)).unwrap();
        let r = check_trace_duality(&psi, &aligned).unwrap();
        assert!((r.lhs - hs).abs() < 1e-10);
    }

    #[test]
    fn truncated_pair_identity_cases() {
        let r = check_truncated_pair_identity(&slater(4, &[0, 2]).unwrap()).unwrap();
        assert!(r.pass);
        let r = check_truncated_pair_identity(&random_state(5, 2, 9).unwrap()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.context["tuples"], 625.0);
        let r = check_truncated_pair_identity(&random_state(4, 1, 9).unwrap()).unwrap();
        assert!(r.pass, "{r:?}");
        let r = check_truncated_pair_identity(&random_state(6, 3, 2).unwrap()).unwrap();
        assert!(r.pass && r.context["tuples"] == 50.0, "{r:?}");
    }

    #[test]
    fn bach_cases() {
        let psi = random_state(6, 3, 4).unwrap();
        let r = check_bach_bound(&psi, &HermitianMatrix::zeros(6)).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        let s = slater(6, &[0, 1, 2]).unwrap();
        let r = check_bach_bound(&s, &HermitianMatrix::identity(6)).unwrap();
        assert!(r.pass && r.rhs.abs() < 1e-10 && r.lhs.abs() < 1e-10);
        let x = random_projection(6, 2, 4).unwrap();
        assert!((x.trace() - 2.0).abs() < 1e-12);
        assert!(check_bach_bound(&psi, &x).unwrap().pass);
        let not_proj = HermitianMatrix::identity(6).scaled(0.5);
        assert!(matches!(check_bach_bound(&psi, &not_proj), Err(Error::NotProjection(_))));
    }

    #[test]
    fn quadratic_form_random() {
        let psi = random_state(5, 3, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = CMatrix::from_fn(5, 5, |_, _| gaussian(&mut rng));
        let r = check_quadratic_form(&psi, &phi).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
