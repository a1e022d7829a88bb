//! Closed forms for the purity of random and named states.
//!
//! Write a random state as `z_k = r_k e^{iφ_k}` with phases independent of
//! the moduli and `E[e^{iφ_k}] = 0`. The purity splits as `π = X + M`, where
//! `X` collects the phase-dependent terms (zero mean) and `M` depends on the
//! moduli only. Mean and variance of `π` then follow from seven moments of
//! the moduli; [`MomentProvider`] supplies them at three levels of
//! approximation and [`exact_moments`] assembles the Gaussian model.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::fmt::f64_full;
use crate::purity::{Bipartition, ORACLE_MAX_QUBITS};
use crate::statekit::PureState;

/// Gaussian curves and quadratures are cut at `μ ± TAIL_SIGMAS · σ`.
pub const TAIL_SIGMAS: f64 = 8.0;

fn double_factorial_odd(m: u32) -> f64 {
    // (2m - 1)!!, with (-1)!! = 1
    (1..=m).map(|i| (2 * i - 1) as f64).product()
}

/// `E[Π_i x_i^{2 m_i}]` for `x` uniform on the real unit sphere `S^{N-1}`,
/// distinct coordinates `x_i`:
/// `Π (2m_i - 1)!! / Π_{j<M} (N + 2j)` with `M = Σ m_i`.
pub fn sphere_moment(dim: usize, exponents: &[u32]) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("sphere dimension {dim} < 2")));
    }
    let total: u32 = exponents.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument("sphere moment needs Σ m_i ≥ 1".into()));
    }
    if exponents.len() > dim {
        return Err(Error::InvalidArgument(format!(
            "{} distinct coordinates requested in dimension {dim}",
            exponents.len()
        )));
    }
    let num: f64 = exponents.iter().map(|&m| double_factorial_odd(m)).product();
    let den: f64 = (0..total).map(|j| (dim + 2 * j as usize) as f64).product();
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentSource {
    /// Closed-form moments of the uniform measure on the real sphere.
    ExactSphere,
    /// Independent moduli with `E[r^{2m}] = (2m - 1)!! / N^m`.
    FactorizedGaussian,
    /// Every `r_k` replaced by `1/√N`.
    Delta,
}

/// The seven moments of the moduli entering the mean and variance of `π_AB`.
///
/// Field `e_a_b_...` holds `E[r_1^a r_2^b ...]` for distinct indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentProvider {
    pub dim: usize,
    pub source: MomentSource,
    pub e_2_2: f64,
    pub e_4: f64,
    pub e_2_2_2_2: f64,
    pub e_2_2_4: f64,
    pub e_4_4: f64,
    pub e_2_6: f64,
    pub e_8: f64,
}

impl MomentProvider {
    pub fn exact_sphere(dim: usize) -> Result<Self> {
        if dim < 4 {
            return Err(Error::InvalidArgument(format!("exact sphere moments need N ≥ 4, got {dim}")));
        }
        Ok(Self {
            dim,
            source: MomentSource::ExactSphere,
            e_2_2: sphere_moment(dim, &[1, 1])?,
            e_4: sphere_moment(dim, &[2])?,
            e_2_2_2_2: sphere_moment(dim, &[1, 1, 1, 1])?,
            e_2_2_4: sphere_moment(dim, &[1, 1, 2])?,
            e_4_4: sphere_moment(dim, &[2, 2])?,
            e_2_6: sphere_moment(dim, &[1, 3])?,
            e_8: sphere_moment(dim, &[4])?,
        })
    }

    pub fn factorized_gaussian(dim: usize) -> Result<Self> {
        if dim < 4 {
            return Err(Error::InvalidArgument(format!("moment provider needs N ≥ 4, got {dim}")));
        }
        let n = dim as f64;
        let m = |k: u32| double_factorial_odd(k) / n.powi(k as i32);
        Ok(Self {
            dim,
            source: MomentSource::FactorizedGaussian,
            e_2_2: m(1) * m(1),
            e_4: m(2),
            e_2_2_2_2: m(1).powi(4),
            e_2_2_4: m(1) * m(1) * m(2),
            e_4_4: m(2) * m(2),
            e_2_6: m(1) * m(3),
            e_8: m(4),
        })
    }

    pub fn delta(dim: usize) -> Result<Self> {
        if dim < 4 {
            return Err(Error::InvalidArgument(format!("moment provider needs N ≥ 4, got {dim}")));
        }
        let n = dim as f64;
        let second = 1.0 / (n * n);
        let fourth = second * second;
        Ok(Self {
            dim,
            source: MomentSource::Delta,
            e_2_2: second,
            e_4: second,
            e_2_2_2_2: fourth,
            e_2_2_4: fourth,
            e_4_4: fourth,
            e_2_6: fourth,
            e_8: fourth,
        })
    }

    pub fn for_source(source: MomentSource, dim: usize) -> Result<Self> {
        match source {
            MomentSource::ExactSphere => Self::exact_sphere(dim),
            MomentSource::FactorizedGaussian => Self::factorized_gaussian(dim),
            MomentSource::Delta => Self::delta(dim),
        }
    }
}

/// Normal approximation to the law of `π_AB`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianModel {
    pub mu: f64,
    pub sigma2: f64,
}

impl GaussianModel {
    pub fn new(mu: f64, sigma2: f64) -> Result<Self> {
        if sigma2.is_nan() || sigma2 <= 0.0 || !mu.is_finite() || !sigma2.is_finite() {
            return Err(Error::Numerical(format!("degenerate Gaussian model: μ = {mu}, σ² = {sigma2}")));
        }
        Ok(Self { mu, sigma2 })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Purity interval `μ ± 8σ`, lower end kept positive.
    pub fn purity_range(&self) -> (f64, f64) {
        let s = TAIL_SIGMAS * self.sigma();
        ((self.mu - s).max(self.mu * 1e-2), self.mu + s)
    }

    /// Image of [`Self::purity_range`] under `y = 1/x`.
    pub fn participation_range(&self) -> (f64, f64) {
        let (lo, hi) = self.purity_range();
        (1.0 / hi, 1.0 / lo)
    }
}

/// Mean and variance of `π_AB` from the moments of the moduli, term by term.
pub fn exact_moments(dim_a: usize, dim_b: usize, moments: &MomentProvider) -> Result<GaussianModel> {
    if dim_a * dim_b != moments.dim {
        return Err(Error::InvalidArgument(format!(
            "N_A·N_B = {} does not match moment dimension {}",
            dim_a * dim_b,
            moments.dim
        )));
    }
    let n = moments.dim as f64;
    let na = dim_a as f64;
    let nb = dim_b as f64;

    let mu = n * (na + nb - 2.0) * moments.e_2_2 + n * moments.e_4;

    let e_x2 = 2.0 * n * (na - 1.0) * (nb - 1.0) * moments.e_2_2_2_2;

    let e_m2 = n * (na + nb - 2.0) * ((na + nb) * (n - 4.0) - 2.0 * (n - 5.0)) * moments.e_2_2_2_2
        + 2.0 * n * (na + nb - 2.0) * (n + 2.0 * na + 2.0 * nb - 8.0) * moments.e_2_2_4
        + n * (n + 2.0 * na + 2.0 * nb - 5.0) * moments.e_4_4
        + 4.0 * n * (na + nb - 2.0) * moments.e_2_6
        + n * moments.e_8;

    GaussianModel::new(mu, e_x2 + e_m2 - mu * mu)
}

/// Large-N limit: `μ = (N_A + N_B - 1)/N`, `σ² = 2/N²`.
///
/// # Panics
/// If either dimension is below 2.
pub fn asymptotic_model(dim_a: usize, dim_b: usize) -> GaussianModel {
    assert!(dim_a >= 2 && dim_b >= 2, "asymptotic model needs N_A, N_B ≥ 2");
    let n = (dim_a * dim_b) as f64;
    GaussianModel { mu: (dim_a + dim_b - 1) as f64 / n, sigma2: 2.0 / (n * n) }
}

/// Gaussian density of `π_AB` at `x`.
pub fn purity_pdf(model: &GaussianModel, x: f64) -> f64 {
    let d = x - model.mu;
    (-d * d / (2.0 * model.sigma2)).exp() / (2.0 * PI * model.sigma2).sqrt()
}

/// Density of `N_AB = 1/π_AB`: `f(1/y) / y²`.
pub fn participation_pdf(model: &GaussianModel, y: f64) -> Result<f64> {
    if y.is_nan() || y <= 0.0 {
        return Err(Error::InvalidArgument(format!("participation {y} must be positive")));
    }
    Ok(purity_pdf(model, 1.0 / y) / (y * y))
}

/// `N_AB` of the n-qubit W state across any cut with `n_A` qubits on one side.
pub fn w_participation(n: usize, n_a: usize) -> Result<f64> {
    if n_a == 0 || n_a >= n {
        return Err(Error::InvalidArgument(format!("invalid split {n_a} of {n} qubits")));
    }
    let n_b = n - n_a;
    Ok((n * n) as f64 / (n_a * n_a + n_b * n_b) as f64)
}

/// Splits `π_AB = X + M` literally from the polar form of the amplitudes.
///
/// Returns `(X, M)`. Cost is `O(N²)`, so only `n ≤ 12` is accepted.
pub fn xm_split(state: &PureState, part: &Bipartition) -> Result<(f64, f64)> {
    if state.n() != part.n() {
        return Err(Error::QubitMismatch { state: state.n(), part: part.n() });
    }
    if state.n() > ORACLE_MAX_QUBITS {
        return Err(Error::TooManyQubits { n: state.n(), max: ORACLE_MAX_QUBITS });
    }
    let na = part.dim_a();
    let nb = part.dim_b();
    let qa = part.qubits_a();
    let qb = part.complement().qubits_a();
    let index = |j: usize, l: usize| -> usize {
        let mut k = 0usize;
        for (t, &q) in qa.iter().enumerate() {
            k |= ((j >> t) & 1) << q;
        }
        for (t, &q) in qb.iter().enumerate() {
            k |= ((l >> t) & 1) << q;
        }
        k
    };
    let amps = state.amplitudes();
    let mut r = vec![0.0; na * nb];
    let mut phi = vec![0.0; na * nb];
    for j in 0..na {
        for l in 0..nb {
            let z = amps[index(j, l)];
            r[j * nb + l] = z.norm();
            phi[j * nb + l] = z.arg();
        }
    }
    let at = |j: usize, l: usize| j * nb + l;

    let mut x = 0.0;
    for j in 0..na {
        for jp in (0..na).filter(|&jp| jp != j) {
            for l in 0..nb {
                for lp in (0..nb).filter(|&lp| lp != l) {
                    let amp = r[at(j, l)] * r[at(jp, l)] * r[at(jp, lp)] * r[at(j, lp)];
                    if amp == 0.0 {
                        continue;
                    }
                    let angle = phi[at(j, l)] - phi[at(jp, l)] + phi[at(jp, lp)] - phi[at(j, lp)];
                    x += amp * angle.cos();
                }
            }
        }
    }

    let mut m = 0.0;
    for j in 0..na {
        for jp in (0..na).filter(|&jp| jp != j) {
            for l in 0..nb {
                m += r[at(j, l)].powi(2) * r[at(jp, l)].powi(2);
            }
        }
    }
    for j in 0..na {
        for l in 0..nb {
            for lp in (0..nb).filter(|&lp| lp != l) {
                m += r[at(j, l)].powi(2) * r[at(j, lp)].powi(2);
            }
        }
    }
    m += r.iter().map(|v| v.powi(4)).sum::<f64>();
    Ok((x, m))
}

/// Density of one modulus `|x_k|` for `x` uniform on `S^{N-1}`:
/// `(2/√π) Γ(N/2)/Γ((N-1)/2) (1 - r²)^{(N-3)/2}`, evaluated in log space.
pub fn marginal_amplitude_pdf(dim: usize, r: f64) -> Result<f64> {
    if dim < 4 {
        return Err(Error::InvalidArgument(format!("marginal density needs N ≥ 4, got {dim}")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("modulus {r} outside [0, 1]")));
    }
    let n = dim as f64;
    let log_norm = (2.0 / PI.sqrt()).ln() + ln_gamma(n / 2.0) - ln_gamma((n - 1.0) / 2.0);
    let log_body = 0.5 * (n - 3.0) * ((1.0 - r) * (1.0 + r)).ln();
    Ok((log_norm + log_body).exp())
}

/// Relative width `σ/μ = √2 / (N_A + N_B - 1)` of the asymptotic model.
pub fn concentration_ratio(dim_a: usize, dim_b: usize) -> f64 {
    std::f64::consts::SQRT_2 / (dim_a + dim_b - 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Purity,
    Participation,
}

/// `points` equally spaced samples of a density over `[lo, hi]`.
pub fn density_curve(
    model: &GaussianModel,
    kind: CurveKind,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    if points < 2 || lo.is_nan() || hi.is_nan() || hi <= lo {
        return Err(Error::InvalidArgument(format!("bad curve range [{lo}, {hi}] with {points} points")));
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let x = if i == points - 1 { hi } else { lo + step * i as f64 };
            let d = match kind {
                CurveKind::Purity => purity_pdf(model, x),
                CurveKind::Participation => participation_pdf(model, x)?,
            };
            Ok((x, d))
        })
        .collect()
}

/// Theory-curve TSV: `x<TAB>density`.
pub fn curve_tsv(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("x\tdensity\n");
    for &(x, d) in curve {
        let _ = writeln!(out, "{}\t{}", f64_full(x), f64_full(d));
    }
    out
}
