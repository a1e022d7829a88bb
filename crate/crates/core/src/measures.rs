//! Global and pairwise entanglement measures to compare against the purity
//! distribution: the Q measure, Wootters concurrence and the tangles.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::eig4;
use crate::purity::{purity, reduced_density_of_qubits, Bipartition};
use crate::spectra::{enumerate_masks, BipartitionFamily, FamilySelector};
use crate::statekit::PureState;

/// Negative eigenvalues of `ρ ρ̃` down to this are roundoff and clamped to 0.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Eigenvalues of `ρ ρ̃` within this fraction of its Frobenius norm are
/// roundoff around an exact zero. The square root would otherwise turn
/// `1e-16` noise into `1e-8` errors in the λ's.
pub const EIGENVALUE_ROUNDOFF: f64 = 1e-14;

/// `R = τ₂/τ₁` is left undefined below this `τ₁`.
pub const TAU1_FLOOR: f64 = 1e-12;

fn check_qubit(state: &PureState, q: usize) -> Result<()> {
    if q >= state.n() {
        return Err(Error::InvalidQubit { n: state.n(), qubit: q });
    }
    Ok(())
}

/// `Q = 2(1 - mean single-qubit purity)`.
pub fn q_measure(state: &PureState) -> Result<f64> {
    let family = BipartitionFamily::new(state.n(), FamilySelector::MaxUnbalanced)?;
    let masks = enumerate_masks(&family);
    let mut total = 0.0;
    for part in &masks {
        total += purity(state, part)?.purity;
    }
    Ok(2.0 * (1.0 - total / masks.len() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Square roots of the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`, decreasing.
    pub lambdas: [f64; 4],
}

/// σ_y⊗σ_y in the basis |q_i q_j⟩ = 00, 01, 10, 11; it is real and
/// independent of which qubit is the low bit.
const SPIN_FLIP: [[f64; 4]; 4] =
    [[0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0]];

fn matmul4(a: &[[C64; 4]; 4], b: &[[C64; 4]; 4]) -> [[C64; 4]; 4] {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Wootters concurrence of qubits `i` and `j`.
pub fn concurrence(state: &PureState, i: usize, j: usize) -> Result<ConcurrenceResult> {
    check_qubit(state, i)?;
    check_qubit(state, j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!("concurrence needs two distinct qubits, got {i} twice")));
    }
    let rho = reduced_density_of_qubits(state, &[i, j])?;
    let mut r = [[C64::new(0.0, 0.0); 4]; 4];
    let mut flip = [[C64::new(0.0, 0.0); 4]; 4];
    let mut conj = [[C64::new(0.0, 0.0); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            r[a][b] = rho.get(a, b);
            flip[a][b] = C64::new(SPIN_FLIP[a][b], 0.0);
            conj[a][b] = rho.get(a, b).conj();
        }
    }
    let tilde = matmul4(&matmul4(&flip, &conj), &flip);
    let product = matmul4(&r, &tilde);
    let eig = eig4(&product)?;
    let norm = product.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut lambdas = [0.0; 4];
    for (slot, e) in lambdas.iter_mut().zip(eig) {
        if e.re < EIGENVALUE_FLOOR {
            return Err(Error::Numerical(format!("negative eigenvalue {e} in concurrence")));
        }
        *slot = if e.re.abs() <= EIGENVALUE_ROUNDOFF * norm { 0.0 } else { e.re.max(0.0).sqrt() };
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(ConcurrenceResult { value, lambdas })
}

/// `τ₁ = 2(1 - Tr ρ_i²)`, equal to `4 det ρ_i`.
pub fn tangle1(state: &PureState, i: usize) -> Result<f64> {
    check_qubit(state, i)?;
    if state.n() < 2 {
        return Err(Error::TooFewQubits { what: "tangle", min: 2, n: state.n() });
    }
    let part = Bipartition::from_qubits(state.n(), &[i])?;
    Ok(2.0 * (1.0 - purity(state, &part)?.purity))
}

/// `τ₂ = Σ_{j≠i} C_ij²` and `R = τ₂/τ₁` (`None` when `τ₁ < 1e-12`).
pub fn tangle2_and_ratio(state: &PureState, i: usize) -> Result<(f64, Option<f64>)> {
    check_qubit(state, i)?;
    let tau1 = tangle1(state, i)?;
    let tau2 = (0..state.n())
        .filter(|&j| j != i)
        .map(|j| concurrence(state, i, j).map(|c| c.value * c.value))
        .sum::<Result<f64>>()?;
    Ok((tau2, ratio(tau1, tau2)))
}

fn ratio(tau1: f64, tau2: f64) -> Option<f64> {
    (tau1 >= TAU1_FLOOR).then(|| tau2 / tau1)
}

/// Per-qubit tangles for a whole state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangleReport {
    pub q: f64,
    pub tau1: Vec<f64>,
    pub tau2: Vec<f64>,
    pub ratio: Vec<Option<f64>>,
    /// `C_ij` for `i < j`, row-major: (0,1), (0,2), …, (n-2, n-1).
    pub concurrence: Vec<f64>,
}

/// Evaluates every pairwise concurrence once and assembles τ₁, τ₂ and R.
pub fn tangle_report(state: &PureState) -> Result<TangleReport> {
    let n = state.n();
    if n < 2 {
        return Err(Error::TooFewQubits { what: "tangle report", min: 2, n });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let concurrence =
        pairs.par_iter().map(|&(i, j)| concurrence(state, i, j).map(|c| c.value)).collect::<Result<Vec<f64>>>()?;
    let mut tau2 = vec![0.0; n];
    for (&(i, j), c) in pairs.iter().zip(&concurrence) {
        tau2[i] += c * c;
        tau2[j] += c * c;
    }
    let tau1 = (0..n).map(|i| tangle1(state, i)).collect::<Result<Vec<f64>>>()?;
    let ratio = tau1.iter().zip(&tau2).map(|(&t1, &t2)| ratio(t1, t2)).collect();
    Ok(TangleReport { q: q_measure(state)?, tau1, tau2, ratio, concurrence })
}

impl TangleReport {
    /// Measures JSON: `{"n", "Q", "tau1", "tau2", "R", "concurrence"}`.
    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct MeasuresFile<'a> {
            n: usize,
            #[serde(rename = "Q")]
            q: f64,
            tau1: &'a [f64],
            tau2: &'a [f64],
            #[serde(rename = "R")]
            ratio: &'a [Option<f64>],
            concurrence: &'a [f64],
        }
        Ok(serde_json::to_string_pretty(&MeasuresFile {
            n: self.tau1.len(),
            q: self.q,
            tau1: &self.tau1,
            tau2: &self.tau2,
            ratio: &self.ratio,
            concurrence: &self.concurrence,
        })?)
    }
}
