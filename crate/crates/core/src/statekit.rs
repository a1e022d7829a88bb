//! Pure-state construction and seeded random ensembles.
//!
//! Amplitudes are stored densely, `2^n` complex values indexed by
//! `k = Σ_j b_j 2^j` (qubit 0 is the least significant bit).
//!
//! Random states are drawn from a ChaCha8 stream keyed by the ensemble seed,
//! with the sample index selecting the ChaCha stream id. Sample `i` therefore
//! depends only on `(seed, i)`, and parallel sampling reproduces serial
//! sampling bit for bit.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::path::Path;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported qubit count (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Tolerance on `Σ|z_k|² = 1` accepted at construction.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Wraps an amplitude vector, checking length and normalization.
    pub fn new(n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_qubits(n)?;
        let expected = 1usize << n;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch { len: amplitudes.len(), expected });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr.is_nan() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { n, amplitudes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Hilbert-space dimension `2^n`.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Relabels qubits: qubit `q` of `self` becomes qubit `perm[q]` of the result.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::InvalidArgument(format!("permutation of length {} for {n} qubits", perm.len())));
        }
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (k, &z) in self.amplitudes.iter().enumerate() {
            let mut target = 0usize;
            for (q, &p) in perm.iter().enumerate() {
                target |= ((k >> q) & 1) << p;
            }
            out[target] = z;
        }
        Ok(Self { n, amplitudes: out })
    }

    /// Applies a 2×2 unitary (row-major) to one qubit.
    pub fn apply_single_qubit(&self, qubit: usize, u: &[[C64; 2]; 2]) -> Result<Self> {
        if qubit >= self.n {
            return Err(Error::InvalidQubit { n: self.n, qubit });
        }
        let bit = 1usize << qubit;
        let mut out = self.amplitudes.clone();
        for k in (0..self.dim()).filter(|k| k & bit == 0) {
            let a0 = self.amplitudes[k];
            let a1 = self.amplitudes[k | bit];
            out[k] = u[0][0] * a0 + u[0][1] * a1;
            out[k | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
        PureState::new(self.n, out)
    }

    pub fn to_file(&self) -> StateFile {
        StateFile { n: self.n, amplitudes: self.amplitudes.iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        file.into_state()
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// On-disk state layout: `{"n": int, "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn into_state(self) -> Result<PureState> {
        let amps = self.amplitudes.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        PureState::new(self.n, amps)
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::TooFewQubits { what: "state", min: 1, n });
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
    }
    Ok(())
}

fn check_min(what: &'static str, n: usize, min: usize) -> Result<()> {
    check_qubits(n)?;
    if n < min {
        return Err(Error::TooFewQubits { what, min, n });
    }
    Ok(())
}

fn zeros(n: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); 1usize << n]
}

/// Computational basis state |k⟩.
pub fn make_basis(n: usize, k: usize) -> Result<PureState> {
    check_qubits(n)?;
    if k >= 1usize << n {
        return Err(Error::IndexOutOfRange { n, index: k });
    }
    let mut amps = zeros(n);
    amps[k] = C64::new(1.0, 0.0);
    PureState::new(n, amps)
}

/// (|0…0⟩ + |1…1⟩)/√2.
pub fn make_ghz(n: usize) -> Result<PureState> {
    check_min("GHZ state", n, 2)?;
    let mut amps = zeros(n);
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[(1usize << n) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(n, amps)
}

/// Equal-weight superposition of the n single-excitation basis states.
pub fn make_w(n: usize) -> Result<PureState> {
    check_min("W state", n, 2)?;
    let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = zeros(n);
    for q in 0..n {
        amps[1usize << q] = a;
    }
    PureState::new(n, amps)
}

/// One-dimensional cluster state on an open chain.
///
/// Amplitude of bit string `b` is `2^{-n/2} (-1)^{c(b)}` where `c(b)` counts
/// neighbouring pairs with `b_k = 0` and `b_{k+1} = 1`. This is the expansion
/// of `⊗_k (|0⟩_k σ_z^{(k+1)} + |1⟩_k)` with the last factor's σ_z set to
/// the identity.
pub fn make_cluster1d(n: usize) -> Result<PureState> {
    check_min("cluster state", n, 2)?;
    let scale = (0.5f64).powf(n as f64 / 2.0);
    let pattern_mask = (1usize << (n - 1)) - 1;
    let amps = (0..1usize << n)
        .map(|k| {
            // bit k of `(!b) & (b >> 1)` marks b_k = 0, b_{k+1} = 1
            let c = (!k & (k >> 1) & pattern_mask).count_ones();
            let sign = if c.is_multiple_of(2) { 1.0 } else { -1.0 };
            C64::new(sign * scale, 0.0)
        })
        .collect();
    PureState::new(n, amps)
}

/// Tensor product; qubits of `a` come first (low bits), then those of `b`.
pub fn make_product(a: &PureState, b: &PureState) -> Result<PureState> {
    let n = a.n + b.n;
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
    }
    let mut amps = Vec::with_capacity(1usize << n);
    for &zb in &b.amplitudes {
        amps.extend(a.amplitudes.iter().map(|&za| za * zb));
    }
    // products of normalized vectors drift by a few ulps at most
    PureState::new(n, amps)
}

/// `count` disjoint Bell pairs (|00⟩+|11⟩)/√2 on qubits (0,1), (2,3), ...
pub fn make_bell_pairs(pairs: usize) -> Result<PureState> {
    if pairs == 0 {
        return Err(Error::TooFewQubits { what: "Bell-pair product", min: 2, n: 0 });
    }
    let bell = make_ghz(2)?;
    let mut state = bell.clone();
    for _ in 1..pairs {
        state = make_product(&state, &bell)?;
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// Normalized complex Gaussian vector: uniform on the unit sphere of C^N.
    Haar,
    /// Moduli uniform on the real sphere S^{N-1} (folded to the positive
    /// hyperoctant) with independent uniform phases.
    PhaseSphere,
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EnsembleKind::Haar => "haar",
            EnsembleKind::PhaseSphere => "phase-sphere",
        })
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar" => Ok(EnsembleKind::Haar),
            "phase-sphere" => Ok(EnsembleKind::PhaseSphere),
            other => Err(Error::InvalidArgument(format!("unknown ensemble '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, seed: u64) -> Self {
        Self { kind, n, seed }
    }

    /// RNG for sample `index`: ChaCha8 keyed by the seed, stream = index.
    pub fn sample_rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Draws sample `index` of this ensemble.
    pub fn sample(&self, index: u64) -> Result<PureState> {
        check_qubits(self.n)?;
        let mut rng = self.sample_rng(index);
        match self.kind {
            EnsembleKind::Haar => haar_state(self.n, &mut rng),
            EnsembleKind::PhaseSphere => phase_sphere_state(self.n, &mut rng),
        }
    }

    /// Samples `0..count`, in parallel, returned in index order.
    pub fn sample_many(&self, count: usize) -> Result<Vec<PureState>> {
        (0..count as u64).into_par_iter().map(|i| self.sample(i)).collect()
    }
}

fn haar_state<R: Rng>(n: usize, rng: &mut R) -> Result<PureState> {
    let dim = 1usize << n;
    let mut amps: Vec<C64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= norm);
    PureState::new(n, amps)
}

fn phase_sphere_state<R: Rng>(n: usize, rng: &mut R) -> Result<PureState> {
    let dim = 1usize << n;
    let moduli: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal).abs()).collect();
    let norm = moduli.iter().map(|r| r * r).sum::<f64>().sqrt();
    let amps = moduli
        .into_iter()
        .map(|r| {
            let phase = rng.random::<f64>() * TAU;
            C64::from_polar(r / norm, phase)
        })
        .collect();
    PureState::new(n, amps)
}

/// Haar-random states for `spec`, which must be of kind [`EnsembleKind::Haar`].
pub fn sample_haar(spec: &EnsembleSpec, count: usize) -> Result<Vec<PureState>> {
    if spec.kind != EnsembleKind::Haar {
        return Err(Error::InvalidArgument(format!("expected a haar ensemble, got {}", spec.kind)));
    }
    spec.sample_many(count)
}

/// Phase-sphere states for `spec`, which must be of kind [`EnsembleKind::PhaseSphere`].
pub fn sample_phase_sphere(spec: &EnsembleSpec, count: usize) -> Result<Vec<PureState>> {
    if spec.kind != EnsembleKind::PhaseSphere {
        return Err(Error::InvalidArgument(format!("expected a phase-sphere ensemble, got {}", spec.kind)));
    }
    spec.sample_many(count)
}
