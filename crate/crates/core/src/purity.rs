//! Bipartitions, reduced density matrices and purity.
//!
//! A bipartition is the bitmask of subsystem A. Basis index `k` maps to the
//! pair `(j_A, l_B)` by order-preserving bit compaction: the t-th set bit of
//! the mask (counting from the least significant) supplies bit t of `j_A`,
//! and likewise for the complement and `l_B`. The state then reads as an
//! `N_A × N_B` matrix `Z[j_A][l_B] = z_k`, with `ρ_A = Z Z†`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::statekit::{PureState, MAX_QUBITS};

/// Largest qubit count accepted by the O(N²) literal-sum oracles.
pub const ORACLE_MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bipartition {
    n: usize,
    mask: u32,
}

impl Bipartition {
    /// Both sides must be non-empty and the mask must fit in `n` bits.
    pub fn new(n: usize, mask: u32) -> Result<Self> {
        if !(2..=MAX_QUBITS).contains(&n) {
            return Err(Error::InvalidMask { n, mask });
        }
        let full = full_mask(n);
        if mask & !full != 0 || mask == 0 || mask == full {
            return Err(Error::InvalidMask { n, mask });
        }
        Ok(Self { n, mask })
    }

    /// Subsystem A made of the listed qubits.
    pub fn from_qubits(n: usize, qubits: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &q in qubits {
            if q >= n {
                return Err(Error::InvalidQubit { n, qubit: q });
            }
            mask |= 1 << q;
        }
        Self::new(n, mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn n_a(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn n_b(&self) -> usize {
        self.n - self.n_a()
    }

    pub fn dim_a(&self) -> usize {
        1 << self.n_a()
    }

    pub fn dim_b(&self) -> usize {
        1 << self.n_b()
    }

    pub fn complement(&self) -> Self {
        Self { n: self.n, mask: !self.mask & full_mask(self.n) }
    }

    /// Qubits of A, ascending.
    pub fn qubits_a(&self) -> Vec<usize> {
        set_bits(self.mask)
    }

    /// Basis-index offsets for every `j_A` (bits of `j_A` deposited at A's positions).
    fn scatter_a(&self) -> Vec<usize> {
        scatter_table(self.mask)
    }

    fn scatter_b(&self) -> Vec<usize> {
        scatter_table(!self.mask & full_mask(self.n))
    }
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn set_bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|&q| mask >> q & 1 == 1).collect()
}

fn scatter_table(mask: u32) -> Vec<usize> {
    let positions = set_bits(mask);
    (0..1usize << positions.len())
        .map(|j| positions.iter().enumerate().fold(0usize, |acc, (t, &p)| acc | ((j >> t) & 1) << p))
        .collect()
}

fn check_match(state: &PureState, part: &Bipartition) -> Result<()> {
    if state.n() != part.n() {
        return Err(Error::QubitMismatch { state: state.n(), part: part.n() });
    }
    Ok(())
}

/// `Z` with rows indexed by A and columns by B, row-major.
fn coefficient_matrix(state: &PureState, rows: &[usize], cols: &[usize]) -> Vec<C64> {
    let amps = state.amplitudes();
    let mut z = Vec::with_capacity(rows.len() * cols.len());
    for &r in rows {
        z.extend(cols.iter().map(|&c| amps[r | c]));
    }
    z
}

/// `ρ_A = Tr_B |ψ⟩⟨ψ|` as a dense Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    dim: usize,
    entries: Vec<C64>,
}

impl ReducedDensity {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise deviation `|ρ_ij - conj(ρ_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `Tr ρ²`, the squared Frobenius norm for a Hermitian matrix.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues (real parts), ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev: Vec<f64> = linalg::eigenvalues(&self.entries, self.dim)?.into_iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Ok(ev)
    }

    /// Hermitian within 1e-12, unit trace within 1e-12, smallest eigenvalue ≥ -1e-10.
    pub fn check_invariants(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > 1e-12 {
            return Err(Error::Numerical(format!("reduced density not Hermitian ({herm:e})")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::Numerical(format!("reduced density trace {tr}")));
        }
        let min = self.eigenvalues()?[0];
        if min < -1e-10 {
            return Err(Error::Numerical(format!("reduced density eigenvalue {min:e} < 0")));
        }
        Ok(())
    }
}

/// Reduced density matrix of subsystem A.
pub fn reduced_density(state: &PureState, part: &Bipartition) -> Result<ReducedDensity> {
    check_match(state, part)?;
    Ok(reduce_onto(state, part.mask()))
}

/// Reduced density matrix of the listed qubits, which may be all of them.
///
/// Row index bit t corresponds to the t-th listed qubit in ascending order.
pub fn reduced_density_of_qubits(state: &PureState, qubits: &[usize]) -> Result<ReducedDensity> {
    let mut mask = 0u32;
    for &q in qubits {
        if q >= state.n() {
            return Err(Error::InvalidQubit { n: state.n(), qubit: q });
        }
        mask |= 1 << q;
    }
    if mask == 0 {
        return Err(Error::InvalidMask { n: state.n(), mask });
    }
    Ok(reduce_onto(state, mask))
}

fn reduce_onto(state: &PureState, mask: u32) -> ReducedDensity {
    let rows = scatter_table(mask);
    let cols = scatter_table(!mask & full_mask(state.n()));
    let nb = cols.len();
    let z = coefficient_matrix(state, &rows, &cols);
    let dim = rows.len();
    let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        let zi = &z[i * nb..(i + 1) * nb];
        for j in i..dim {
            let zj = &z[j * nb..(j + 1) * nb];
            let g: C64 = zi.iter().zip(zj).map(|(a, b)| a * b.conj()).sum();
            entries[i * dim + j] = g;
            entries[j * dim + i] = g.conj();
        }
    }
    ReducedDensity { dim, entries }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurityResult {
    /// `π_AB = Tr ρ_A²`.
    pub purity: f64,
    /// `N_AB = 1/π_AB`.
    pub participation: f64,
    /// `n_AB = log2 N_AB`.
    pub effective_spins: f64,
}

impl PurityResult {
    pub fn from_purity(purity: f64) -> Self {
        let participation = 1.0 / purity;
        Self { purity, participation, effective_spins: participation.log2() }
    }
}

/// Purity across `part` from the Gram matrix of the coefficient matrix.
///
/// The Gram matrix is formed on whichever side is smaller, so the cost is
/// `O(min(N_A, N_B)² · max(N_A, N_B))`.
pub fn purity(state: &PureState, part: &Bipartition) -> Result<PurityResult> {
    check_match(state, part)?;
    let (rows, cols) = if part.n_a() <= part.n_b() {
        (part.scatter_a(), part.scatter_b())
    } else {
        (part.scatter_b(), part.scatter_a())
    };
    let z = coefficient_matrix(state, &rows, &cols);
    Ok(PurityResult::from_purity(gram_frobenius_sqr(&z, rows.len(), cols.len())))
}

/// `Σ_{j,j'} |G_jj'|²` for `G = Z Z†`, using the upper triangle only.
fn gram_frobenius_sqr(z: &[C64], m: usize, len: usize) -> f64 {
    let mut diag = 0.0;
    let mut off = 0.0;
    for i in 0..m {
        let zi = &z[i * len..(i + 1) * len];
        diag += zi.iter().map(|a| a.norm_sqr()).sum::<f64>().powi(2);
        for j in i + 1..m {
            let zj = &z[j * len..(j + 1) * len];
            let mut re = 0.0;
            let mut im = 0.0;
            for (a, b) in zi.iter().zip(zj) {
                // a * conj(b)
                re += a.re * b.re + a.im * b.im;
                im += a.im * b.re - a.re * b.im;
            }
            off += re * re + im * im;
        }
    }
    diag + 2.0 * off
}

/// Literal quadruple sum `Σ z_{jl} z̄_{j'l} z_{j'l'} z̄_{jl'}`; test oracle only.
pub fn purity_quadruple_sum(state: &PureState, part: &Bipartition) -> Result<f64> {
    check_match(state, part)?;
    if state.n() > ORACLE_MAX_QUBITS {
        return Err(Error::TooManyQubits { n: state.n(), max: ORACLE_MAX_QUBITS });
    }
    let amps = state.amplitudes();
    let sa = part.scatter_a();
    let sb = part.scatter_b();
    let mut total = C64::new(0.0, 0.0);
    for &j in &sa {
        for &jp in &sa {
            for &l in &sb {
                for &lp in &sb {
                    total += amps[j | l] * amps[jp | l].conj() * amps[jp | lp] * amps[j | lp].conj();
                }
            }
        }
    }
    Ok(total.re)
}
