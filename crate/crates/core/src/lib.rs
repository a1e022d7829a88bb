//! Multipartite entanglement of n-qubit pure states, characterized by the
//! distribution of bipartite purity over bipartitions.
//!
//! For a pure state |ψ⟩ and a split of the qubits into A and B, the purity
//! `π_AB = Tr ρ_A²` of the reduced state and its inverse, the participation
//! number `N_AB`, measure bipartite entanglement across the cut. Evaluating
//! them over a whole family of cuts (usually the balanced ones) gives a
//! distribution whose mean says how much entanglement there is and whose
//! width says how evenly it is shared.
//!
//! Modules:
//!
//! - [`statekit`]: named states (basis, GHZ, W, 1-D cluster, products) and
//!   seeded random ensembles.
//! - [`purity`]: bipartitions, reduced density matrices, purity.
//! - [`spectra`]: bipartition families, distributions, histograms.
//! - [`theory`]: closed forms and random-state statistics.
//! - [`measures`]: Q, concurrence, tangles.
//! - [`linalg`]: small dense complex eigenvalue solver.
//! - [`table`]: mean `N_AB` of the named states side by side.
//!
//! Basis convention: index `k = Σ_j b_j 2^j`, qubit 0 is the least
//! significant bit.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod purity;
pub mod spectra;
pub mod statekit;
pub mod table;
pub mod theory;

mod fmt;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use purity::{Bipartition, PurityResult, ReducedDensity};
pub use spectra::{BipartitionFamily, EntanglementDistribution, FamilySelector, Histogram, Summary};
pub use statekit::{EnsembleKind, EnsembleSpec, PureState};
pub use theory::{GaussianModel, MomentProvider};
