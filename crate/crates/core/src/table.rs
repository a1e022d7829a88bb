//! Mean `N_AB` over balanced cuts for GHZ, W, cluster and random states.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fmt::f64_full;
use crate::spectra::{compute_distribution, BipartitionFamily};
use crate::statekit::{make_cluster1d, make_ghz, make_w, EnsembleKind, EnsembleSpec};
use crate::theory::asymptotic_model;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanParticipationRow {
    pub n: usize,
    pub ghz: f64,
    pub w: f64,
    pub cluster: f64,
    /// `1/μ` of the large-N random-state model.
    pub random: f64,
    /// Mean over the balanced cuts of one Haar sample, when requested.
    pub haar: Option<f64>,
}

/// GHZ, W and cluster columns are evaluated from the states over every
/// balanced cut; the random column is `N / (N_A + N_B - 1)`.
pub fn mean_participation_row(n: usize, haar_seed: Option<u64>) -> Result<MeanParticipationRow> {
    if n < 4 {
        return Err(Error::TooFewQubits { what: "table row", min: 4, n });
    }
    let family = BipartitionFamily::balanced(n)?;
    let mean = |state| compute_distribution(&state, &family).map(|d| d.mean_participation);
    let n_a = n / 2;
    let model = asymptotic_model(1 << n_a, 1 << (n - n_a));
    let haar = match haar_seed {
        Some(seed) => {
            // one stream per n keeps rows independent of the requested range
            let state = EnsembleSpec::new(EnsembleKind::Haar, n, seed).sample(n as u64)?;
            Some(mean(state)?)
        }
        None => None,
    };
    Ok(MeanParticipationRow {
        n,
        ghz: mean(make_ghz(n)?)?,
        w: mean(make_w(n)?)?,
        cluster: mean(make_cluster1d(n)?)?,
        random: 1.0 / model.mu,
        haar,
    })
}

pub fn mean_participation_table(nmin: usize, nmax: usize, haar_seed: Option<u64>) -> Result<Vec<MeanParticipationRow>> {
    if nmin > nmax {
        return Err(Error::InvalidArgument(format!("empty range {nmin}..={nmax}")));
    }
    (nmin..=nmax).map(|n| mean_participation_row(n, haar_seed)).collect()
}

/// CSV with columns `n,ghz,w,cluster,random` and a trailing `haar` column
/// when any row carries one.
pub fn table_csv(rows: &[MeanParticipationRow]) -> String {
    let with_haar = rows.iter().any(|r| r.haar.is_some());
    let mut out = String::from("n,ghz,w,cluster,random");
    if with_haar {
        out.push_str(",haar");
    }
    out.push('\n');
    for r in rows {
        let _ =
            write!(out, "{},{},{},{},{}", r.n, f64_full(r.ghz), f64_full(r.w), f64_full(r.cluster), f64_full(r.random));
        if with_haar {
            let _ = write!(out, ",{}", r.haar.map(f64_full).unwrap_or_default());
        }
        out.push('\n');
    }
    out
}
