//! Families of bipartitions and the distribution of `N_AB` over them.
//!
//! Masks are always visited in ascending numeric order. For even `n` the
//! balanced family holds every unordered cut twice (mask and complement),
//! so the family size is the binomial coefficient `C(n, n/2)`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::f64_full;
use crate::purity::{purity, Bipartition, PurityResult};
use crate::statekit::{PureState, MAX_QUBITS};

/// Above this many distinct values a histogram is binned instead of exact.
pub const MAX_DISCRETE_VALUES: usize = 32;

/// Values closer than this are one bar in a discrete histogram.
pub const DISTINCT_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_BINS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySelector {
    /// `n_A = ⌊n/2⌋`.
    Balanced,
    /// Every non-trivial mask.
    AllSizes,
    FixedSize(usize),
    /// `n_A = 1`.
    MaxUnbalanced,
}

impl std::fmt::Display for FamilySelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilySelector::Balanced => f.write_str("balanced"),
            FamilySelector::AllSizes => f.write_str("all-sizes"),
            FamilySelector::FixedSize(k) => write!(f, "fixed-size:{k}"),
            FamilySelector::MaxUnbalanced => f.write_str("max-unbalanced"),
        }
    }
}

impl std::str::FromStr for FamilySelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "balanced" => Ok(FamilySelector::Balanced),
            "all" | "all-sizes" => Ok(FamilySelector::AllSizes),
            "max-unbalanced" => Ok(FamilySelector::MaxUnbalanced),
            other => {
                let size = other
                    .strip_prefix("fixed-size:")
                    .or_else(|| other.strip_prefix("size:"))
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown family '{other}'")))?;
                Ok(FamilySelector::FixedSize(size))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartitionFamily {
    n: usize,
    selector: FamilySelector,
}

impl BipartitionFamily {
    pub fn new(n: usize, selector: FamilySelector) -> Result<Self> {
        if !(2..=MAX_QUBITS).contains(&n) {
            return Err(Error::InvalidArgument(format!("family needs 2..={MAX_QUBITS} qubits, got {n}")));
        }
        if let FamilySelector::FixedSize(k) = selector {
            if k == 0 || k >= n {
                return Err(Error::InvalidArgument(format!("subsystem size {k} invalid for {n} qubits")));
            }
        }
        Ok(Self { n, selector })
    }

    pub fn balanced(n: usize) -> Result<Self> {
        Self::new(n, FamilySelector::Balanced)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn selector(&self) -> FamilySelector {
        self.selector
    }

    /// The fixed `n_A` of this family, if it has one.
    pub fn subsystem_size(&self) -> Option<usize> {
        match self.selector {
            FamilySelector::Balanced => Some(self.n / 2),
            FamilySelector::AllSizes => None,
            FamilySelector::FixedSize(k) => Some(k),
            FamilySelector::MaxUnbalanced => Some(1),
        }
    }

    /// Number of masks, `C(n, n_A)` or `2^n - 2`.
    pub fn size(&self) -> u64 {
        match self.subsystem_size() {
            Some(k) => binomial(self.n as u64, k as u64),
            None => (1u64 << self.n) - 2,
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Masks of `family` in ascending numeric order.
pub fn enumerate_masks(family: &BipartitionFamily) -> Vec<Bipartition> {
    let n = family.n;
    let masks: Vec<u32> = match family.subsystem_size() {
        Some(k) => FixedPopcount::new(n, k).collect(),
        None => (1..(1u32 << n) - 1).collect(),
    };
    masks.into_iter().map(|m| Bipartition::new(n, m).expect("enumerated masks are valid")).collect()
}

/// n-bit words with exactly `k` set bits, ascending (Gosper's hack).
#[derive(Debug, Clone)]
pub struct FixedPopcount {
    next: Option<u32>,
    limit: u32,
}

impl FixedPopcount {
    pub fn new(n: usize, k: usize) -> Self {
        let limit = if n >= 32 { u32::MAX } else { 1u32 << n };
        let first = match k {
            0 => 0,
            k if k >= 32 => u32::MAX,
            k => (1u32 << k) - 1,
        };
        let next = (k <= n && (n >= 32 || first < limit)).then_some(first);
        Self { next, limit }
    }
}

impl Iterator for FixedPopcount {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur.checked_add(low);
            ripple.and_then(|r| {
                let ones = ((r ^ cur) >> 2) / low;
                let nxt = r | ones;
                (nxt < self.limit).then_some(nxt)
            })
        };
        Some(cur)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub var_population: f64,
    pub var_sample: f64,
    pub std_population: f64,
    pub std_sample: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Summary {
    /// Two-pass mean and variance; `var_sample` is 0 for a single value.
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        let var_population = ss / count as f64;
        let var_sample = if count > 1 { ss / (count - 1) as f64 } else { 0.0 };
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            mean,
            var_population,
            var_sample,
            std_population: var_population.sqrt(),
            std_sample: var_sample.sqrt(),
            min,
            max,
            count,
        })
    }
}

/// `N_AB` for every cut of a family, with summary statistics of `N_AB`.
#[derive(Debug, Clone)]
pub struct EntanglementDistribution {
    pub n: usize,
    pub family: FamilySelector,
    pub entries: Vec<(Bipartition, PurityResult)>,
    pub mean_participation: f64,
    pub var_population: f64,
    pub var_sample: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl EntanglementDistribution {
    pub fn participations(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, r)| r.participation).collect()
    }

    pub fn purities(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, r)| r.purity).collect()
    }

    /// Drops every entry whose complement mask is also present and smaller,
    /// leaving one entry per unordered cut. Statistics are recomputed.
    pub fn deduplicated(&self) -> Result<Self> {
        let present: std::collections::HashSet<u32> = self.entries.iter().map(|(p, _)| p.mask()).collect();
        let entries: Vec<_> = self
            .entries
            .iter()
            .filter(|(p, _)| {
                let c = p.complement().mask();
                !(present.contains(&c) && c < p.mask())
            })
            .copied()
            .collect();
        Self::from_entries(self.n, self.family, entries)
    }

    fn from_entries(n: usize, family: FamilySelector, entries: Vec<(Bipartition, PurityResult)>) -> Result<Self> {
        let values: Vec<f64> = entries.iter().map(|(_, r)| r.participation).collect();
        let s = Summary::of(&values)?;
        Ok(Self {
            n,
            family,
            entries,
            mean_participation: s.mean,
            var_population: s.var_population,
            var_sample: s.var_sample,
            min: s.min,
            max: s.max,
            count: s.count,
        })
    }

    /// Spectrum CSV: `mask_hex,n_A,purity,participation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mask_hex,n_A,purity,participation\n");
        for (part, r) in &self.entries {
            let _ =
                writeln!(out, "{:#x},{},{},{}", part.mask(), part.n_a(), f64_full(r.purity), f64_full(r.participation));
        }
        out
    }

    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct SummaryFile<'a> {
            n: usize,
            family: &'a str,
            count: usize,
            mean_participation: f64,
            var_population: f64,
            var_sample: f64,
            min: f64,
            max: f64,
        }
        let family = self.family.to_string();
        Ok(serde_json::to_string_pretty(&SummaryFile {
            n: self.n,
            family: &family,
            count: self.count,
            mean_participation: self.mean_participation,
            var_population: self.var_population,
            var_sample: self.var_sample,
            min: self.min,
            max: self.max,
        })?)
    }
}

/// Evaluates the purity of `state` on every cut of `family`.
pub fn compute_distribution(state: &PureState, family: &BipartitionFamily) -> Result<EntanglementDistribution> {
    if state.n() != family.n() {
        return Err(Error::QubitMismatch { state: state.n(), part: family.n() });
    }
    let masks = enumerate_masks(family);
    let entries =
        masks.into_par_iter().map(|part| purity(state, &part).map(|r| (part, r))).collect::<Result<Vec<_>>>()?;
    EntanglementDistribution::from_entries(family.n(), family.selector(), entries)
}

/// Summary statistics of `N_AB`.
pub fn summarize(dist: &EntanglementDistribution) -> Result<Summary> {
    Summary::of(&dist.participations())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Binning {
    pub bins: usize,
}

impl Default for Binning {
    fn default() -> Self {
        Self { bins: DEFAULT_BINS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HistogramKind {
    /// One bar per distinct value; centers are the values themselves.
    Discrete,
    /// Equal-width bins over `[min, max]`.
    Binned,
}

/// Contiguous bins: bin `i` spans `bin_edges[i]..bin_edges[i + 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub kind: HistogramKind,
    pub bin_edges: Vec<f64>,
    pub centers: Vec<f64>,
    pub densities: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.bin_edges.windows(2).map(|w| w[1] - w[0])
    }

    /// `Σ density_i · width_i`.
    pub fn mass(&self) -> f64 {
        self.densities.iter().zip(self.widths()).map(|(d, w)| d * w).sum()
    }

    /// Histogram TSV: `bin_center<TAB>density<TAB>count`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("bin_center\tdensity\tcount\n");
        for ((c, d), k) in self.centers.iter().zip(&self.densities).zip(&self.counts) {
            let _ = writeln!(out, "{}\t{}\t{}", f64_full(*c), f64_full(*d), k);
        }
        out
    }
}

/// Histogram of `N_AB`.
///
/// With at most [`MAX_DISCRETE_VALUES`] distinct values each value gets its
/// own bar; bar edges sit halfway between neighbouring values, and the outer
/// bars extend by half the adjacent gap (by 1/2 when there is a single value).
pub fn histogram(dist: &EntanglementDistribution, binning: Binning) -> Result<Histogram> {
    histogram_of(&dist.participations(), binning)
}

/// [`histogram`] over raw values.
pub fn histogram_of(values: &[f64], binning: Binning) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if binning.bins == 0 {
        return Err(Error::InvalidArgument("histogram needs at least one bin".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let total = sorted.len() as f64;

    // group values within DISTINCT_TOLERANCE of the previous one
    let mut groups: Vec<(f64, usize)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &v in &sorted {
        match groups.last_mut() {
            Some((sum, count)) if v - last <= DISTINCT_TOLERANCE => {
                *sum += v;
                *count += 1;
            }
            _ => groups.push((v, 1)),
        }
        last = v;
    }

    if groups.len() <= MAX_DISCRETE_VALUES {
        let centers: Vec<f64> = groups.iter().map(|&(s, c)| s / c as f64).collect();
        let counts: Vec<usize> = groups.iter().map(|&(_, c)| c).collect();
        let mut edges = Vec::with_capacity(centers.len() + 1);
        if centers.len() == 1 {
            edges.extend([centers[0] - 0.5, centers[0] + 0.5]);
        } else {
            let m = centers.len();
            edges.push(centers[0] - 0.5 * (centers[1] - centers[0]));
            edges.extend(centers.windows(2).map(|w| 0.5 * (w[0] + w[1])));
            edges.push(centers[m - 1] + 0.5 * (centers[m - 1] - centers[m - 2]));
        }
        let densities = counts.iter().zip(edges.windows(2)).map(|(&c, w)| c as f64 / (total * (w[1] - w[0]))).collect();
        return Ok(Histogram { kind: HistogramKind::Discrete, bin_edges: edges, centers, densities, counts });
    }

    let lo = sorted[0];
    let hi = sorted[sorted.len() - 1];
    let bins = binning.bins;
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| if i == bins { hi } else { lo + width * i as f64 }).collect();
    let mut counts = vec![0usize; bins];
    for &v in &sorted {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let centers = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let densities = counts.iter().zip(edges.windows(2)).map(|(&c, w)| c as f64 / (total * (w[1] - w[0]))).collect();
    Ok(Histogram { kind: HistogramKind::Binned, bin_edges: edges, centers, densities, counts })
}
