use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use entspec::purity::purity;
use entspec::spectra::{compute_distribution, histogram, histogram_of, Binning, DEFAULT_BINS};
use entspec::statekit::{make_basis, make_bell_pairs, make_cluster1d, make_ghz, make_w};
use entspec::table::{mean_participation_table, table_csv};
use entspec::theory::{
    asymptotic_model, concentration_ratio, curve_tsv, density_curve, exact_moments, CurveKind, MomentSource,
};
use entspec::{
    Bipartition, BipartitionFamily, EnsembleKind, EnsembleSpec, FamilySelector, MomentProvider, PureState, Summary,
};

#[derive(Parser)]
#[command(name = "entspec", version, about = "Bipartite purity spectra of n-qubit pure states")]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a state as JSON.
    State(Source),
    /// Purity of one bipartition.
    Purity {
        #[command(flatten)]
        source: Source,
        /// Subsystem A as a hex bitmask, e.g. 0x7.
        #[arg(long)]
        mask: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Purities over a family of bipartitions: rows (csv), summary (json) or histogram (tsv).
    Spectrum {
        #[command(flatten)]
        source: Source,
        /// balanced, all-sizes, max-unbalanced or fixed-size:K.
        #[arg(long, default_value = "balanced")]
        family: FamilySelector,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        /// Keep one of each complementary pair of cuts.
        #[arg(long)]
        dedup: bool,
    },
    /// Monte Carlo over a random-state ensemble.
    Sample(SampleArgs),
    /// Gaussian model curves for random states.
    Theory(TheoryArgs),
    /// Q, pairwise concurrences and tangles as JSON.
    Measures(Source),
    /// Mean participation over balanced cuts for GHZ, W, cluster and random states.
    Table1 {
        #[arg(long, default_value_t = 5)]
        nmin: usize,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        /// Add a column from one Haar sample per row.
        #[arg(long)]
        haar_seed: Option<u64>,
    },
}

#[derive(Args)]
struct Source {
    /// Named state or ensemble.
    #[arg(long, value_enum)]
    kind: Option<StateKind>,
    /// Number of qubits.
    #[arg(long)]
    n: Option<usize>,
    /// Basis index for `basis`, sample index for ensembles.
    #[arg(long, default_value_t = 0)]
    index: u64,
    /// Seed for ensembles.
    #[arg(long)]
    seed: Option<u64>,
    /// Read the state from a JSON file instead.
    #[arg(long, value_name = "FILE")]
    state: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateKind {
    Basis,
    Ghz,
    W,
    Cluster,
    BellPairs,
    Haar,
    PhaseSphere,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ensemble {
    Haar,
    PhaseSphere,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum, default_value_t = Ensemble::Haar)]
    ensemble: Ensemble,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    count: u64,
    /// Per-sample purity on this hex mask.
    #[arg(long, conflicts_with = "family")]
    mask: Option<String>,
    /// Per-sample spectrum over this family.
    #[arg(long)]
    family: Option<FamilySelector>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Asymptotic,
    ExactSphere,
    FactorizedGaussian,
    Delta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pdf {
    Purity,
    Participation,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    n: usize,
    /// Qubits in A; defaults to n/2 rounded down.
    #[arg(long)]
    n_a: Option<usize>,
    #[arg(long, value_enum, default_value_t = Model::Asymptotic)]
    model: Model,
    #[arg(long, value_enum, default_value_t = Pdf::Participation)]
    pdf: Pdf,
    #[arg(long, default_value_t = 401)]
    points: usize,
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

enum Failure {
    Usage(String),
    Lib(entspec::Error),
    Io(io::Error),
}

impl From<entspec::Error> for Failure {
    fn from(e: entspec::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

fn parse_mask(text: &str) -> Outcome<u32> {
    let digits = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")).unwrap_or(text);
    u32::from_str_radix(digits, 16).or_else(|_| usage(format!("mask {text:?} is not a hex number")))
}

impl Source {
    fn load(&self) -> Outcome<PureState> {
        match (&self.state, self.kind) {
            (Some(_), Some(_)) => usage("give either --kind or --state, not both"),
            (None, None) => usage("a state source is required: --kind KIND --n N, or --state FILE"),
            (Some(path), None) => {
                if self.n.is_some() || self.seed.is_some() {
                    return usage("--n and --seed do not apply to --state");
                }
                let text = std::fs::read_to_string(path)?;
                Ok(PureState::from_json(&text)?)
            }
            (None, Some(kind)) => {
                let Some(n) = self.n else {
                    return usage("--kind needs --n");
                };
                let ensemble = |k| match self.seed {
                    Some(seed) => Ok(EnsembleSpec::new(k, n, seed).sample(self.index)?),
                    None => usage("random states need --seed"),
                };
                Ok(match kind {
                    StateKind::Basis => {
                        let k = usize::try_from(self.index).map_err(|_| Failure::Usage("index too large".into()))?;
                        make_basis(n, k)?
                    }
                    StateKind::Ghz => make_ghz(n)?,
                    StateKind::W => make_w(n)?,
                    StateKind::Cluster => make_cluster1d(n)?,
                    StateKind::BellPairs => {
                        if n % 2 != 0 {
                            return usage(format!("bell-pairs needs an even qubit count, got {n}"));
                        }
                        make_bell_pairs(n / 2)?
                    }
                    StateKind::Haar => ensemble(EnsembleKind::Haar)?,
                    StateKind::PhaseSphere => ensemble(EnsembleKind::PhaseSphere)?,
                })
            }
        }
    }
}

fn f64_full(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct PurityRecord {
    n: usize,
    mask: String,
    #[serde(rename = "n_A")]
    n_a: usize,
    purity: f64,
    participation: f64,
    effective_spins: f64,
}

fn cmd_purity(source: &Source, mask: &str, format: Format) -> Outcome<String> {
    let state = source.load()?;
    let part = Bipartition::new(state.n(), parse_mask(mask)?)?;
    let r = purity(&state, &part)?;
    match format {
        Format::Json => {
            let rec = PurityRecord {
                n: state.n(),
                mask: format!("{:#x}", part.mask()),
                n_a: part.n_a(),
                purity: r.purity,
                participation: r.participation,
                effective_spins: r.effective_spins,
            };
            Ok(serde_json::to_string_pretty(&rec)? + "\n")
        }
        Format::Csv => Ok(format!(
            "mask_hex,n_A,purity,participation\n{:#x},{},{},{}\n",
            part.mask(),
            part.n_a(),
            f64_full(r.purity),
            f64_full(r.participation)
        )),
        Format::Tsv => usage("purity supports --format json or csv"),
    }
}

fn cmd_spectrum(source: &Source, family: FamilySelector, format: Format, bins: usize, dedup: bool) -> Outcome<String> {
    let state = source.load()?;
    let family = BipartitionFamily::new(state.n(), family)?;
    let mut dist = compute_distribution(&state, &family)?;
    if dedup {
        dist = dist.deduplicated()?;
    }
    Ok(match format {
        Format::Csv => dist.to_csv(),
        Format::Json => dist.summary_json()? + "\n",
        Format::Tsv => histogram(&dist, Binning { bins })?.to_tsv(),
    })
}

#[derive(Serialize)]
struct SampleSummary {
    n: usize,
    ensemble: String,
    seed: u64,
    samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mask: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    count: usize,
    mean_purity: f64,
    var_purity_population: f64,
    var_purity_sample: f64,
    mean_participation: f64,
    var_population: f64,
    var_sample: f64,
    min: f64,
    max: f64,
}

fn cmd_sample(args: &SampleArgs) -> Outcome<String> {
    let kind = match args.ensemble {
        Ensemble::Haar => EnsembleKind::Haar,
        Ensemble::PhaseSphere => EnsembleKind::PhaseSphere,
    };
    if args.count == 0 {
        return usage("--count must be positive");
    }
    let spec = EnsembleSpec::new(kind, args.n, args.seed);
    // (sample, mask, n_A, purity, participation), in sample then mask order
    let rows: Vec<(u64, u32, usize, f64, f64)> = match (&args.mask, args.family) {
        (Some(mask), None) => {
            let part = Bipartition::new(args.n, parse_mask(mask)?)?;
            (0..args.count)
                .into_par_iter()
                .map(|i| {
                    let r = purity(&spec.sample(i)?, &part)?;
                    Ok((i, part.mask(), part.n_a(), r.purity, r.participation))
                })
                .collect::<entspec::Result<_>>()?
        }
        (None, Some(sel)) => {
            let family = BipartitionFamily::new(args.n, sel)?;
            let per_sample = (0..args.count)
                .into_par_iter()
                .map(|i| compute_distribution(&spec.sample(i)?, &family))
                .collect::<entspec::Result<Vec<_>>>()?;
            per_sample
                .iter()
                .zip(0u64..)
                .flat_map(|(d, i)| {
                    d.entries.iter().map(move |(p, r)| (i, p.mask(), p.n_a(), r.purity, r.participation))
                })
                .collect()
        }
        _ => return usage("sample needs exactly one of --mask or --family"),
    };
    let participations: Vec<f64> = rows.iter().map(|r| r.4).collect();
    match args.format {
        Format::Csv => {
            let mut out = String::from("sample,mask_hex,n_A,purity,participation\n");
            for (i, m, na, p, y) in &rows {
                let _ = writeln!(out, "{i},{m:#x},{na},{},{}", f64_full(*p), f64_full(*y));
            }
            Ok(out)
        }
        Format::Tsv => Ok(histogram_of(&participations, Binning { bins: args.bins })?.to_tsv()),
        Format::Json => {
            let purities: Vec<f64> = rows.iter().map(|r| r.3).collect();
            let p = Summary::of(&purities)?;
            let y = Summary::of(&participations)?;
            let rec = SampleSummary {
                n: args.n,
                ensemble: kind.to_string(),
                seed: args.seed,
                samples: args.count,
                mask: args.mask.as_ref().map(|_| format!("{:#x}", rows[0].1)),
                family: args.family.map(|f| f.to_string()),
                count: y.count,
                mean_purity: p.mean,
                var_purity_population: p.var_population,
                var_purity_sample: p.var_sample,
                mean_participation: y.mean,
                var_population: y.var_population,
                var_sample: y.var_sample,
                min: y.min,
                max: y.max,
            };
            Ok(serde_json::to_string_pretty(&rec)? + "\n")
        }
    }
}

#[derive(Serialize)]
struct ModelRecord {
    n: usize,
    #[serde(rename = "n_A")]
    n_a: usize,
    dim_a: usize,
    dim_b: usize,
    model: String,
    mu: f64,
    sigma2: f64,
    participation_at_mean: f64,
    concentration_ratio: f64,
}

fn cmd_theory(args: &TheoryArgs) -> Outcome<String> {
    let n_a = args.n_a.unwrap_or(args.n / 2);
    if n_a == 0 || n_a >= args.n {
        return usage(format!("--n-a must lie in 1..{}, got {n_a}", args.n));
    }
    if args.n > 26 {
        return usage(format!("--n {} exceeds 26 qubits", args.n));
    }
    let (dim_a, dim_b) = (1usize << n_a, 1usize << (args.n - n_a));
    let source = match args.model {
        Model::Asymptotic => None,
        Model::ExactSphere => Some(MomentSource::ExactSphere),
        Model::FactorizedGaussian => Some(MomentSource::FactorizedGaussian),
        Model::Delta => Some(MomentSource::Delta),
    };
    let model = match source {
        None => asymptotic_model(dim_a, dim_b),
        Some(src) => exact_moments(dim_a, dim_b, &MomentProvider::for_source(src, dim_a * dim_b)?)?,
    };
    match args.format {
        Format::Tsv => {
            let (kind, (lo, hi)) = match args.pdf {
                Pdf::Purity => (CurveKind::Purity, model.purity_range()),
                Pdf::Participation => (CurveKind::Participation, model.participation_range()),
            };
            let curve = density_curve(&model, kind, args.lo.unwrap_or(lo), args.hi.unwrap_or(hi), args.points)?;
            Ok(curve_tsv(&curve))
        }
        Format::Json => {
            let rec = ModelRecord {
                n: args.n,
                n_a,
                dim_a,
                dim_b,
                model: args.model.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default(),
                mu: model.mu,
                sigma2: model.sigma2,
                participation_at_mean: 1.0 / model.mu,
                concentration_ratio: concentration_ratio(dim_a, dim_b),
            };
            Ok(serde_json::to_string_pretty(&rec)? + "\n")
        }
        Format::Csv => usage("theory supports --format tsv or json"),
    }
}

fn run(cli: &Cli) -> Outcome<String> {
    match &cli.command {
        Command::State(source) => Ok(source.load()?.to_json()? + "\n"),
        Command::Purity { source, mask, format } => cmd_purity(source, mask, *format),
        Command::Spectrum { source, family, format, bins, dedup } => {
            cmd_spectrum(source, *family, *format, *bins, *dedup)
        }
        Command::Sample(args) => cmd_sample(args),
        Command::Theory(args) => cmd_theory(args),
        Command::Measures(source) => {
            let state = source.load()?;
            Ok(entspec::measures::tangle_report(&state)?.to_json()? + "\n")
        }
        Command::Table1 { nmin, nmax, haar_seed } => {
            Ok(table_csv(&mean_participation_table(*nmin, *nmax, *haar_seed)?))
        }
    }
}

fn configure_threads() -> Outcome<()> {
    let Ok(value) = std::env::var("ENTSPEC_THREADS") else {
        return Ok(());
    };
    let threads: usize = match value.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => return usage(format!("ENTSPEC_THREADS must be a positive integer, got {value:?}")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size the worker pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(&cli)).and_then(|text| {
        match &cli.out {
            Some(path) => std::fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (code, msg) = report(failure);
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

/// 2 for bad arguments or inputs, 3 for numerical failure, 1 for I/O.
fn report(failure: Failure) -> (u8, String) {
    match failure {
        Failure::Usage(m) => (2, m),
        Failure::Io(e) => (1, e.to_string()),
        Failure::Lib(entspec::Error::Io(e)) => (1, e.to_string()),
        Failure::Lib(e) if e.is_numerical() => (3, e.to_string()),
        Failure::Lib(e) => (2, e.to_string()),
    }
}
