//! Acceptance criteria. Prints one line per sub-check and one PASS/FAIL
//! line per criterion; exits non-zero if any criterion fails.

mod common;

use std::time::Instant;

use common::{char_poly, complex_normal, haar, moments, multiset_distance, poly_roots, random_unitary2, rng, simpson};
use entspec::linalg::eig4;
use entspec::measures::{concurrence, q_measure, tangle1, tangle_report};
use entspec::purity::{purity, purity_quadruple_sum};
use entspec::spectra::{compute_distribution, enumerate_masks, histogram, summarize, Binning};
use entspec::statekit::{make_basis, make_bell_pairs, make_ghz, make_product, make_w, EnsembleKind, EnsembleSpec};
use entspec::table::mean_participation_table;
use entspec::theory::{asymptotic_model, exact_moments, participation_pdf, purity_pdf, w_participation, xm_split};
use entspec::{Bipartition, BipartitionFamily, FamilySelector, MomentProvider, PureState, Summary, C64};
use rayon::prelude::*;

struct Criterion {
    id: &'static str,
    title: &'static str,
    failures: usize,
}

impl Criterion {
    fn new(id: &'static str, title: &'static str) -> Self {
        Self { id, title, failures: 0 }
    }

    fn check(&mut self, ok: bool, what: impl AsRef<str>) {
        if !ok {
            self.failures += 1;
        }
        println!("    {} {}", if ok { "ok  " } else { "MISS" }, what.as_ref());
    }

    fn close(to: f64, got: f64, tol: f64) -> bool {
        (got - to).abs() <= tol
    }

    fn finish(self, started: Instant) -> bool {
        let ok = self.failures == 0;
        println!(
            "[{}] {} {} ({:.2} s{})",
            if ok { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            started.elapsed().as_secs_f64(),
            if ok { String::new() } else { format!(", {} sub-check(s) missed", self.failures) }
        );
        ok
    }
}

fn ac1() -> bool {
    let started = Instant::now();
    let mut c = Criterion::new("AC1", "mean participation table, n = 5..12");
    const W: [f64; 8] = [1.923, 2.0, 1.96, 2.0, 1.976, 2.0, 1.984, 2.0];
    const CLUSTER: [f64; 8] = [3.6, 5.4, 6.171, 8.743, 10.349, 14.206, 17.176, 23.156];
    const RANDOM: [f64; 8] = [2.909, 4.267, 5.565, 8.258, 10.894, 16.254, 21.558, 32.252];
    let rows = mean_participation_table(5, 12, None).unwrap();
    for (i, row) in rows.iter().enumerate() {
        let n = row.n;
        let exact_w = w_participation(n, n / 2).unwrap();
        c.check(Criterion::close(2.0, row.ghz, 1e-9), format!("n={n:2} ghz     {:.12}", row.ghz));
        c.check(
            Criterion::close(exact_w, row.w, 1e-9) && Criterion::close(W[i], row.w, 5e-4),
            format!("n={n:2} w       {:.6} (closed form {:.6}, table {})", row.w, exact_w, W[i]),
        );
        c.check(
            Criterion::close(CLUSTER[i], row.cluster, 5e-4),
            format!("n={n:2} cluster {:.6} (table {}, diff {:.1e})", row.cluster, CLUSTER[i], row.cluster - CLUSTER[i]),
        );
        c.check(
            Criterion::close(RANDOM[i], row.random, 5e-4),
            format!("n={n:2} random  {:.6} (table {})", row.random, RANDOM[i]),
        );
    }
    let secs = started.elapsed().as_secs_f64();
    c.check(secs < 60.0, format!("runtime {secs:.2} s < 60 s"));
    c.finish(started)
}

fn sorted_participations(state: &PureState, sel: FamilySelector) -> Vec<f64> {
    let family = BipartitionFamily::new(state.n(), sel).unwrap();
    let mut v = compute_distribution(state, &family).unwrap().participations();
    v.sort_by(f64::total_cmp);
    v
}

fn ac2() -> bool {
    let started = Instant::now();
    let mut c = Criterion::new("AC2", "three-qubit exact distributions");
    let mut r = rng(3);
    let single = |u: [[C64; 2]; 2]| PureState::new(1, vec![u[0][0], u[1][0]]).unwrap();
    let product = make_product(
        &make_product(&single(random_unitary2(&mut r)), &single(random_unitary2(&mut r))).unwrap(),
        &single(random_unitary2(&mut r)),
    )
    .unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[0b000] = C64::new(h, 0.0);
    amps[0b011] = C64::new(h, 0.0);
    let pair = PureState::new(3, amps).unwrap();
    let cases: [(&str, PureState, [f64; 3]); 3] = [
        ("factorized", product, [1.0; 3]),
        ("GHZ(3)", make_ghz(3).unwrap(), [2.0; 3]),
        ("(|000>+|110>)/sqrt2", pair, [1.0, 2.0, 2.0]),
    ];
    for (name, state, expected) in cases {
        for sel in [FamilySelector::MaxUnbalanced, FamilySelector::AllSizes] {
            let got = sorted_participations(&state, sel);
            let want: Vec<f64> = if sel == FamilySelector::AllSizes {
                // complements repeat each single-qubit cut
                expected.iter().flat_map(|&v| [v, v]).collect()
            } else {
                expected.to_vec()
            };
            let ok = got.len() == want.len() && got.iter().zip(&want).all(|(g, w)| (g - w).abs() <= 1e-10);
            c.check(ok, format!("{name:22} {sel:14} {got:?}"));
        }
    }
    c.finish(started)
}

fn ac3() -> bool {
    let started = Instant::now();
    let mut c = Criterion::new("AC3", "Bell x Bell pair product");
    let bb = make_bell_pairs(2).unwrap();
    let dist = compute_distribution(&bb, &BipartitionFamily::balanced(4).unwrap()).unwrap();
    let s = summarize(&dist).unwrap();
    c.check(s.count == 6, format!("balanced cuts {}", s.count));
    c.check(Criterion::close(3.0, s.mean, 1e-12), format!("mean N_AB {:.15}", s.mean));
    c.check(Criterion::close(1.549, s.std_sample, 0.01), format!("sample sigma {:.6}", s.std_sample));
    let q_bb = q_measure(&bb).unwrap();
    let q_ghz = q_measure(&make_ghz(4).unwrap()).unwrap();
    c.check(Criterion::close(1.0, q_bb, 1e-10), format!("Q(Bell x Bell) {q_bb:.15}"));
    c.check(Criterion::close(1.0, q_ghz, 1e-10), format!("Q(GHZ(4))      {q_ghz:.15}"));
    c.finish(started)
}

fn ac4() -> bool {
    let started = Instant::now();
    let mut c = Criterion::new("AC4", "random-state statistics");
    let spec = EnsembleSpec::new(EnsembleKind::Haar, 10, 20240610);
    let part = Bipartition::new(10, 0x1f).unwrap();
    let values: Vec<f64> =
        (0..1000u64).into_par_iter().map(|i| purity(&spec.sample(i).unwrap(), &part).unwrap().purity).collect();
    let m = moments(&values);
    let target = 63.0 / 1024.0;
    let rel = (m.mean - target).abs() / target;
    c.check(rel <= 0.05, format!("n=10 mean purity {:.6} vs {target:.6} (rel {rel:.4})", m.mean));
    let var_ratio = m.var / (2.0 / 1024f64.powi(2));
    c.check((0.5..=2.0).contains(&var_ratio), format!("n=10 sample variance / (2/N^2) = {var_ratio:.4}"));

    let one = EnsembleSpec::new(EnsembleKind::Haar, 12, 20240610).sample(0).unwrap();
    let dist = compute_distribution(&one, &BipartitionFamily::balanced(12).unwrap()).unwrap();
    let rel = (dist.mean_participation / 32.252 - 1.0).abs();
    c.check(
        dist.count == 924 && rel <= 0.05,
        format!("n=12 mean N_AB {:.4} over {} cuts (rel {rel:.4})", dist.mean_participation, dist.count),
    );
    let p = Summary::of(&dist.purities()).unwrap();
    let ratio = p.std_population / p.mean;
    c.check(ratio <= 0.05, format!("n=12 purity sigma/mu {ratio:.5}"));
    c.finish(started)
}

fn ac5() -> bool {
    let started = Instant::now();
    let mut c = Criterion::new("AC5", "moment formulas vs Monte Carlo");
    for (n, n_a) in [(3usize, 1usize), (4, 2), (5, 2)] {
        let (na, nb) = (1usize << n_a, 1usize << (n - n_a));
        let model = exact_moments(na, nb, &MomentProvider::exact_sphere(na * nb).unwrap()).unwrap();
        let spec = EnsembleSpec::new(EnsembleKind::PhaseSphere, n, 1000 + n as u64);
        let part = Bipartition::new(n, (1 << n_a) - 1).unwrap();
        let values: Vec<f64> =
            (0..100_000u64).into_par_iter().map(|i| purity(&spec.sample(i).unwrap(), &part).unwrap().purity).collect();
        let m = moments(&values);
        c.check(
            (m.mean - model.mu).abs() <= 3.0 * m.se_mean,
            format!("N={:2} mean     MC {:.6} +- {:.1e}, formula {:.6}", na * nb, m.mean, m.se_mean, model.mu),
        );
        c.check(
            (m.var - model.sigma2).abs() <= 3.0 * m.se_var,
            format!("N={:2} variance MC {:.4e} +- {:.1e}, formula {:.4e}", na * nb, m.var, m.se_var, model.sigma2),
        );
    }
    let mut pairs = 0;
    let mut worst_mu = 0.0f64;
    let mut var_ok = true;
    for a in 2..=6u32 {
        for b in a..=(12 - a) {
            let (na, nb) = (1usize << a, 1usize << b);
            let delta = exact_moments(na, nb, &MomentProvider::delta(na * nb).unwrap()).unwrap();
            let limit = asymptotic_model(na, nb);
            worst_mu = worst_mu.max((delta.mu / limit.mu - 1.0).abs());
            var_ok &= (0.5..=2.0).contains(&(delta.sigma2 / limit.sigma2));
            pairs += 1;
        }
    }
    c.check(
        pairs >= 20 && worst_mu <= 1e-14,
        format!("delta provider mean over {pairs} pairs, worst rel {worst_mu:.1e}"),
    );
    c.check(var_ok, "delta provider variance within factor 2 of 2/N^2");
    c.finish(started)
}

fn ac6() -> bool {
    let started = Instant::now();
    let mut c = Criterion::new("AC6", "concurrence and tangles");
    let bell = concurrence(&make_ghz(2).unwrap(), 0, 1).unwrap().value;
    c.check(Criterion::close(1.0, bell, 1e-9), format!("C(Bell) {bell:.15}"));
    let ghz = concurrence(&make_ghz(3).unwrap(), 0, 2).unwrap().value;
    c.check(Criterion::close(0.0, ghz, 1e-9), format!("C(GHZ(3) pair) {ghz:.3e}"));
    let w3 = make_w(3).unwrap();
    let cw = concurrence(&w3, 1, 2).unwrap().value;
    c.check(Criterion::close(2.0 / 3.0, cw, 1e-9), format!("C(W(3) pair) {cw:.15}"));
    let t1 = tangle1(&w3, 0).unwrap();
    c.check(Criterion::close(8.0 / 9.0, t1, 1e-10), format!("tau1(W(3)) {t1:.15}"));

    let mut violations = 0;
    for i in 0..100 {
        let rep = tangle_report(&haar(6, 606, i)).unwrap();
        violations += rep.tau1.iter().zip(&rep.tau2).filter(|(t1, t2)| **t1 < **t2 - 1e-10).count();
    }
    c.check(violations == 0, format!("CKW on 100 Haar states, n=6: {violations} violations"));

    let spec = EnsembleSpec::new(EnsembleKind::Haar, 10, 1010);
    let reports: Vec<_> =
        (0..200u64).into_par_iter().map(|i| tangle_report(&spec.sample(i).unwrap()).unwrap()).collect();
    let count = (200 * 10) as f64;
    let tau1 = reports.iter().flat_map(|r| &r.tau1).sum::<f64>() / count;
    let tau2 = reports.iter().flat_map(|r| &r.tau2).sum::<f64>() / count;
    let target = 1.0 - 1.0 / 512.0;
    c.check(Criterion::close(target, tau1, 0.005), format!("n=10 mean tau1 {tau1:.6} vs {target:.6}"));
    c.check(tau2 <= 0.02, format!("n=10 mean tau2 {tau2:.6}"));
    c.finish(started)
}

fn ac7() -> bool {
    let started = Instant::now();
    let mut c = Criterion::new("AC7", "property suites");
    let mut r = rng(77);

    let mut bounds = 0usize;
    let mut bound_misses = 0usize;
    let mut complement = 0.0f64;
    let mut unitary = 0.0f64;
    let mut gram = 0.0f64;
    let mut xm = 0.0f64;
    for n in 2..=6 {
        let masks = enumerate_masks(&BipartitionFamily::new(n, FamilySelector::AllSizes).unwrap());
        for i in 0..100 {
            let psi = haar(n, 7000 + n as u64, i);
            let mut rotated = psi.clone();
            for q in 0..n {
                rotated = rotated.apply_single_qubit(q, &random_unitary2(&mut r)).unwrap();
            }
            for part in &masks {
                let p = purity(&psi, part).unwrap().purity;
                let floor = 1.0 / part.dim_a().min(part.dim_b()) as f64;
                bounds += 1;
                if !(p >= floor - 1e-12 && p <= 1.0 + 1e-12) {
                    bound_misses += 1;
                }
                complement = complement.max((p - purity(&psi, &part.complement()).unwrap().purity).abs());
                unitary = unitary.max((p - purity(&rotated, part).unwrap().purity).abs());
                gram = gram.max((p - purity_quadruple_sum(&psi, part).unwrap()).abs());
                let (x, m) = xm_split(&psi, part).unwrap();
                xm = xm.max((x + m - p).abs());
            }
        }
    }
    c.check(bound_misses == 0, format!("purity bounds: {bound_misses} of {bounds} evaluations outside"));
    c.check(complement <= 1e-12, format!("complement symmetry, max diff {complement:.1e}"));
    c.check(unitary <= 1e-10, format!("local-unitary invariance, max diff {unitary:.1e}"));
    c.check(gram <= 1e-10, format!("Gram vs quadruple sum, max diff {gram:.1e}"));
    c.check(xm <= 1e-10, format!("X + M = purity, max diff {xm:.1e}"));

    let mut pdf_err = 0.0f64;
    for model in [asymptotic_model(4, 8), asymptotic_model(32, 32), asymptotic_model(64, 64)] {
        let (lo, hi) = model.purity_range();
        let mass = simpson(|x| purity_pdf(&model, x), lo, hi, 8000);
        let (lo, hi) = model.participation_range();
        let ymass = simpson(|y| participation_pdf(&model, y).unwrap(), lo, hi, 20000);
        pdf_err = pdf_err.max((mass - 1.0).abs()).max((ymass - 1.0).abs());
    }
    c.check(pdf_err <= 1e-6, format!("pdf normalization, max error {pdf_err:.1e}"));

    let mut mass_err = 0.0f64;
    let states = [make_ghz(8).unwrap(), make_w(9).unwrap(), make_basis(6, 5).unwrap(), haar(11, 5, 0), haar(12, 5, 1)];
    for psi in &states {
        for sel in [FamilySelector::Balanced, FamilySelector::AllSizes] {
            let dist = compute_distribution(psi, &BipartitionFamily::new(psi.n(), sel).unwrap()).unwrap();
            for bins in [1, 7, 50] {
                mass_err = mass_err.max((histogram(&dist, Binning { bins }).unwrap().mass() - 1.0).abs());
            }
        }
    }
    c.check(mass_err <= 1e-9, format!("histogram mass, max error {mass_err:.1e}"));

    let mut eig_err = 0.0f64;
    for _ in 0..200 {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        m.iter_mut().flatten().for_each(|z| *z = complex_normal(&mut r));
        eig_err = eig_err.max(multiset_distance(&eig4(&m).unwrap(), &poly_roots(&char_poly(&m))));
    }
    c.check(eig_err <= 1e-8, format!("eig4 vs quartic oracle, max distance {eig_err:.1e}"));
    c.finish(started)
}

fn main() {
    let results = [ac1(), ac2(), ac3(), ac4(), ac5(), ac6(), ac7()];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
