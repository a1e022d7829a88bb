//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use entspec::statekit::{EnsembleKind, EnsembleSpec};
use entspec::{PureState, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn haar(n: usize, seed: u64, index: u64) -> PureState {
    EnsembleSpec::new(EnsembleKind::Haar, n, seed).sample(index).unwrap()
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random 2×2 unitary: e^{iα} [[a, b], [-b̄, ā]].
pub fn random_unitary2<R: Rng>(rng: &mut R) -> [[C64; 2]; 2] {
    let a = complex_normal(rng);
    let b = complex_normal(rng);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / norm, b / norm);
    let phase = C64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
    [[phase * a, phase * b], [-phase * b.conj(), phase * a.conj()]]
}

/// Composite Simpson rule on `intervals` (rounded up to even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

pub struct Moments {
    pub mean: f64,
    pub var: f64,
    /// Standard error of the mean.
    pub se_mean: f64,
    /// Standard error of the sample variance, `sqrt((m4 - var²)/S)`.
    pub se_var: f64,
}

pub fn moments(xs: &[f64]) -> Moments {
    let s = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / s;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (s - 1.0);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / s;
    Moments { mean, var, se_mean: (var / s).sqrt(), se_var: ((m4 - var * var) / s).sqrt() }
}

/// Uniform point on the real unit sphere S^{dim-1}.
pub fn real_sphere_point<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    g.into_iter().map(|x| x / norm).collect()
}

/// Characteristic polynomial coefficients `c[0] + c[1] x + ... + c[n] x^n`
/// (monic) by the Faddeev–LeVerrier recursion.
pub fn char_poly(a: &[[C64; 4]; 4]) -> [C64; 5] {
    let zero = C64::new(0.0, 0.0);
    let mut c = [zero; 5];
    c[4] = C64::new(1.0, 0.0);
    let mut m = [[zero; 4]; 4];
    for k in 1..=4 {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = [[zero; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                next[i][j] = (0..4).map(|t| a[i][t] * m[t][j]).sum::<C64>();
            }
            next[i][i] += c[4 - k + 1];
        }
        m = next;
        // c_{n-k} = -tr(A M_k) / k
        let mut tr = zero;
        for i in 0..4 {
            for t in 0..4 {
                tr += a[i][t] * m[t][i];
            }
        }
        c[4 - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &coef in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + coef;
    }
    (p, dp)
}

/// Roots of a monic polynomial by Durand–Kerner iteration, Newton-polished.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let deg = c.len() - 1;
    let bound = 1.0 + c[..deg].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..deg).map(|k| seed.powu(k as u32) * bound * 0.5).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let (p, _) = horner(c, roots[i]);
            let denom: C64 = (0..deg).filter(|&j| j != i).map(|j| roots[i] - roots[j]).product();
            let step = p / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(c, *r);
            if dp.norm() > 0.0 {
                *r -= p / dp;
            }
        }
    }
    roots
}

/// Smallest worst-case distance over all pairings of two 4-element multisets.
pub fn multiset_distance(a: &[C64; 4], b: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    let mut perm = [0usize, 1, 2, 3];
    permutations(&mut perm, 0, &mut |p| {
        let worst = (0..4).map(|i| (a[i] - b[p[i]]).norm()).fold(0.0, f64::max);
        best = best.min(worst);
    });
    best
}

fn permutations(p: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}
