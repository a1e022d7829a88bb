//! Eigenvalues of small dense complex matrices.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! QR iteration (Wilkinson shifts, Givens rotations) with deflation. Only
//! eigenvalues are produced; no Schur vectors are accumulated.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative size below which a subdiagonal entry is treated as zero.
pub const DEFLATION_TOLERANCE: f64 = 1e-12;

/// QR sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of a 4×4 complex matrix. Order is unspecified.
pub fn eig4(matrix: &[[C64; 4]; 4]) -> Result<[C64; 4]> {
    let flat: Vec<C64> = matrix.iter().flatten().copied().collect();
    let ev = eigenvalues(&flat, 4)?;
    Ok([ev[0], ev[1], ev[2], ev[3]])
}

/// Eigenvalues of a `dim × dim` complex matrix given in row-major order.
pub fn eigenvalues(matrix: &[C64], dim: usize) -> Result<Vec<C64>> {
    if matrix.len() != dim * dim {
        return Err(Error::InvalidArgument(format!("matrix has {} entries, expected {}", matrix.len(), dim * dim)));
    }
    if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("non-finite matrix entry".into()));
    }
    let mut h = Dense { dim, data: matrix.to_vec() };
    h.reduce_to_hessenberg();
    h.hessenberg_qr()
}

struct Dense {
    dim: usize,
    data: Vec<C64>,
}

impl Dense {
    #[inline]
    fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn reduce_to_hessenberg(&mut self) {
        let n = self.dim;
        for k in 0..n.saturating_sub(2) {
            let mut v: Vec<C64> = (k + 1..n).map(|i| self.at(i, k)).collect();
            let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if xnorm == 0.0 {
                continue;
            }
            let x0 = v[0];
            let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
            // v = x + e^{i arg x0} ‖x‖ e1 avoids cancellation
            v[0] = x0 + phase * xnorm;
            let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm_sqr == 0.0 {
                continue;
            }
            let beta = 2.0 / vnorm_sqr;

            // left: rows k+1.., P = I - β v v*
            for j in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for (t, vi) in v.iter().enumerate() {
                    s += vi.conj() * self.at(k + 1 + t, j);
                }
                s *= beta;
                for (t, vi) in v.iter().enumerate() {
                    *self.at_mut(k + 1 + t, j) -= vi * s;
                }
            }
            // right: columns k+1..
            for i in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for (t, vi) in v.iter().enumerate() {
                    s += self.at(i, k + 1 + t) * vi;
                }
                s *= beta;
                for (t, vi) in v.iter().enumerate() {
                    *self.at_mut(i, k + 1 + t) -= s * vi.conj();
                }
            }
            for i in k + 2..n {
                *self.at_mut(i, k) = C64::new(0.0, 0.0);
            }
        }
    }

    fn hessenberg_qr(&mut self) -> Result<Vec<C64>> {
        let n = self.dim;
        let mut eig = vec![C64::new(0.0, 0.0); n];
        if n == 0 {
            return Ok(eig);
        }
        let norm = self.frobenius();
        let floor = DEFLATION_TOLERANCE * norm;
        let mut hi = n - 1;
        let mut sweeps = 0usize;
        let mut total = 0usize;
        let budget = MAX_SWEEPS_PER_EIGENVALUE * n;

        loop {
            if hi == 0 {
                eig[0] = self.at(0, 0);
                break;
            }
            // find the start of the unreduced block ending at `hi`
            let mut lo = hi;
            while lo > 0 {
                let sub = self.at(lo, lo - 1).norm();
                let local = self.at(lo, lo).norm() + self.at(lo - 1, lo - 1).norm();
                if sub <= floor || sub <= f64::EPSILON * local {
                    *self.at_mut(lo, lo - 1) = C64::new(0.0, 0.0);
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                eig[hi] = self.at(hi, hi);
                hi -= 1;
                sweeps = 0;
                continue;
            }

            sweeps += 1;
            total += 1;
            if total > budget {
                return Err(Error::Numerical(format!("QR iteration did not converge after {total} sweeps")));
            }
            let shift = if sweeps % 11 == 10 {
                // exceptional shift to break cycles
                let a = self.at(hi, hi);
                a + C64::new(self.at(hi, hi - 1).norm() * 0.75, 0.0)
            } else {
                self.wilkinson_shift(hi)
            };
            self.qr_sweep(lo, hi, shift);
        }
        Ok(eig)
    }

    /// Eigenvalue of the trailing 2×2 block of the active window closest to
    /// its bottom-right entry.
    fn wilkinson_shift(&self, hi: usize) -> C64 {
        let a = self.at(hi - 1, hi - 1);
        let b = self.at(hi - 1, hi);
        let c = self.at(hi, hi - 1);
        let d = self.at(hi, hi);
        let half_tr = (a + d) * 0.5;
        let disc = ((a - d) * 0.5).powi(2) + b * c;
        let root = disc.sqrt();
        let l1 = half_tr + root;
        let l2 = half_tr - root;
        if (l1 - d).norm() <= (l2 - d).norm() {
            l1
        } else {
            l2
        }
    }

    /// One explicit shifted QR step on the window `lo..=hi`.
    fn qr_sweep(&mut self, lo: usize, hi: usize, shift: C64) {
        for k in lo..=hi {
            *self.at_mut(k, k) -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(self.at(k, k), self.at(k + 1, k));
            for j in k..=hi {
                let x = self.at(k, j);
                let y = self.at(k + 1, j);
                *self.at_mut(k, j) = x * c + s * y;
                *self.at_mut(k + 1, j) = -s.conj() * x + y * c;
            }
            rotations.push((c, s));
        }
        for (t, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + t;
            for i in lo..=(k + 1).min(hi) {
                let x = self.at(i, k);
                let y = self.at(i, k + 1);
                *self.at_mut(i, k) = x * c + y * s.conj();
                *self.at_mut(i, k + 1) = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            *self.at_mut(k, k) += shift;
        }
    }
}

/// Rotation `[[c, s], [-s̄, c]]` with real `c` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let an = a.norm();
    let r = an.hypot(b.norm());
    if r == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}
