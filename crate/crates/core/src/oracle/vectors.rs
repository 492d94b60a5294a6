//! Right eigenvectors of a Hessenberg matrix by inverse iteration.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::C64;

const ZERO: C64 = Complex64::new(0.0, 0.0);
/// Eigenvalues closer than this (relative to `‖H‖`) share a cluster.
const CLUSTER_TOL: f64 = 1e-8;
const ACCEPT: f64 = 1e-12;
const MAX_SWEEPS: usize = 5;

/// LU factors of `H − σI` for Hessenberg `H`, pivoting between adjacent rows.
struct HessLu {
    n: usize,
    u: Vec<C64>,
    mult: Vec<C64>,
    swap: Vec<bool>,
}

impl HessLu {
    fn factor(h: &[C64], n: usize, sigma: C64, tiny: f64, u: Vec<C64>) -> Self {
        let mut u = u;
        u.clear();
        u.resize(n * n, ZERO);
        for i in 0..n {
            let lo = i.saturating_sub(1);
            u[i * n + lo..(i + 1) * n].copy_from_slice(&h[i * n + lo..(i + 1) * n]);
        }
        for i in 0..n {
            u[i * n + i] -= sigma;
        }
        let mut mult = vec![ZERO; n.saturating_sub(1)];
        let mut swap = vec![false; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            let (p, q) = (u[k * n + k], u[(k + 1) * n + k]);
            if q.norm() > p.norm() {
                swap[k] = true;
                for j in k..n {
                    u.swap(k * n + j, (k + 1) * n + j);
                }
            }
            if u[k * n + k] == ZERO {
                u[k * n + k] = Complex64::new(tiny, 0.0);
            }
            let l = u[(k + 1) * n + k] / u[k * n + k];
            mult[k] = l;
            u[(k + 1) * n + k] = ZERO;
            if l != ZERO {
                let (top, bot) = u.split_at_mut((k + 1) * n);
                let src = &top[k * n + k + 1..k * n + n];
                let dst = &mut bot[k + 1..n];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= l * s;
                }
            }
        }
        if n > 0 && u[n * n - 1] == ZERO {
            u[n * n - 1] = Complex64::new(tiny, 0.0);
        }
        Self { n, u, mult, swap }
    }

    fn solve(&self, b: &mut [C64]) {
        let n = self.n;
        for k in 0..n.saturating_sub(1) {
            if self.swap[k] {
                b.swap(k, k + 1);
            }
            let t = self.mult[k] * b[k];
            b[k + 1] -= t;
        }
        for i in (0..n).rev() {
            let row = &self.u[i * n + i..(i + 1) * n];
            let tail = &b[i + 1..];
            let s: C64 = row[1..].iter().zip(tail).map(|(a, x)| a * x).sum();
            b[i] = (b[i] - s) / row[0];
        }
    }
}

fn normalize(x: &mut [C64]) -> f64 {
    let big = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if big == 0.0 || !big.is_finite() {
        return big;
    }
    for z in x.iter_mut() {
        *z /= big;
    }
    let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in x.iter_mut() {
        *z /= nrm;
    }
    big * nrm
}

fn hess_residual(h: &[C64], n: usize, x: &[C64], lambda: C64) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        let lo = i.saturating_sub(1);
        let acc: C64 = h[i * n + lo..(i + 1) * n]
            .iter()
            .zip(&x[lo..])
            .map(|(a, b)| a * b)
            .sum::<C64>()
            - lambda * x[i];
        s += acc.norm_sqr();
    }
    s.sqrt()
}

fn orthogonalize(x: &mut [C64], basis: &[&[C64]]) {
    for b in basis {
        let p: C64 = b.iter().zip(x.iter()).map(|(u, v)| u.conj() * v).sum();
        for (v, u) in x.iter_mut().zip(b.iter()) {
            *v -= p * u;
        }
    }
}

/// Unit eigenvectors of `h` for each eigenvalue, in the Hessenberg basis.
///
/// Starts are drawn from a seeded generator. Within a cluster the shift is
/// nudged apart and each new vector gets one orthogonalization pass against
/// earlier members, kept only if it remains an eigenvector to working
/// precision (a Jordan block admits just one direction).
pub(crate) fn inverse_iteration(h: &[C64], n: usize, eigs: &[C64], seed: u64) -> Vec<Vec<C64>> {
    let hnorm = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let eps3 = hnorm * f64::EPSILON;
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(eigs.len());
    let mut buf = Vec::with_capacity(n * n);
    for (i, &lambda) in eigs.iter().enumerate() {
        let cluster: Vec<usize> = (0..i)
            .filter(|&j| (eigs[j] - lambda).norm() <= CLUSTER_TOL * hnorm)
            .collect();
        // nudge coincident shifts apart
        let mut sigma = lambda;
        let mut guard = 0;
        while cluster.iter().any(|&j| (eigs[j] - sigma).norm() < eps3) && guard < 64 {
            sigma += eps3;
            guard += 1;
        }
        let lu = HessLu::factor(h, n, sigma, eps3, std::mem::take(&mut buf));
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1)));
        let mut x: Vec<C64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        normalize(&mut x);
        let mut best = (f64::INFINITY, x.clone());
        for _ in 0..MAX_SWEEPS {
            lu.solve(&mut x);
            normalize(&mut x);
            let res = hess_residual(h, n, &x, lambda) / hnorm;
            if res < best.0 {
                best = (res, x.clone());
            }
            if res <= ACCEPT {
                break;
            }
        }
        let (plain_res, plain) = best;
        let mut chosen = plain.clone();
        if !cluster.is_empty() {
            let basis: Vec<&[C64]> = cluster.iter().map(|&j| out[j].as_slice()).collect();
            let mut y = plain;
            orthogonalize(&mut y, &basis);
            if normalize(&mut y) > 1e-8 {
                let res = hess_residual(h, n, &y, lambda) / hnorm;
                if res <= ACCEPT.max(10.0 * plain_res) {
                    chosen = y;
                }
            }
        }
        buf = lu.u;
        out.push(chosen);
    }
    out
}
