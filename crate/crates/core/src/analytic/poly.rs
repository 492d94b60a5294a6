//! Aberth–Ehrlich simultaneous root finder for real-coefficient polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::C64;

#[derive(Debug, Clone)]
pub struct AberthResult {
    pub roots: Vec<C64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Evaluates `p(z)` and `p'(z)/p(z)`, plus a rounding-error bound for `p`.
///
/// Outside the unit disk the reversed polynomial is evaluated at `1/z` so the
/// recurrence never grows beyond the largest coefficient.
fn eval_ratio(coeffs: &[f64], z: C64) -> (C64, C64, f64) {
    let deg = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = Complex64::new(coeffs[deg], 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut bound = coeffs[deg].abs();
        let az = z.norm();
        for &a in coeffs[..deg].iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
            bound = bound * az + a.abs();
        }
        (p, dp / p, bound)
    } else {
        let y = z.inv();
        let ay = y.norm();
        let mut q = Complex64::new(coeffs[0], 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        let mut bound = coeffs[0].abs();
        for &a in coeffs[1..].iter() {
            dq = dq * y + q;
            q = q * y + a;
            bound = bound * ay + a.abs();
        }
        // p(z) = z^deg q(1/z) and p'/p = deg/z - q'(y) y^2 / q(y)
        let ratio = deg as f64 * y - dq * y * y / q;
        (q, ratio, bound)
    }
}

/// Initial points on circles whose radii come from the upper convex hull of
/// `(k, ln|a_k|)`, which tracks the root moduli of each coefficient regime.
fn initial_guesses(coeffs: &[f64]) -> Vec<C64> {
    let deg = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != 0.0)
        .map(|(k, a)| (k, a.abs().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(deg);
    for (seg, w) in hull.windows(2).enumerate() {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let count = k1 - k0;
        let radius = ((l0 - l1) / count as f64).exp();
        let offset = 0.4 + 0.7 * seg as f64;
        for j in 0..count {
            let ang = 2.0 * PI * j as f64 / count as f64 + offset / count as f64;
            out.push(Complex64::from_polar(radius, ang));
        }
    }
    out
}

/// Finds all roots of `Σ coeffs[k] z^k`. `coeffs[0]` and the leading
/// coefficient must be nonzero.
pub fn aberth(coeffs: &[f64], max_iter: usize) -> AberthResult {
    let deg = coeffs.len() - 1;
    assert!(deg >= 1 && coeffs[0] != 0.0 && coeffs[deg] != 0.0);
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; deg];
    let eps = f64::EPSILON;
    let mut iterations = 0;
    while iterations < max_iter && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..deg {
            if done[i] {
                continue;
            }
            let (p, ratio, bound) = eval_ratio(coeffs, z[i]);
            if p.norm() <= 4.0 * eps * bound {
                done[i] = true;
                continue;
            }
            let newton = ratio.inv();
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    sum += (z[i] - zj).inv();
                }
            }
            let step = newton / (Complex64::new(1.0, 0.0) - newton * sum);
            if !step.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 2.0 * eps * z[i].norm() {
                done[i] = true;
            }
        }
    }
    AberthResult {
        roots: z,
        iterations,
        converged: done.iter().all(|d| *d),
    }
}
