//! Complex single-shift QR on an upper Hessenberg matrix, eigenvalues only.
//!
//! Wilkinson shifts with exceptional shifts every ten stagnant sweeps, and
//! the conservative deflation test of Ahues and Tisseur with a second-order
//! fallback for (nearly) equal diagonal pairs.

use num_complex::Complex64;

use crate::{Error, Result, C64};

const ZERO: C64 = Complex64::new(0.0, 0.0);
const KEXSH: usize = 10;
const DAT1: f64 = 0.75;

#[inline]
fn cabs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// `G = [[c, s], [−s̄, c]]` with `G·[a, b]ᵀ = [ρ, 0]ᵀ`.
#[inline]
pub(crate) fn givens(a: C64, b: C64) -> (f64, C64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let nrm = na.hypot(nb);
    (na / nrm, (a / na) * b.conj() / nrm)
}

fn wilkinson_shift(h: &[C64], n: usize, i: usize) -> C64 {
    let at = |r: usize, c: usize| h[r * n + c];
    let mut t = at(i, i);
    let u = at(i - 1, i).sqrt() * at(i, i - 1).sqrt();
    let s = cabs1(u);
    if s != 0.0 {
        let x = 0.5 * (at(i - 1, i - 1) - t);
        let sx = cabs1(x);
        let s = s.max(sx);
        let (xs, us) = (x / s, u / s);
        let mut y = s * (xs * xs + us * us).sqrt();
        if sx > 0.0 {
            let xn = x / sx;
            if xn.re * y.re + xn.im * y.im < 0.0 {
                y = -y;
            }
        }
        t -= u * (u / (x + y));
    }
    t
}

/// Eigenvalues of the Hessenberg matrix `h` (overwritten).
pub(crate) fn hessenberg_eigenvalues(h: &mut [C64], n: usize) -> Result<Vec<C64>> {
    let mut w = vec![ZERO; n];
    let ulp = f64::EPSILON;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / ulp);
    let itmax = 30 * n.max(10);
    let idx = |r: usize, c: usize| r * n + c;
    let mut kdefl = 0usize;
    let mut hi = n;
    while hi > 0 {
        let i = hi - 1;
        let mut l = 0;
        let mut deflated = false;
        for _ in 0..=itmax {
            // small subdiagonal search
            let mut k = i;
            while k > l {
                let sub = cabs1(h[idx(k, k - 1)]);
                if sub <= smlnum {
                    break;
                }
                let mut tst = cabs1(h[idx(k - 1, k - 1)]) + cabs1(h[idx(k, k)]);
                if tst == 0.0 {
                    if k >= 2 {
                        tst += cabs1(h[idx(k - 1, k - 2)]);
                    }
                    if k + 1 < n {
                        tst += cabs1(h[idx(k + 1, k)]);
                    }
                }
                if sub <= ulp * tst {
                    let sup = cabs1(h[idx(k - 1, k)]);
                    let (ab, ba) = (sub.max(sup), sub.min(sup));
                    let hkk = cabs1(h[idx(k, k)]);
                    let d = cabs1(h[idx(k - 1, k - 1)] - h[idx(k, k)]);
                    let (aa, bb) = (hkk.max(d), hkk.min(d));
                    let s = aa + ab;
                    if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                        break;
                    }
                    // The first-order test above never passes for equal
                    // diagonals; zeroing moves eigenvalues by at most √(ab·ba).
                    if (ab * ba).sqrt() <= ulp * tst {
                        break;
                    }
                }
                k -= 1;
            }
            l = k;
            if l > 0 {
                h[idx(l, l - 1)] = ZERO;
            }
            if l >= i {
                deflated = true;
                break;
            }
            kdefl += 1;
            let t = if kdefl % (2 * KEXSH) == 0 {
                DAT1 * cabs1(h[idx(i, i - 1)]) + h[idx(i, i)]
            } else if kdefl % KEXSH == 0 {
                DAT1 * cabs1(h[idx(l + 1, l)]) + h[idx(l, l)]
            } else {
                wilkinson_shift(h, n, i)
            };

            // start the sweep where two consecutive subdiagonals are small
            let mut m = i - 1;
            let v = loop {
                let h11 = h[idx(m, m)];
                let h22 = h[idx(m + 1, m + 1)];
                let h11s = h11 - t;
                let h21 = h[idx(m + 1, m)];
                let s = cabs1(h11s) + cabs1(h21);
                let (h11s, h21) = (h11s / s, h21 / s);
                if m == l {
                    break (h11s, h21);
                }
                let h10 = h[idx(m, m - 1)];
                if cabs1(h10) * cabs1(h21) <= ulp * (cabs1(h11s) * (cabs1(h11) + cabs1(h22))) {
                    break (h11s, h21);
                }
                m -= 1;
            };

            for k in m..i {
                let (a, b) = if k == m {
                    v
                } else {
                    (h[idx(k, k - 1)], h[idx(k + 1, k - 1)])
                };
                let (c, s) = givens(a, b);
                let sc = s.conj();
                let j0 = if k > m { k - 1 } else { k };
                for j in j0..=i {
                    let x = h[idx(k, j)];
                    let y = h[idx(k + 1, j)];
                    h[idx(k, j)] = c * x + s * y;
                    h[idx(k + 1, j)] = c * y - sc * x;
                }
                if k > m {
                    h[idx(k + 1, k - 1)] = ZERO;
                } else if m > l {
                    // the fill at (m+1, m-1) is negligible by the choice of m
                    h[idx(m, m - 1)] *= c;
                }
                for r in l..=(k + 2).min(i) {
                    let p = h[idx(r, k)];
                    let q = h[idx(r, k + 1)];
                    h[idx(r, k)] = c * p + sc * q;
                    h[idx(r, k + 1)] = c * q - s * p;
                }
            }
        }
        if !deflated {
            return Err(Error::EigenNonConvergence {
                dim: n,
                converged: n - hi,
                partial: w[hi..].to_vec(),
            });
        }
        w[i] = h[idx(i, i)];
        kdefl = 0;
        hi = i;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn givens_zeroes_second_entry() {
        let (a, b) = (Complex64::new(0.3, -1.2), Complex64::new(-2.0, 0.7));
        let (c, s) = givens(a, b);
        let second = c * b - s.conj() * a;
        assert!(second.norm() < 1e-15);
        assert!(((c * a + s * b).norm() - a.norm().hypot(b.norm())).abs() < 1e-15);
    }

    #[test]
    fn degenerate_ring_converges() {
        // uniform 160-site ring: every interior level is doubly degenerate
        let n = 160;
        let mut h = vec![ZERO; n * n];
        for i in 0..n {
            h[i * n + (i + 1) % n] = Complex64::new(1.0, 0.0);
            h[((i + 1) % n) * n + i] = Complex64::new(1.0, 0.0);
        }
        let mut hess = crate::oracle::hessenberg::Hessenberg::reduce(h, n).h;
        let w = hessenberg_eigenvalues(&mut hess, n).unwrap();
        for k in 0..n {
            let e = 2.0 * (std::f64::consts::TAU * k as f64 / n as f64).cos();
            let d = w.iter().map(|x| (x - e).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-13);
        }
    }

    #[test]
    fn companion_of_known_roots() {
        // Hessenberg companion matrix of (x−1)(x−2i)(x+3)(x−0.5+0.5i)
        let roots = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.5, -0.5),
        ];
        let mut p = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut q = vec![ZERO; p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                q[k] += c;
                q[k + 1] -= c * r;
            }
            p = q;
        }
        let n = 4;
        let mut h = vec![ZERO; n * n];
        for j in 0..n {
            h[j] = -p[j + 1];
        }
        for i in 1..n {
            h[i * n + i - 1] = Complex64::new(1.0, 0.0);
        }
        let w = hessenberg_eigenvalues(&mut h, n).unwrap();
        for r in roots {
            let d = w.iter().map(|x| (x - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-12, "{r}: {d}");
        }
    }
}
