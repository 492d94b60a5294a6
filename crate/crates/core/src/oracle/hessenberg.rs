use num_complex::Complex64;

use crate::C64;

const ZERO: C64 = Complex64::new(0.0, 0.0);

/// Upper Hessenberg form `A = Q H Qᴴ` with `Q` kept as Householder vectors.
pub(crate) struct Hessenberg {
    pub h: Vec<C64>,
    /// `(k, u)` with `P_k = I − 2uuᴴ` acting on indices `k+1..n`.
    reflectors: Vec<(usize, Vec<C64>)>,
}

impl Hessenberg {
    pub fn reduce(mut a: Vec<C64>, n: usize) -> Self {
        let mut reflectors = Vec::new();
        let mut s = vec![ZERO; n];
        for k in 0..n.saturating_sub(2) {
            let tail: f64 = (k + 2..n).map(|r| a[r * n + k].norm_sqr()).sum();
            if tail == 0.0 {
                continue;
            }
            let x0 = a[(k + 1) * n + k];
            let alpha = (tail + x0.norm_sqr()).sqrt();
            let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
            let mut u: Vec<C64> = (k + 1..n).map(|r| a[r * n + k]).collect();
            u[0] += phase * alpha;
            let un = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in u.iter_mut() {
                *z /= un;
            }
            // left: rows k+1.., columns k..
            s[k..].fill(ZERO);
            for (r, ur) in u.iter().enumerate() {
                let row = &a[(k + 1 + r) * n..(k + 2 + r) * n];
                let cu = ur.conj();
                for j in k..n {
                    s[j] += cu * row[j];
                }
            }
            for (r, ur) in u.iter().enumerate() {
                let two_u = 2.0 * ur;
                let row = &mut a[(k + 1 + r) * n..(k + 2 + r) * n];
                for j in k..n {
                    row[j] -= two_u * s[j];
                }
            }
            // right: all rows, columns k+1..
            for i in 0..n {
                let row = &mut a[i * n + k + 1..(i + 1) * n];
                let t: C64 = row.iter().zip(&u).map(|(x, y)| x * y).sum();
                let two_t = 2.0 * t;
                for (x, y) in row.iter_mut().zip(&u) {
                    *x -= two_t * y.conj();
                }
            }
            a[(k + 1) * n + k] = -phase * alpha;
            for r in k + 2..n {
                a[r * n + k] = ZERO;
            }
            reflectors.push((k, u));
        }
        Self { h: a, reflectors }
    }

    /// `x ← Q x`.
    pub fn apply_q(&self, x: &mut [C64]) {
        for (k, u) in self.reflectors.iter().rev() {
            let seg = &mut x[k + 1..];
            let t: C64 = u.iter().zip(seg.iter()).map(|(a, b)| a.conj() * b).sum();
            for (s, a) in seg.iter_mut().zip(u) {
                *s -= 2.0 * t * a;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn similarity_is_exact() {
        let n = 9;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<C64> = (0..n * n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let hs = Hessenberg::reduce(a.clone(), n);
        for i in 0..n {
            for j in 0..i.saturating_sub(1) {
                assert_eq!(hs.h[i * n + j], ZERO);
            }
        }
        // A Q e_j = Q H e_j for every column j
        for j in 0..n {
            let mut qe = vec![ZERO; n];
            qe[j] = Complex64::new(1.0, 0.0);
            hs.apply_q(&mut qe);
            let aq: Vec<C64> = (0..n).map(|i| (0..n).map(|k| a[i * n + k] * qe[k]).sum()).collect();
            let mut qh: Vec<C64> = (0..n).map(|i| hs.h[i * n + j]).collect();
            hs.apply_q(&mut qh);
            for i in 0..n {
                assert!((aq[i] - qh[i]).norm() < 1e-13);
            }
        }
    }
}
