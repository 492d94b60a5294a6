use crate::C64;

const RADIX: f64 = 2.0;
const FACTOR: f64 = 0.95;
const MAX_SWEEPS: usize = 1000;

/// Diagonal balancing `A ← D⁻¹ A D` with power-of-two entries of `D`.
///
/// Off-diagonal row and column norms are equalized one index at a time, so
/// exponentially graded chains come out close to symmetric. Returns `D`.
pub(crate) fn balance(a: &mut [C64], n: usize) -> Vec<f64> {
    let mut scale = vec![1.0; n];
    let sfmin1 = f64::MIN_POSITIVE / f64::EPSILON;
    let sfmax1 = 1.0 / sfmin1;
    let sfmin2 = sfmin1 * RADIX;
    let sfmax2 = 1.0 / sfmin2;
    for _ in 0..MAX_SWEEPS {
        let mut noconv = false;
        for i in 0..n {
            let (mut c, mut r) = (0.0f64, 0.0f64);
            for k in 0..n {
                if k != i {
                    c += a[k * n + i].norm_sqr();
                    r += a[i * n + k].norm_sqr();
                }
            }
            let (mut c, mut r) = (c.sqrt(), r.sqrt());
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut ca = (0..n).map(|k| a[k * n + i].norm()).fold(0.0, f64::max);
            let mut ra = (0..n).map(|k| a[i * n + k].norm()).fold(0.0, f64::max);
            let s = c + r;
            let mut g = r / RADIX;
            let mut f: f64 = 1.0;
            while c < g && f.max(c).max(ca) < sfmax2 && r.min(g).min(ra) > sfmin2 {
                f *= RADIX;
                c *= RADIX;
                ca *= RADIX;
                r /= RADIX;
                g /= RADIX;
                ra /= RADIX;
            }
            g = c / RADIX;
            while g >= r && r.max(ra) < sfmax2 && f.min(c).min(g).min(ca) > sfmin2 {
                f /= RADIX;
                c /= RADIX;
                g /= RADIX;
                ca /= RADIX;
                r *= RADIX;
                ra *= RADIX;
            }
            if c + r >= FACTOR * s {
                continue;
            }
            if f < 1.0 && scale[i] < 1.0 && f * scale[i] <= sfmin1 {
                continue;
            }
            if f > 1.0 && scale[i] > 1.0 && scale[i] >= sfmax1 / f {
                continue;
            }
            scale[i] *= f;
            noconv = true;
            let g = 1.0 / f;
            for k in 0..n {
                a[i * n + k] *= g;
                a[k * n + i] *= f;
            }
        }
        if !noconv {
            break;
        }
    }
    scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_hn, ChainSpec};

    #[test]
    fn graded_chain_becomes_nearly_symmetric() {
        let h = build_hn(&ChainSpec::obc(40, 1.0, 0.2).unwrap()).unwrap();
        let mut a = h.as_slice().to_vec();
        let d = balance(&mut a, 40);
        for i in 0..39 {
            let ratio = a[i * 40 + i + 1].norm() / a[(i + 1) * 40 + i].norm();
            assert!((0.2..=5.0).contains(&ratio), "ratio {ratio} at {i}");
        }
        // exact similarity: every entry scaled by d_j / d_i
        for i in 0..40 {
            for j in 0..40 {
                assert_eq!(a[i * 40 + j], h[(i, j)] * d[j] / d[i]);
            }
        }
    }
}
