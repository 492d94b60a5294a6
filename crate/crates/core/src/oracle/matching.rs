use crate::{Error, Result, C64};

/// Above this size the assignment is built greedily and then repaired by
/// pairwise swaps instead of solved exactly.
pub const HUNGARIAN_MAX: usize = 512;

/// Pairing `a[i] ↔ b[pairing[i]]` of two spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMatch {
    pub max_dist: f64,
    pub mean_dist: f64,
    pub pairing: Vec<usize>,
}

/// Minimum-cost matching of two multisets under `|a − b|`.
pub fn match_spectra(a: &[C64], b: &[C64]) -> Result<SpectrumMatch> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let pairing = if a.len() <= HUNGARIAN_MAX {
        hungarian(a, b)
    } else {
        greedy(a, b)
    };
    let d: Vec<f64> = pairing.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).norm()).collect();
    let n = d.len().max(1) as f64;
    Ok(SpectrumMatch {
        max_dist: d.iter().copied().fold(0.0, f64::max),
        mean_dist: d.iter().sum::<f64>() / n,
        pairing,
    })
}

/// Shortest augmenting path with potentials, `O(n³)`.
fn hungarian(a: &[C64], b: &[C64]) -> Vec<usize> {
    let n = a.len();
    let cost = |i: usize, j: usize| (a[i] - b[j]).norm();
    // 1-based rows/cols; p[j] = row matched to column j
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut pairing = vec![0; n];
    for j in 1..=n {
        pairing[p[j] - 1] = j - 1;
    }
    pairing
}

/// Nearest-unused assignment in lexicographic order, then pairwise swaps
/// that lower the worst matched distance until none helps.
fn greedy(a: &[C64], b: &[C64]) -> Vec<usize> {
    let n = a.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i].re.total_cmp(&a[j].re).then(a[i].im.total_cmp(&a[j].im)));
    let mut used = vec![false; n];
    let mut pairing = vec![0; n];
    for &i in &order {
        let j = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&x, &y| (a[i] - b[x]).norm().total_cmp(&(a[i] - b[y]).norm()))
            .unwrap();
        used[j] = true;
        pairing[i] = j;
    }
    let d = |i: usize, j: usize| (a[i] - b[j]).norm();
    for _ in 0..n {
        let worst = (0..n).max_by(|&x, &y| d(x, pairing[x]).total_cmp(&d(y, pairing[y]))).unwrap();
        let w = d(worst, pairing[worst]);
        let swap = (0..n)
            .filter(|&k| k != worst)
            .map(|k| (k, d(worst, pairing[k]).max(d(k, pairing[worst]))))
            .filter(|&(_, m)| m < w)
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match swap {
            Some((k, _)) => pairing.swap(worst, k),
            None => break,
        }
    }
    pairing
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> C64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identical_sets() {
        let a = [c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)];
        let b = [a[2], a[0], a[1]];
        let m = match_spectra(&a, &b).unwrap();
        assert_eq!(m.max_dist, 0.0);
        assert_eq!(m.pairing, vec![1, 2, 0]);
    }

    #[test]
    fn jitter_is_bounded() {
        let a: Vec<C64> = (0..40).map(|k| c(k as f64 * 0.1, (k as f64).sin())).collect();
        let b: Vec<C64> = a.iter().rev().map(|z| z + c(1e-9 / 2f64.sqrt(), -1e-9 / 2f64.sqrt())).collect();
        assert!(match_spectra(&a, &b).unwrap().max_dist <= 1.0000001e-9);
    }

    #[test]
    fn hungarian_beats_naive_order() {
        // greedy-from-first would pair 0↔0 and leave 1↔1 far apart
        let a = [c(0.0, 0.0), c(1.0, 0.0)];
        let b = [c(0.9, 0.0), c(-0.05, 0.0)];
        let m = match_spectra(&a, &b).unwrap();
        assert_eq!(m.pairing, vec![1, 0]);
        assert!((m.max_dist - 0.1).abs() < 1e-15);
    }

    #[test]
    fn large_sets_use_greedy() {
        let n = HUNGARIAN_MAX + 20;
        let a: Vec<C64> = (0..n).map(|k| c((k as f64 * 0.37).cos(), (k as f64 * 0.11).sin())).collect();
        let mut b = a.clone();
        b.reverse();
        let m = match_spectra(&a, &b).unwrap();
        assert!(m.max_dist < 1e-15);
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(
            match_spectra(&[c(0.0, 0.0)], &[]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
