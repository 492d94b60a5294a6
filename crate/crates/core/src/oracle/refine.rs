//! Newton refinement of eigenpairs with double-double residuals.
//!
//! The correction solves the bordered system
//! `[A − λI, −v; cᴴ, 0]·[δv; δλ] = [−(Av − λv); 1 − cᴴv]` in double precision,
//! while `v`, `λ` and the residual are carried as unevaluated sums
//! `hi + lo`, so the pair converges well past the conditioning limit of a
//! plain double-precision solve.

use num_complex::Complex64;

use crate::{DenseMatrix, C64};

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = two_sum(p, e);
        Self { hi, lo }
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    pub fn new(z: C64) -> Self {
        Self {
            re: Dd::new(z.re),
            im: Dd::new(z.im),
        }
    }

    pub fn value(self) -> C64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn add(self, o: Self) -> Self {
        Self {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn add_c64(self, z: C64) -> Self {
        self.add(Self::new(z))
    }

    /// `z · self` with `z` in double precision.
    pub fn scale(self, z: C64) -> Self {
        Self {
            re: self.re.mul_f64(z.re).add(self.im.mul_f64(z.im).neg()),
            im: self.im.mul_f64(z.re).add(self.re.mul_f64(z.im)),
        }
    }

    /// Product of two double-double numbers, dropping `lo·lo` terms.
    pub fn mul(self, o: Self) -> Self {
        let (a, b) = (self.re, self.im);
        let (c, d) = (o.re, o.im);
        let p = |x: Dd, y: Dd| {
            let (h, e) = two_prod(x.hi, y.hi);
            let e = e + x.hi * y.lo + x.lo * y.hi;
            let (hi, lo) = two_sum(h, e);
            Dd { hi, lo }
        };
        Self {
            re: p(a, c).add(p(b, d).neg()),
            im: p(a, d).add(p(b, c)),
        }
    }

    pub fn neg(self) -> Self {
        Self {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` for an exactly singular pivot.
pub(crate) fn lu_solve(mut a: Vec<C64>, n: usize, mut b: Vec<C64>) -> Option<Vec<C64>> {
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
            .unwrap();
        if a[p * n + k].norm() == 0.0 {
            return None;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        let piv = a[k * n + k];
        for i in k + 1..n {
            let l = a[i * n + k] / piv;
            if l == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (top, bot) = a.split_at_mut(i * n);
            let src = &top[k * n + k..k * n + n];
            for (d, s) in bot[k..n].iter_mut().zip(src) {
                *d -= l * s;
            }
            let bk = b[k];
            b[i] -= l * bk;
        }
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i * n + j] * b[j];
        }
        b[i] = s / a[i * n + i];
    }
    Some(b)
}

/// `‖Av − λv‖` with the residual accumulated in double-double.
fn dd_residual(a: &DenseMatrix, v: &[Cdd], lambda: Cdd) -> Vec<Cdd> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            let row = a.row(i);
            let mut acc = lambda.mul(v[i]).neg();
            for (aij, vj) in row.iter().zip(v) {
                if aij.re != 0.0 || aij.im != 0.0 {
                    acc = acc.add(vj.scale(*aij));
                }
            }
            acc
        })
        .collect()
}

fn norm(r: &[Cdd]) -> f64 {
    r.iter().map(|z| z.value().norm_sqr()).sum::<f64>().sqrt()
}

/// Refined `(λ, v, relative residual)`; `v` is returned with unit norm.
pub(crate) fn refine_pair(a: &DenseMatrix, lambda: C64, v: &[C64], steps: usize) -> (C64, Vec<C64>, f64) {
    let n = a.dim();
    let anorm = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let c: Vec<C64> = v.iter().map(|z| z / (vn * vn)).collect();
    let mut vd: Vec<Cdd> = v.iter().map(|z| Cdd::new(*z)).collect();
    let mut ld = Cdd::new(lambda);
    let mut r = dd_residual(a, &vd, ld);
    let mut res = norm(&r) / (anorm * norm(&vd));
    for _ in 0..steps {
        if res <= f64::EPSILON * f64::EPSILON {
            break;
        }
        let vf: Vec<C64> = vd.iter().map(|z| z.value()).collect();
        let lf = ld.value();
        let m = n + 1;
        let mut big = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..n {
            big[i * m..i * m + n].copy_from_slice(a.row(i));
            big[i * m + i] -= lf;
            big[i * m + n] = -vf[i];
            big[n * m + i] = c[i].conj();
        }
        let mut g = Cdd::new(Complex64::new(1.0, 0.0));
        for (ci, vi) in c.iter().zip(&vd) {
            g = g.add(vi.scale(ci.conj()).neg());
        }
        let mut rhs: Vec<C64> = r.iter().map(|z| -z.value()).collect();
        rhs.push(g.value());
        let Some(dx) = lu_solve(big, m, rhs) else { break };
        let cand_v: Vec<Cdd> = vd.iter().zip(&dx).map(|(x, d)| x.add_c64(*d)).collect();
        let cand_l = ld.add_c64(dx[n]);
        let cand_r = dd_residual(a, &cand_v, cand_l);
        let cand_res = norm(&cand_r) / (anorm * norm(&cand_v));
        if !(cand_res < res) {
            break;
        }
        vd = cand_v;
        ld = cand_l;
        r = cand_r;
        res = cand_res;
    }
    let mut out: Vec<C64> = vd.iter().map(|z| z.value()).collect();
    let on = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in out.iter_mut() {
        *z /= on;
    }
    (ld.value(), out, res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_sum_keeps_low_part() {
        let x = Dd::new(1.0).add(Dd::new(1e-20));
        assert_eq!(x.hi, 1.0);
        assert_eq!(x.lo, 1e-20);
        let y = x.add(Dd::new(-1.0));
        assert_eq!(y.value(), 1e-20);
    }

    #[test]
    fn lu_solves_small_system() {
        let a = vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, 0.0),
        ];
        let x = lu_solve(a, 2, vec![Complex64::new(3.0, 1.0), Complex64::new(3.0, 0.0)]).unwrap();
        assert!((x[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn perturbed_pair_converges() {
        let a = DenseMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let v = [Complex64::new(1.0, 0.0), Complex64::new(1.001, 0.0)];
        let (l, x, res) = refine_pair(&a, Complex64::new(3.01, 0.0), &v, 8);
        assert!((l - 3.0).norm() < 1e-15);
        assert!((x[0] - x[1]).norm() < 1e-15);
        assert!(res < 1e-16);
    }
}
