//! Generic solver for the chain characteristic equation
//!
//! ```text
//! f(c) = U_n(c) + a·U_{n-1}(c) + b·U_{n-2}(c) + d = 0,   c = cos θ,
//! ```
//!
//! where `U_k` are Chebyshev polynomials of the second kind. Multiplying by
//! `w^n` with `w = e^{iθ}` gives a palindromic polynomial of degree `2n`
//! whose roots come in `(w, 1/w)` pairs; the trivial roots `w = ±1` of the
//! undeflated sine form never appear because the division by `sin θ` is done
//! analytically.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::asymptotic::{asymptotic_seeds, newton_u, g_residual};
use super::poly::aberth;
use super::{LogScaled, SolveMethod};
use crate::{Error, Result, C64};

/// Above this `|d|` the polynomial coefficients span more than twelve
/// decades and the log-scaled large-coupling path is used instead.
pub const ASYMPTOTIC_THRESHOLD: f64 = 1e12;
/// Largest `|d|` for which the polynomial path is attempted as a fallback.
const POLY_FALLBACK_LIMIT: f64 = 1e150;
/// `|Im θ|` at or below this counts as a real angle.
pub const REAL_THETA_TOL: f64 = 1e-8;
const PAIR_TOL: f64 = 1e-6;
const CLUSTER_TOL: f64 = 1e-5;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaEquation {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub d: LogScaled,
}

/// One root of the characteristic equation in `c = cos θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaRoot {
    pub c: C64,
    pub theta: C64,
    pub multiplicity: usize,
}

impl ThetaRoot {
    pub fn is_real(&self) -> bool {
        self.theta.im.abs() <= REAL_THETA_TOL
    }
}

/// `θ = arccos c`, normalized to `Im θ ≥ 0` and `Re θ ∈ [0, 2π)`.
pub fn theta_from_c(c: C64) -> C64 {
    let mut t = c.acos();
    if t.im < 0.0 {
        t = -t;
    }
    if t.re < 0.0 {
        t.re += 2.0 * PI;
    }
    if t.re >= 2.0 * PI {
        t.re -= 2.0 * PI;
    }
    t
}

/// Normalizes an angle to `Im θ ≥ 0`, `Re θ ∈ [0, 2π)` using `θ ~ -θ`.
pub fn normalize_theta(theta: C64) -> C64 {
    let mut t = if theta.im < 0.0 { -theta } else { theta };
    t.re = t.re.rem_euclid(2.0 * PI);
    t
}

struct Eval {
    f: C64,
    df: C64,
    ddf: C64,
    scale: f64,
}

impl ThetaEquation {
    /// Hatano–Nelson form `sin((N+1)θ) − η1 sin((N−1)θ) − η2 sin θ = 0`.
    pub fn hn(n: usize, eta1: f64, eta2: LogScaled) -> Self {
        Self {
            n,
            a: 0.0,
            b: -eta1,
            d: eta2.neg(),
        }
    }

    /// SSH form `sin((M+1)θ) + η1 sin(Mθ) − η2 sin((M−1)θ) − η3 sin θ = 0`.
    pub fn ssh(m: usize, eta1: f64, eta2: f64, eta3: LogScaled) -> Self {
        Self {
            n: m,
            a: eta1,
            b: -eta2,
            d: eta3.neg(),
        }
    }

    fn eval(&self, c: C64) -> Eval {
        let n = self.n;
        let d = self.d.value();
        // U_k, U'_k, U''_k and a magnitude bound via the same recurrence
        let (mut u0, mut u1) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let (mut d0, mut d1) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let (mut s0, mut s1) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let (mut m0, mut m1) = (0.0f64, 1.0f64);
        let ac = c.norm();
        // after the loop: (u0, u1) = (U_{n-1}, U_n); keep U_{n-2} separately
        let mut u_nm2 = Complex64::new(0.0, 0.0);
        let mut d_nm2 = Complex64::new(0.0, 0.0);
        let mut s_nm2 = Complex64::new(0.0, 0.0);
        let mut m_nm2 = 0.0;
        for _ in 0..n {
            u_nm2 = u0;
            d_nm2 = d0;
            s_nm2 = s0;
            m_nm2 = m0;
            let u2 = 2.0 * c * u1 - u0;
            let d2 = 2.0 * u1 + 2.0 * c * d1 - d0;
            let s2 = 4.0 * d1 + 2.0 * c * s1 - s0;
            let m2 = 2.0 * ac * m1 + m0;
            (u0, u1) = (u1, u2);
            (d0, d1) = (d1, d2);
            (s0, s1) = (s1, s2);
            (m0, m1) = (m1, m2);
        }
        let f = u1 + self.a * u0 + self.b * u_nm2 + d;
        let df = d1 + self.a * d0 + self.b * d_nm2;
        let ddf = s1 + self.a * s0 + self.b * s_nm2;
        // M_n alone can vanish (e.g. c = 0, odd n); M_{n-1} keeps it nonzero
        let scale = m1 + (1.0 + self.a.abs()) * m0 + self.b.abs() * m_nm2 + d.abs();
        Eval { f, df, ddf, scale }
    }

    /// Scaled residual `|f(c)| / scale(c)`.
    pub fn residual(&self, c: C64) -> f64 {
        let e = self.eval(c);
        e.f.norm() / e.scale
    }

    /// Coefficients of the degree-`2n` palindromic polynomial `w^n f`.
    pub fn palindromic_coeffs(&self) -> Vec<f64> {
        let n = self.n;
        let mut coef = vec![0.0; 2 * n + 1];
        for k in (0..=2 * n).step_by(2) {
            coef[k] += 1.0;
        }
        for k in (1..2 * n).step_by(2) {
            coef[k] += self.a;
        }
        for k in (2..=2 * n - 2).step_by(2) {
            coef[k] += self.b;
        }
        coef[n] += self.d.value();
        coef
    }

    /// Residual of the palindromic polynomial at `w`, relative to the sum of
    /// absolute term magnitudes.
    pub fn poly_residual(&self, w: C64) -> f64 {
        let coef = self.palindromic_coeffs();
        let (w, coef) = if w.norm() > 1.0 { (w.inv(), coef) } else { (w, coef) };
        let (mut p, mut bound) = (Complex64::new(0.0, 0.0), 0.0);
        for &a in coef.iter().rev() {
            p = p * w + a;
            bound = bound * w.norm() + a.abs();
        }
        p.norm() / bound
    }

    fn polish(&self, mut c: C64) -> C64 {
        let mut e = self.eval(c);
        for _ in 0..30 {
            if e.df.norm() == 0.0 || e.f.norm() == 0.0 {
                break;
            }
            let step = e.f / e.df;
            let cn = c - step;
            let en = self.eval(cn);
            if !(en.f.norm() < e.f.norm()) {
                break;
            }
            c = cn;
            e = en;
            if step.norm() <= 1e-16 * c.norm().max(1e-300) {
                break;
            }
        }
        c
    }

    /// Resolves two nearby roots through the stationary point of `f` between
    /// them. Returns either a single double root or two separated roots.
    fn resolve_pair(&self, c1: C64, c2: C64) -> (C64, Option<C64>) {
        let mut m = (c1 + c2) * 0.5;
        let mut e = self.eval(m);
        for _ in 0..30 {
            if e.ddf.norm() == 0.0 {
                break;
            }
            let step = e.df / e.ddf;
            let mn = m - step;
            let en = self.eval(mn);
            if !(en.df.norm() < e.df.norm()) {
                break;
            }
            m = mn;
            e = en;
        }
        let noise = 64.0 * f64::EPSILON * e.scale * (self.n as f64 + 1.0);
        if e.f.norm() <= noise || e.ddf.norm() == 0.0 {
            return (m, None);
        }
        let s = (-2.0 * e.f / e.ddf).sqrt();
        let (mut r1, mut r2) = (m + s, m - s);
        if s.norm() > 1e-7 * m.norm().max(1.0) {
            let (p1, p2) = (self.polish(r1), self.polish(r2));
            if (p1 - p2).norm() > 0.25 * (r1 - r2).norm() {
                r1 = p1;
                r2 = p2;
            }
        }
        (r1, Some(r2))
    }

    fn finish(&self, cs: Vec<C64>) -> Result<Vec<ThetaRoot>> {
        let mut cs: Vec<C64> = cs.into_iter().map(|c| self.polish(c)).collect();
        cs.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        let mut roots: Vec<ThetaRoot> = Vec::with_capacity(cs.len());
        let mut used = vec![false; cs.len()];
        for i in 0..cs.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let tol = CLUSTER_TOL * cs[i].norm().max(1.0);
            let partner = (i + 1..cs.len())
                .filter(|&j| !used[j] && (cs[j] - cs[i]).norm() <= tol)
                .min_by(|&x, &y| (cs[x] - cs[i]).norm().total_cmp(&(cs[y] - cs[i]).norm()));
            match partner {
                Some(j) => {
                    used[j] = true;
                    match self.resolve_pair(cs[i], cs[j]) {
                        (m, None) => roots.push(self.make_root(m, 2)),
                        (r1, Some(r2)) => {
                            roots.push(self.make_root(r1, 1));
                            roots.push(self.make_root(r2, 1));
                        }
                    }
                }
                None => roots.push(self.make_root(cs[i], 1)),
            }
        }
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        if total != self.n {
            return Err(Error::RootFinding {
                residual: f64::NAN,
                iterations: 0,
            });
        }
        for r in &roots {
            let res = self.residual(r.c);
            if !(res <= RESIDUAL_TOL) {
                return Err(Error::RootFinding {
                    residual: res,
                    iterations: 0,
                });
            }
        }
        roots.sort_by(|x, y| {
            x.theta
                .re
                .total_cmp(&y.theta.re)
                .then(x.theta.im.total_cmp(&y.theta.im))
        });
        Ok(roots)
    }

    fn make_root(&self, c: C64, multiplicity: usize) -> ThetaRoot {
        // exactly-real coefficients: strip numerical imaginary dust
        let c = if c.im.abs() <= 1e-15 * c.re.abs().max(1.0) && self.is_real_root_candidate(c) {
            Complex64::new(c.re, 0.0)
        } else {
            c
        };
        ThetaRoot {
            c,
            theta: theta_from_c(c),
            multiplicity,
        }
    }

    fn is_real_root_candidate(&self, c: C64) -> bool {
        self.residual(Complex64::new(c.re, 0.0)) <= RESIDUAL_TOL
    }

    fn solve_polynomial(&self) -> Result<Vec<ThetaRoot>> {
        let coef = self.palindromic_coeffs();
        let res = aberth(&coef, 800);
        let ws = res.roots;
        let mut used = vec![false; ws.len()];
        let mut cs = Vec::with_capacity(self.n);
        let mut order: Vec<usize> = (0..ws.len()).collect();
        // pair the best-conditioned roots (far from w = ±1) first
        order.sort_by(|&x, &y| {
            let kx = (ws[x] - ws[x].inv()).norm();
            let ky = (ws[y] - ws[y].inv()).norm();
            ky.total_cmp(&kx)
        });
        for &i in &order {
            if used[i] {
                continue;
            }
            used[i] = true;
            let target = ws[i].inv();
            let mut best: Option<(usize, f64)> = None;
            let mut second: Option<(usize, f64)> = None;
            for (j, w) in ws.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let dist = (w * ws[i] - 1.0).norm();
                match best {
                    Some((_, bd)) if dist >= bd => {
                        if second.is_none_or(|(_, sd)| dist < sd) {
                            second = Some((j, dist));
                        }
                    }
                    _ => {
                        second = best;
                        best = Some((j, dist));
                    }
                }
            }
            let (j, dist) = best.ok_or_else(|| Error::Pairing("odd number of roots".into()))?;
            if dist > PAIR_TOL {
                return Err(Error::Pairing(format!(
                    "no 1/w partner for w = {:.6e} (closest |w w' - 1| = {dist:.3e})",
                    ws[i]
                )));
            }
            let c_ij = (ws[i] + target + ws[j] + ws[j].inv()) * 0.25;
            if let Some((k, sd)) = second {
                let c_ik = (ws[i] + target + ws[k] + ws[k].inv()) * 0.25;
                if sd <= PAIR_TOL && (c_ik - c_ij).norm() > PAIR_TOL * c_ij.norm().max(1.0) {
                    return Err(Error::Pairing(format!(
                        "ambiguous partner for w = {:.6e}",
                        ws[i]
                    )));
                }
            }
            used[j] = true;
            cs.push(c_ij);
        }
        self.finish(cs)
    }

    fn solve_large(&self) -> Option<Vec<ThetaRoot>> {
        let seeds = asymptotic_seeds(self.n, self.a, self.b, self.d, 200).ok()?;
        let mut us = Vec::with_capacity(seeds.len());
        for s in seeds {
            let u = newton_u(self, s)?;
            if !(u.norm() >= 1.0) || g_residual(self, u) > RESIDUAL_TOL {
                return None;
            }
            us.push(u);
        }
        for i in 0..us.len() {
            for j in 0..i {
                if (us[i] - us[j]).norm() <= 1e-8 * us[i].norm() {
                    return None;
                }
            }
        }
        let mut roots: Vec<ThetaRoot> = us
            .into_iter()
            .map(|u| {
                // θ = i ln u, so Im θ = ln|u| ≥ 0
                let theta = normalize_theta(Complex64::new(0.0, 1.0) * u.ln());
                ThetaRoot {
                    c: (u + u.inv()) * 0.5,
                    theta,
                    multiplicity: 1,
                }
            })
            .collect();
        roots.sort_by(|x, y| {
            x.theta
                .re
                .total_cmp(&y.theta.re)
                .then(x.theta.im.total_cmp(&y.theta.im))
        });
        Some(roots)
    }

    /// All `n` roots with multiplicities, plus the path that produced them.
    pub fn solve(&self) -> Result<(Vec<ThetaRoot>, SolveMethod)> {
        let d_abs = self.d.abs();
        if d_abs > ASYMPTOTIC_THRESHOLD {
            if let Some(r) = self.solve_large() {
                return Ok((r, SolveMethod::Asymptotic));
            }
            if d_abs > POLY_FALLBACK_LIMIT {
                return Err(Error::AsymptoticNonConvergence { mode: 0 });
            }
        }
        Ok((self.solve_polynomial()?, SolveMethod::Polynomial))
    }

    pub fn roots(&self) -> Result<Vec<ThetaRoot>> {
        self.solve().map(|(r, _)| r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq_hn(n: usize, eta1: f64, eta2: f64) -> ThetaEquation {
        ThetaEquation::hn(n, eta1, LogScaled::from_value(eta2))
    }

    #[test]
    fn obc_angles() {
        let n = 7;
        let roots = eq_hn(n, 0.0, 0.0).roots().unwrap();
        assert_eq!(roots.len(), n);
        for (m, r) in roots.iter().enumerate() {
            let want = (m + 1) as f64 * PI / (n + 1) as f64;
            assert!((r.theta - want).norm() < 1e-13);
        }
    }

    #[test]
    fn sine_form_residual() {
        let (n, e1, e2) = (9, 0.3, 2.7);
        for r in eq_hn(n, e1, e2).roots().unwrap() {
            let t = r.theta;
            let v = ((n + 1) as f64 * t).sin() - e1 * ((n - 1) as f64 * t).sin() - e2 * t.sin();
            assert!(v.norm() < 1e-10 * (1.0 + t.im.abs() * n as f64).exp(), "{v}");
        }
    }

    #[test]
    fn degenerate_root_reported_once() {
        // η1 = 0, η2 = 1, N = 8: double root at θ = π/2
        let roots = eq_hn(8, 0.0, 1.0).roots().unwrap();
        assert_eq!(roots.len(), 7);
        let double: Vec<_> = roots.iter().filter(|r| r.multiplicity == 2).collect();
        assert_eq!(double.len(), 1);
        assert!((double[0].theta.re - PI / 2.0).abs() < 1e-7);
    }

    #[test]
    fn large_coupling_matches_polynomial() {
        // d = 1e11 is below the switch; compare both paths directly
        let eq = eq_hn(10, 0.2, 1e11);
        let poly = eq.solve_polynomial().unwrap();
        let large = eq.solve_large().unwrap();
        for p in &poly {
            let best = large.iter().map(|l| (l.c - p.c).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10 * p.c.norm(), "{best}");
        }
    }

    #[test]
    fn huge_coupling_uses_log_path() {
        let eq = eq_hn(12, 0.1, 1e40);
        let (roots, method) = eq.solve().unwrap();
        assert_eq!(method, SolveMethod::Asymptotic);
        assert_eq!(roots.len(), 12);
    }
}
