//! Large-coupling regime.
//!
//! With `u = e^{-iθ}` and `|u| > 1`, the characteristic equation becomes
//!
//! ```text
//! G(u) = [1 − u^{-2n-2}] + a[u^{-1} − u^{-2n-1}] + b[u^{-2} − u^{-2n}]
//!        + d[u^{-n} − u^{-n-2}] = 0,
//! ```
//!
//! whose dominant balance is `u^n = −d·a1(u)` with
//! `a1 = (1 − u^{-2}) / (1 + a u^{-1} + b u^{-2})`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::classify::{hn_classify, Regime};
use super::solve::ThetaEquation;
use super::LogScaled;
use crate::models::ChainSpec;
use crate::{Error, Result, C64};

const SEED_TOL: f64 = 1e-14;

fn a1_of(u: C64, a: f64, b: f64) -> C64 {
    let ui = u.inv();
    (1.0 - ui * ui) / (1.0 + a * ui + b * ui * ui)
}

/// Fixed-point seeds `u_m`, one per branch `m = 0..n-1`.
pub(crate) fn asymptotic_seeds(
    n: usize,
    a: f64,
    b: f64,
    d: LogScaled,
    budget: usize,
) -> Result<Vec<C64>> {
    // ln(−d) as a complex logarithm
    let big_d = d.neg();
    let ln_d = Complex64::new(big_d.ln_abs, if big_d.sign < 0.0 { PI } else { 0.0 });
    let nf = n as f64;
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        let branch = Complex64::new(0.0, 2.0 * PI * m as f64);
        let mut u = ((ln_d + branch) / nf).exp();
        let mut converged = false;
        for _ in 0..budget {
            let a1 = a1_of(u, a, b);
            let next = ((ln_d + a1.ln() + branch) / nf).exp();
            let step = (next - u).norm();
            u = next;
            if step <= SEED_TOL * u.norm() {
                converged = true;
                break;
            }
        }
        if !converged || !u.is_finite() {
            return Err(Error::AsymptoticNonConvergence { mode: m });
        }
        out.push(u);
    }
    Ok(out)
}

/// Terms of `G(u)`, with the `d`-terms evaluated through logarithms.
fn g_terms(eq: &ThetaEquation, u: C64) -> ([C64; 8], [C64; 8]) {
    let n = eq.n as f64;
    let lu = u.ln();
    let p = |k: f64| (-k * lu).exp();
    let dsign = eq.d.sign;
    let dp = |k: f64| {
        if dsign == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            dsign * (eq.d.ln_abs - k * lu).exp()
        }
    };
    let (a, b) = (eq.a, eq.b);
    let g = [
        Complex64::new(1.0, 0.0),
        -p(2.0 * n + 2.0),
        a * p(1.0),
        -a * p(2.0 * n + 1.0),
        b * p(2.0),
        -b * p(2.0 * n),
        dp(n),
        -dp(n + 2.0),
    ];
    let dg = [
        Complex64::new(0.0, 0.0),
        (2.0 * n + 2.0) * p(2.0 * n + 3.0),
        -a * p(2.0),
        a * (2.0 * n + 1.0) * p(2.0 * n + 2.0),
        -2.0 * b * p(3.0),
        b * 2.0 * n * p(2.0 * n + 1.0),
        -n * dp(n + 1.0),
        (n + 2.0) * dp(n + 3.0),
    ];
    (g, dg)
}

/// `|G(u)|` relative to the sum of its term magnitudes.
pub(crate) fn g_residual(eq: &ThetaEquation, u: C64) -> f64 {
    let (g, _) = g_terms(eq, u);
    let s: C64 = g.iter().sum();
    let scale: f64 = g.iter().map(|t| t.norm()).sum();
    s.norm() / scale
}

/// Newton iteration on `G`, accepting only residual-decreasing steps.
pub(crate) fn newton_u(eq: &ThetaEquation, mut u: C64) -> Option<C64> {
    let eval = |u: C64| {
        let (g, dg) = g_terms(eq, u);
        (g.iter().sum::<C64>(), dg.iter().sum::<C64>())
    };
    let (mut g, mut dg) = eval(u);
    for _ in 0..60 {
        if g.norm() == 0.0 {
            break;
        }
        let step = g / dg;
        if !step.is_finite() {
            return None;
        }
        let un = u - step;
        let (gn, dgn) = eval(un);
        if !(gn.norm() < g.norm()) {
            break;
        }
        u = un;
        g = gn;
        dg = dgn;
        if step.norm() <= 1e-16 * u.norm() {
            break;
        }
    }
    u.is_finite().then_some(u)
}

/// One mode of the large-`N` fixed-point solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticMode {
    pub m: usize,
    pub theta_r: f64,
    pub theta_i: f64,
    pub a1: C64,
    pub abs_z1: f64,
    pub abs_z2: f64,
    pub energy: C64,
    pub iterations: usize,
}

/// Fixed-point solution `e^{NθI} = η2·a1·e^{iNθR}` for a chain in the
/// none-real regime, with the limiting Bloch-factor moduli.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub modes: Vec<AsymptoticMode>,
    /// `N → ∞` limit of `|z1|`: `(tR/δR)^{1/N} → 1` for `r > 1`, `r²` for `r < 1`.
    pub limit_abs_z1: f64,
    /// `N → ∞` limit of `|z2|`: `r²` for `r > 1`, `1` for `r < 1`.
    pub limit_abs_z2: f64,
    /// Finite-`N` leading-order value of `|z1|`, from the dominant term of `η2`.
    pub leading_abs_z1: f64,
    pub leading_abs_z2: f64,
}

impl AsymptoticReport {
    pub fn energies(&self) -> Vec<C64> {
        self.modes.iter().map(|m| m.energy).collect()
    }

    pub fn thetas(&self) -> Vec<C64> {
        self.modes
            .iter()
            .map(|m| Complex64::new(m.theta_r, m.theta_i))
            .collect()
    }
}

const FIXED_POINT_BUDGET: usize = 500;

pub fn hn_asymptotic(spec: &ChainSpec) -> Result<AsymptoticReport> {
    spec.validate()?;
    let cls = hn_classify(spec);
    if cls.regime != Regime::NoneReal {
        return Err(Error::InvalidSpec(format!(
            "asymptotic form needs the none-real regime, got {:?}",
            cls.regime
        )));
    }
    let n = spec.n;
    let nf = n as f64;
    let eta1 = cls.eta.eta1;
    let ln_eta2 = cls.eta.eta2.ln_abs;
    let scale = spec.hopping_scale();
    let g = spec.ln_r();
    let r = spec.r();
    let mut modes = Vec::with_capacity(n);
    for m in 1..=n {
        let mut a1 = Complex64::new(1.0, 0.0);
        let (mut tr, mut ti) = (0.0, 0.0);
        let mut converged = false;
        let mut iterations = 0;
        while iterations < FIXED_POINT_BUDGET {
            iterations += 1;
            let ntr = (2.0 * PI * m as f64 - a1.arg()) / nf;
            let nti = (ln_eta2 + a1.norm().ln()) / nf;
            let e = Complex64::from_polar((-2.0 * nti).exp(), 2.0 * ntr);
            let na1 = (1.0 - e) / (1.0 - eta1 * e);
            let delta = (ntr - tr).abs() + (nti - ti).abs();
            tr = ntr;
            ti = nti;
            a1 = na1;
            if delta <= 1e-15 * (1.0 + tr.abs() + ti.abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::AsymptoticNonConvergence { mode: m });
        }
        let theta = Complex64::new(tr, ti);
        modes.push(AsymptoticMode {
            m,
            theta_r: tr,
            theta_i: ti,
            a1,
            abs_z1: (g - ti).exp(),
            abs_z2: (g + ti).exp(),
            energy: 2.0 * scale * theta.cos(),
            iterations,
        });
    }
    // dominant term of η2 gives the leading finite-N moduli
    let (lz1, lz2, lim1, lim2) = if g >= 0.0 {
        let x = spec.x_r();
        let z1 = if x > 0.0 { (-x.ln() / nf).exp() } else { f64::NAN };
        (z1, r * r / z1, 1.0, r * r)
    } else {
        let x = spec.x_l();
        let z2 = if x > 0.0 { (x.ln() / nf).exp() } else { f64::NAN };
        (r * r / z2, z2, r * r, 1.0)
    };
    Ok(AsymptoticReport {
        modes,
        limit_abs_z1: lim1,
        limit_abs_z2: lim2,
        leading_abs_z1: lz1,
        leading_abs_z2: lz2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_solve_dominant_balance() {
        let eq = ThetaEquation::hn(16, 0.1, LogScaled::from_scaled(1.0, 60.0));
        let seeds = asymptotic_seeds(eq.n, eq.a, eq.b, eq.d, 200).unwrap();
        assert_eq!(seeds.len(), 16);
        for s in seeds {
            let u = newton_u(&eq, s).unwrap();
            assert!(g_residual(&eq, u) < 1e-14);
            // θ from u must satisfy the c-form equation
            let c = (u + u.inv()) * 0.5;
            assert!(eq.residual(c) < 1e-10);
        }
    }

    #[test]
    fn rejects_real_regime() {
        let spec = ChainSpec::new(8, 1.0, 0.7, 0.09, 0.56).unwrap();
        assert!(hn_asymptotic(&spec).is_err());
    }

    #[test]
    fn moduli_limits_for_r_above_one() {
        let spec = ChainSpec::new(200, 1.0, 1.5, 0.3, 0.4).unwrap();
        let rep = hn_asymptotic(&spec).unwrap();
        assert_eq!(rep.modes.len(), 200);
        // |z1| clusters at (tR/δR)^{1/N}
        for m in &rep.modes {
            assert!((m.abs_z1 - rep.leading_abs_z1).abs() < 0.01, "{}", m.abs_z1);
        }
        assert!((rep.leading_abs_z1 - 1.0).abs() < 0.01);
        assert!((rep.limit_abs_z2 - 1.5).abs() < 1e-14);
    }
}
