use std::f64::consts::PI;

use super::solve::ASYMPTOTIC_THRESHOLD;
use super::{EtaParams, LogScaled};
use crate::models::{ChainSpec, SshSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    AllReal,
    Mixed,
    NoneReal,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::AllReal => "all-real",
            Regime::Mixed => "mixed",
            Regime::NoneReal => "none-real",
        }
    }
}

/// Predicted solution regime of a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub eta: EtaParams,
    pub regime: Regime,
    /// Inclusive bounds on the number of real `θ`.
    pub n_real_bounds: (usize, usize),
    /// Threshold `Γc` when `δL/tL = δR/tR`.
    pub gamma_c: Option<f64>,
}

impl Classification {
    pub fn n_complex_bounds(&self, n: usize) -> (usize, usize) {
        (n - self.n_real_bounds.1, n - self.n_real_bounds.0)
    }
}

/// Critical `η2` for `η1 = 0`.
pub fn hn_eta_c(n: usize) -> f64 {
    let nf = n as f64;
    if n % 2 == 1 {
        1.0 / (PI / (2.0 * (nf + 1.0))).cos()
    } else if n % 4 == 0 {
        1.0
    } else {
        1.0 / (PI / (nf + 1.0)).cos()
    }
}

fn log_flag(x: &LogScaled) -> bool {
    !x.is_zero() && x.ln_abs > ASYMPTOTIC_THRESHOLD.ln()
}

/// `η1 = δRδL/(tRtL)`, `η2 = (δL/tL) r^{-N} + (δR/tR) r^N`.
pub fn hn_eta(spec: &ChainSpec) -> EtaParams {
    let nf = spec.n as f64;
    let g = spec.ln_r();
    let eta1 = spec.x_l() * spec.x_r();
    let eta2 = LogScaled::from_scaled(spec.x_l(), -nf * g)
        .add(&LogScaled::from_scaled(spec.x_r(), nf * g));
    let eta_c = if eta1 == 0.0 { hn_eta_c(spec.n) } else { 1.0 + eta1 };
    EtaParams {
        eta1,
        eta2,
        eta3: None,
        eta_c,
        log_scale: log_flag(&eta2),
    }
}

/// `Γc = r^N` for `r < 1` and `r^{-N}` for `r > 1`.
pub fn diagonal_gamma_c(spec: &ChainSpec) -> f64 {
    (-(spec.n as f64) * spec.ln_r().abs()).exp()
}

fn regime_from(n: usize, eta1: f64, eta2: &LogScaled, eta_c: f64) -> Regime {
    let nf = n as f64;
    let lower = if eta1 == 0.0 { eta_c } else { 1.0 + eta1 };
    let upper = nf + 1.0 - eta1 * (nf - 1.0);
    let v = eta2.value();
    if eta1 == 0.0 {
        if v <= eta_c {
            Regime::AllReal
        } else if v > upper {
            Regime::NoneReal
        } else {
            Regime::Mixed
        }
    } else if v < lower && v <= upper {
        Regime::AllReal
    } else if v > upper && v >= lower {
        Regime::NoneReal
    } else {
        Regime::Mixed
    }
}

pub fn hn_classify(spec: &ChainSpec) -> Classification {
    let n = spec.n;
    let eta = hn_eta(spec);
    let regime = regime_from(n, eta.eta1, &eta.eta2, eta.eta_c);
    let n_real_bounds = match regime {
        Regime::AllReal => (n, n),
        Regime::NoneReal => (0, 0),
        Regime::Mixed => (0, n),
    };
    let gamma_c = (spec.x_l() == spec.x_r()).then(|| diagonal_gamma_c(spec));
    Classification {
        eta,
        regime,
        n_real_bounds,
        gamma_c,
    }
}

/// Smallest `N` in `[2, n_max]` at which the chain leaves the all-real
/// regime.
pub fn hn_crossover(spec: &ChainSpec, n_max: usize) -> Option<usize> {
    (2..=n_max).find(|&n| hn_classify(&spec.with_size(n)).regime != Regime::AllReal)
}

/// `η1 = (t2Rt2L − δRδL)/√P`, `η2 = δRδL/(t2Rt2L)`,
/// `η3 = (δL/t2L) r^{-M} + (δR/t2R) r^M`.
pub fn ssh_eta(spec: &SshSpec) -> EtaParams {
    let mf = spec.m as f64;
    let g = spec.ln_r();
    let eta1 = (spec.t2r * spec.t2l - spec.delta_r * spec.delta_l) / spec.sqrt_p();
    let eta2 = spec.delta_r * spec.delta_l / (spec.t2r * spec.t2l);
    let eta3 = LogScaled::from_scaled(spec.delta_l / spec.t2l, -mf * g)
        .add(&LogScaled::from_scaled(spec.delta_r / spec.t2r, mf * g));
    EtaParams {
        eta1,
        eta2: LogScaled::from_value(eta2),
        eta3: Some(eta3),
        eta_c: 1.0 + 1.0 / mf,
        log_scale: log_flag(&eta3),
    }
}

/// SSH regime. Only the none-real bound `η3 > M+1+η1 M−η2(M−1)` (where
/// `f(c)` cannot change sign on `[-1, 1]`) and the OBC bulk count are
/// predicted; everything else is reported as mixed.
pub fn ssh_classify(spec: &SshSpec) -> Classification {
    let m = spec.m;
    let mf = m as f64;
    let eta = ssh_eta(spec);
    let eta3 = eta.eta3.unwrap_or(LogScaled::ZERO);
    let eta2 = eta.eta2.value();
    let none_bound = mf + 1.0 + eta.eta1.abs() * mf + eta2 * (mf - 1.0);
    let (regime, bounds) = if eta3.value() > none_bound {
        (Regime::NoneReal, (0, 0))
    } else if eta3.is_zero() && eta2 == 0.0 {
        // OBC: M real roots below αc, M−1 above
        if eta.eta1 < eta.eta_c {
            (Regime::AllReal, (m, m))
        } else {
            (Regime::Mixed, (m - 1, m - 1))
        }
    } else {
        (Regime::Mixed, (0, m))
    };
    Classification {
        eta,
        regime,
        n_real_bounds: bounds,
        gamma_c: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_c_branches() {
        assert_eq!(hn_eta_c(8), 1.0);
        assert!((hn_eta_c(9) - 1.0 / (PI / 20.0).cos()).abs() < 1e-15);
        assert!((hn_eta_c(10) - 1.0 / (PI / 11.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn gamma_c_example() {
        let spec = ChainSpec::from_ratios(20, 1.0, 1.3, 0.05, 0.05).unwrap();
        let c = hn_classify(&spec);
        let gc = c.gamma_c.unwrap();
        assert!((gc - 1.3f64.powf(-10.0)).abs() < 1e-15);
        assert!((gc - 0.0725).abs() < 1e-3);
        assert_eq!(c.regime, Regime::AllReal);
    }

    #[test]
    fn eta1_zero_regimes() {
        // δR = 0, η2 = (δL/tL) r^{-N}
        let r = 0.85f64.sqrt();
        let mk = |eta2: f64| ChainSpec::new(8, 1.0, 0.85, eta2 * r.powi(8), 0.0).unwrap();
        assert_eq!(hn_classify(&mk(0.5)).regime, Regime::AllReal);
        assert_eq!(hn_classify(&mk(20.0)).regime, Regime::NoneReal);
        assert_eq!(hn_classify(&mk(3.0)).regime, Regime::Mixed);
    }

    #[test]
    fn crossover_for_fixed_couplings() {
        let spec = ChainSpec::new(4, 1.0, 0.7, 0.09, 0.56).unwrap();
        let n_star = hn_crossover(&spec, 100).unwrap();
        let eta = |n| hn_eta(&spec.with_size(n));
        assert!(eta(n_star).eta2.value() >= 1.0 + eta(n_star).eta1);
        assert!(eta(n_star - 1).eta2.value() < 1.0 + eta(n_star - 1).eta1);
    }

    #[test]
    fn ssh_obc_eta() {
        let s = SshSpec::obc(8, 0.5, 0.3, 1.0, 1.0).unwrap();
        let e = ssh_eta(&s);
        assert!((e.eta1 - s.alpha()).abs() < 1e-14);
        assert!(e.eta3.unwrap().is_zero());
        assert_eq!(ssh_classify(&s).n_real_bounds, (7, 7));
    }
}
