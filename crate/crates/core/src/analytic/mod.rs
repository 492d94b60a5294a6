//! Exact solutions of the Hatano–Nelson and SSH chains.
//!
//! Every boundary condition reduces the eigenproblem to a scalar equation in
//! the complex angle `θ`, with Bloch factors `z1 = r e^{iθ}` and
//! `z2 = r e^{-iθ}`. The roots are found by [`ThetaEquation`]; eigenvectors
//! are rebuilt from the 2×2 boundary matrix in [`modes`].

mod asymptotic;
mod classify;
mod edge;
pub mod modes;
mod phase;
pub mod poly;
mod solve;

mod hn;
mod ssh;

use std::fmt;

pub use asymptotic::{hn_asymptotic, AsymptoticMode, AsymptoticReport};
pub use classify::{
    diagonal_gamma_c, hn_classify, hn_crossover, hn_eta, hn_eta_c, ssh_classify, ssh_eta,
    Classification, Regime,
};
pub use edge::{ssh_obc_edge, EdgeSolution};
pub use hn::{hn_mu_line, hn_roots, mu_line_value};
pub use modes::{
    hn_all_modes, hn_mode_vector, hn_mode_vectors, hn_obc_profile, ssh_all_modes,
    ssh_mode_vector, ssh_mode_vectors, ssh_obc_profile, Branch, ModeVector,
};
pub use phase::{ssh_phase_point, BoundaryClass, PhaseLabel, Region, Skin};
pub use solve::{
    normalize_theta, theta_from_c, ThetaEquation, ThetaRoot, ASYMPTOTIC_THRESHOLD,
    REAL_THETA_TOL,
};
pub use ssh::ssh_roots;

use crate::C64;

/// A real number stored as `sign · e^{ln_abs}` so that factors like `r^{±N}`
/// never overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaled {
    pub sign: f64,
    pub ln_abs: f64,
}

impl LogScaled {
    pub const ZERO: Self = Self {
        sign: 0.0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: x.signum(),
                ln_abs: x.abs().ln(),
            }
        }
    }

    /// `x · e^{log_factor}` for `x ≥ 0`-style inputs with an exponent kept in
    /// log form.
    pub fn from_scaled(x: f64, log_factor: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: x.signum(),
                ln_abs: x.abs().ln() + log_factor,
            }
        }
    }

    /// May overflow to `±inf`.
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    pub fn abs(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.ln_abs.exp()
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0.0
    }

    /// Sum of two values, exact in log space when the signs agree.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.ln_abs >= other.ln_abs {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = (lo.ln_abs - hi.ln_abs).exp();
        let s = if hi.sign == lo.sign { 1.0 + ratio } else { 1.0 - ratio };
        if s == 0.0 {
            return Self::ZERO;
        }
        Self {
            sign: hi.sign,
            ln_abs: hi.ln_abs + s.ln(),
        }
    }
}

impl fmt::Display for LogScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0.0 {
            return write!(f, "0");
        }
        let dec = self.ln_abs / std::f64::consts::LN_10;
        let exp = dec.floor();
        let mant = 10f64.powf(dec - exp) * self.sign;
        write!(f, "{mant:.6}e{exp}")
    }
}

/// Classification parameters of a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaParams {
    pub eta1: f64,
    /// `η2` (HN: the exponentially scaled coupling; SSH: `δRδL/(t2Rt2L)`).
    pub eta2: LogScaled,
    /// SSH only: the exponentially scaled coupling.
    pub eta3: Option<LogScaled>,
    pub eta_c: f64,
    /// Whether the scaled coupling is outside the range where polynomial
    /// coefficients stay well-conditioned.
    pub log_scale: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    RealTheta,
    ComplexTheta,
    Edge,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::RealTheta => "real",
            Kind::ComplexTheta => "complex",
            Kind::Edge => "edge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ClosedFormObc,
    MuLine,
    Polynomial,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialPoint {
    /// `μ = 1`.
    Pbc,
    /// `μ = r^N`: real, OBC-like spectrum.
    MPbc,
    /// `μ = r^{2N}`: PBC spectrum with skin modes.
    PPbc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Hn,
    Ssh,
}

/// One solution `θ` with its Bloch factors and energy.
///
/// For SSH records `energy` is the principal square root; the partner
/// `-energy` belongs to the same record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootRecord {
    pub theta: C64,
    pub z1: C64,
    pub z2: C64,
    pub energy: C64,
    pub kind: Kind,
    pub pair_index: usize,
    pub multiplicity: usize,
}

/// Complete analytic solution of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub model: ModelKind,
    /// `N` for HN, `M` for SSH.
    pub size: usize,
    pub records: Vec<RootRecord>,
    pub method: SolveMethod,
    pub special: Option<SpecialPoint>,
}

impl ModeSet {
    /// Energies with multiplicity; SSH records contribute `+E` then `-E`.
    pub fn energies(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.dim());
        for r in &self.records {
            for _ in 0..r.multiplicity {
                out.push(r.energy);
                if self.model == ModelKind::Ssh {
                    out.push(-r.energy);
                }
            }
        }
        out
    }

    /// Hamiltonian dimension.
    pub fn dim(&self) -> usize {
        match self.model {
            ModelKind::Hn => self.size,
            ModelKind::Ssh => 2 * self.size,
        }
    }

    pub fn n_real_theta(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.kind == Kind::RealTheta)
            .map(|r| r.multiplicity)
            .sum()
    }

    /// Largest `|Im E|` over the spectrum.
    pub fn max_im_energy(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.energy.im.abs())
            .fold(0.0, f64::max)
    }

    /// Both Bloch factors of every record.
    pub fn z_points(&self) -> Vec<C64> {
        self.records.iter().flat_map(|r| [r.z1, r.z2]).collect()
    }

    /// CSV with columns `index, re_theta, im_theta, re_E, im_E, abs_z1,
    /// abs_z2, kind`, one row per energy.
    pub fn to_csv(&self) -> crate::io::CsvTable {
        use crate::io::fmt_f64;
        let mut t = crate::io::CsvTable::new(&[
            "index", "re_theta", "im_theta", "re_E", "im_E", "abs_z1", "abs_z2", "kind",
        ]);
        let mut idx = 0;
        for r in &self.records {
            let branches: &[f64] = if self.model == ModelKind::Ssh { &[1.0, -1.0] } else { &[1.0] };
            for _ in 0..r.multiplicity {
                for s in branches {
                    let e = r.energy * *s;
                    t.push(vec![
                        idx.to_string(),
                        fmt_f64(r.theta.re),
                        fmt_f64(r.theta.im),
                        fmt_f64(e.re),
                        fmt_f64(e.im),
                        fmt_f64(r.z1.norm()),
                        fmt_f64(r.z2.norm()),
                        r.kind.as_str().to_string(),
                    ]);
                    idx += 1;
                }
            }
        }
        t
    }
}

const EDGE_ANGLE_TOL: f64 = 1e-8;

/// Kind of a root from its normalized angle.
pub(crate) fn kind_of(theta: C64, model: ModelKind) -> Kind {
    use std::f64::consts::PI;
    if theta.im.abs() <= REAL_THETA_TOL {
        return Kind::RealTheta;
    }
    let re = theta.re;
    let at_edge = (re - PI).abs() <= EDGE_ANGLE_TOL
        || re <= EDGE_ANGLE_TOL
        || (2.0 * PI - re) <= EDGE_ANGLE_TOL;
    if model == ModelKind::Ssh && at_edge {
        Kind::Edge
    } else {
        Kind::ComplexTheta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_scaled_arithmetic() {
        let a = LogScaled::from_value(3.0);
        let b = LogScaled::from_scaled(2.0, 1000.0);
        let s = a.add(&b);
        assert!((s.ln_abs - (2f64.ln() + 1000.0)).abs() < 1e-12);
        assert_eq!(b.value(), f64::INFINITY);
        assert!((a.add(&LogScaled::from_value(-1.0)).value() - 2.0).abs() < 1e-15);
        assert!(a.add(&a.neg()).is_zero());
        assert_eq!(LogScaled::ZERO.add(&a), a);
    }

    #[test]
    fn display_is_scientific() {
        assert_eq!(LogScaled::from_value(-1234.5).to_string(), "-1.234500e3");
    }
}
