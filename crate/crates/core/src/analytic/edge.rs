use num_complex::Complex64;

use crate::models::SshSpec;
use crate::{Error, Result, C64};

/// OBC edge-state solution `θ = π + iφ` of the SSH chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeSolution {
    pub phi: f64,
    /// Positive branch of `±E_e`.
    pub energy: C64,
    pub alpha_c: f64,
    /// `|cosh φ + sinh φ·coth(Mφ) − α| / α`.
    pub residual: f64,
    /// Leading-order closed form `ln[α(1 + (1−α²)/(1+α^{2(M+1)}))]`.
    pub phi_closed_form: f64,
}

impl EdgeSolution {
    /// `|ΔE_e| = 2|E_e|`.
    pub fn splitting(&self) -> f64 {
        2.0 * self.energy.norm()
    }
}

/// Residual of `sinh((M+1)φ) = α sinh(Mφ)` divided by `sinh(Mφ)`.
fn h(phi: f64, m: f64, alpha: f64) -> f64 {
    phi.cosh() + phi.sinh() / (m * phi).tanh() - alpha
}

/// Solves for the edge decay `φ` and energy `E_e`.
///
/// Writing `e^φ = α + d`, the equation becomes
/// `d = (1 − α² − αd)/(α + d)^{2M+1}`; `d` is solved directly so that
/// `E_e² = −√P·d·(α(α+d) − 1)/(α(α+d))` keeps full relative precision even
/// when `d` is far below machine epsilon relative to `α`.
pub fn ssh_obc_edge(spec: &SshSpec) -> Result<EdgeSolution> {
    spec.validate()?;
    if !spec.is_obc() {
        return Err(Error::InvalidSpec("edge solution requires dL = dR = 0".into()));
    }
    let m = spec.m as f64;
    let alpha = spec.alpha();
    let alpha_c = 1.0 + 1.0 / m;
    if alpha <= alpha_c {
        return Err(Error::NoEdgeSolution { alpha, alpha_c });
    }
    let k = 2.0 * m + 1.0;
    let f = |d: f64| {
        let q = alpha + d;
        let p = (-k * q.ln()).exp();
        let num = 1.0 - alpha * alpha - alpha * d;
        let val = d - num * p;
        let der = 1.0 + alpha * p + num * k * p / q;
        (val, der, d.abs() + (num * p).abs())
    };

    // bracket φ ∈ (0, ln α]: h < 0 near 0, h ≥ 0 at ln α
    let (mut lo, mut hi) = (1e-300f64.max(1e-12 / m), alpha.ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid, m, alpha) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let d_bisect = (0.5 * (lo + hi)).exp() - alpha;
    let d_closed = alpha * (1.0 - alpha * alpha) / (1.0 + alpha.powf(2.0 * m + 2.0));
    let mut d = if f(d_closed).0.abs() <= f(d_bisect).0.abs() {
        d_closed
    } else {
        d_bisect
    };
    let (mut val, mut der, _) = f(d);
    for _ in 0..100 {
        if val == 0.0 || der == 0.0 {
            break;
        }
        let dn = d - val / der;
        let (vn, dern, _) = f(dn);
        if !(vn.abs() < val.abs()) {
            break;
        }
        d = dn;
        val = vn;
        der = dern;
    }
    let (fv, _, scale) = f(d);
    let q = alpha + d;
    if !(q > 1.0) || fv.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::RootFinding {
            residual: fv.abs() / scale,
            iterations: 100,
        });
    }
    let phi = q.ln();
    let e2 = -spec.sqrt_p() * d * (alpha * q - 1.0) / (alpha * q);
    let phi_closed_form = (alpha * (1.0 + (1.0 - alpha * alpha) / (1.0 + alpha.powf(2.0 * m + 2.0)))).ln();
    Ok(EdgeSolution {
        phi,
        energy: Complex64::new(e2, 0.0).sqrt(),
        alpha_c,
        residual: h(phi, m, alpha).abs() / alpha,
        phi_closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_trivial_side() {
        let spec = SshSpec::obc(10, 1.0, 1.0, 1.05, 1.05).unwrap();
        assert!(matches!(ssh_obc_edge(&spec), Err(Error::NoEdgeSolution { .. })));
        let gbc = SshSpec::new(10, 0.5, 0.3, 1.0, 1.0, 0.1, 0.0).unwrap();
        assert!(ssh_obc_edge(&gbc).is_err());
    }

    #[test]
    fn sinh_residual_and_large_m_limit() {
        for m in [6usize, 8, 30, 200] {
            let spec = SshSpec::obc(m, 0.5, 0.3, 1.0, 1.0).unwrap();
            let e = ssh_obc_edge(&spec).unwrap();
            let (a, mf) = (spec.alpha(), m as f64);
            let lhs = ((mf + 1.0) * e.phi).sinh();
            let rhs = a * (mf * e.phi).sinh();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs(), "M={m}");
            assert_eq!(e.alpha_c, 1.0 + 1.0 / mf);
            assert!((e.phi - a.ln()).abs() < 1.0 / mf);
            // E_e² against the cosh form where it is still resolvable
            if m <= 8 {
                let e2 = -2.0 * spec.sqrt_p() * e.phi.cosh()
                    + spec.t1r * spec.t1l
                    + spec.t2r * spec.t2l;
                assert!((e.energy * e.energy - e2).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn near_critical_alpha() {
        // α just above 1 + 1/M
        let m = 10;
        let alpha: f64 = 1.1 + 1e-4;
        let t1 = 1.0 / alpha;
        let spec = SshSpec::obc(m, t1, t1, 1.0, 1.0).unwrap();
        let e = ssh_obc_edge(&spec).unwrap();
        assert!(e.phi > 0.0 && e.phi < 0.1);
        assert!(e.residual < 1e-12);
    }
}
