use std::f64::consts::PI;

use num_complex::Complex64;

use super::classify::hn_eta;
use super::solve::{normalize_theta, ThetaEquation, ThetaRoot};
use super::{kind_of, ModeSet, ModelKind, RootRecord, SolveMethod, SpecialPoint};
use crate::models::ChainSpec;
use crate::{Error, Result, C64};

const MU_LINE_TOL: f64 = 1e-12;
const SPECIAL_TOL: f64 = 1e-12;

/// `μ` when the couplings satisfy `tR/δR = δL/tL` to relative `1e-12`.
pub fn mu_line_value(spec: &ChainSpec) -> Option<f64> {
    if spec.delta_l == 0.0 || spec.delta_r == 0.0 {
        return None;
    }
    let lhs = spec.t_r / spec.delta_r;
    let rhs = spec.delta_l / spec.t_l;
    ((lhs - rhs).abs() <= MU_LINE_TOL * lhs.abs().max(rhs.abs())).then_some(rhs)
}

pub(crate) fn hn_record(spec: &ChainSpec, root: &ThetaRoot, index: usize) -> RootRecord {
    let r = spec.r();
    let theta = root.theta;
    let i = Complex64::new(0.0, 1.0);
    RootRecord {
        theta,
        z1: r * (i * theta).exp(),
        z2: r * (-i * theta).exp(),
        energy: 2.0 * spec.hopping_scale() * root.c,
        kind: kind_of(theta, ModelKind::Hn),
        pair_index: index,
        multiplicity: root.multiplicity,
    }
}

fn obc_roots(n: usize) -> Vec<ThetaRoot> {
    (1..=n)
        .map(|m| {
            let t = m as f64 * PI / (n + 1) as f64;
            ThetaRoot {
                c: Complex64::new(t.cos(), 0.0),
                theta: Complex64::new(t, 0.0),
                multiplicity: 1,
            }
        })
        .collect()
}

/// Exact spectrum of a Hatano–Nelson chain.
///
/// OBC and `μ`-line couplings use closed forms; everything else goes through
/// the characteristic equation.
pub fn hn_roots(spec: &ChainSpec) -> Result<ModeSet> {
    spec.validate()?;
    if spec.is_obc() {
        let records = obc_roots(spec.n)
            .iter()
            .enumerate()
            .map(|(k, root)| hn_record(spec, root, k + 1))
            .collect();
        return Ok(ModeSet {
            model: ModelKind::Hn,
            size: spec.n,
            records,
            method: SolveMethod::ClosedFormObc,
            special: None,
        });
    }
    if mu_line_value(spec).is_some() {
        return hn_mu_line(spec);
    }
    let eta = hn_eta(spec);
    let eq = ThetaEquation::hn(spec.n, eta.eta1, eta.eta2);
    let (roots, method) = eq.solve()?;
    let records = roots
        .iter()
        .enumerate()
        .map(|(k, root)| hn_record(spec, root, k + 1))
        .collect();
    Ok(ModeSet {
        model: ModelKind::Hn,
        size: spec.n,
        records,
        method,
        special: None,
    })
}

fn special_point(spec: &ChainSpec, ln_mu: f64) -> Option<SpecialPoint> {
    let ng = spec.n as f64 * spec.ln_r();
    let near = |x: f64| (ln_mu - x).abs() <= SPECIAL_TOL * x.abs().max(1.0);
    if near(0.0) {
        Some(SpecialPoint::Pbc)
    } else if near(ng) {
        Some(SpecialPoint::MPbc)
    } else if near(2.0 * ng) {
        Some(SpecialPoint::PPbc)
    } else {
        None
    }
}

/// Closed-form solution on the line `tR/δR = δL/tL = μ`:
/// `z = μ^{1/N} e^{2πim/N}` and `E = tL z + tR/z`.
pub fn hn_mu_line(spec: &ChainSpec) -> Result<ModeSet> {
    spec.validate()?;
    let mu = mu_line_value(spec).ok_or(Error::OffMuLine {
        lhs: if spec.delta_r != 0.0 { spec.t_r / spec.delta_r } else { f64::INFINITY },
        rhs: spec.x_l(),
    })?;
    let n = spec.n;
    let nf = n as f64;
    let ln_mu = mu.ln();
    let g = spec.ln_r();
    let r2 = spec.t_r / spec.t_l;
    let records = (0..n)
        .map(|m| {
            let phase = 2.0 * PI * m as f64 / nf;
            let z = Complex64::from_polar((ln_mu / nf).exp(), phase);
            // z = r e^{iθ}  ⇒  θ = phase − i(ln|z| − g)
            let raw = Complex64::new(phase, g - ln_mu / nf);
            let theta = normalize_theta(raw);
            let (z1, z2) = if raw.im < 0.0 { (r2 / z, z) } else { (z, r2 / z) };
            RootRecord {
                theta,
                z1,
                z2,
                energy: spec.t_l * z + spec.t_r / z,
                kind: kind_of(theta, ModelKind::Hn),
                pair_index: m,
                multiplicity: 1,
            }
        })
        .collect();
    Ok(ModeSet {
        model: ModelKind::Hn,
        size: n,
        records,
        method: SolveMethod::MuLine,
        special: special_point(spec, ln_mu),
    })
}

/// Bloch factor of a `μ`-line record that carries the eigenvector.
pub(crate) fn mu_line_z(spec: &ChainSpec, rec: &RootRecord) -> Option<C64> {
    let mu = mu_line_value(spec)?;
    let target = mu.ln() / spec.n as f64;
    let d1 = (rec.z1.norm().ln() - target).abs();
    let d2 = (rec.z2.norm().ln() - target).abs();
    Some(if d1 <= d2 { rec.z1 } else { rec.z2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn obc_three_sites() {
        let set = hn_roots(&ChainSpec::obc(3, 1.0, 1.0).unwrap()).unwrap();
        let e: Vec<f64> = set.energies().iter().map(|e| e.re).collect();
        let want = [2f64.sqrt(), 0.0, -(2f64.sqrt())];
        for (a, b) in e.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn pbc_four_sites() {
        let set = hn_mu_line(&ChainSpec::pbc(4, 1.0, 0.85).unwrap()).unwrap();
        assert_eq!(set.special, Some(SpecialPoint::Pbc));
        let want = [
            Complex64::new(1.85, 0.0),
            Complex64::new(0.0, 0.15),
            Complex64::new(-1.85, 0.0),
            Complex64::new(0.0, -0.15),
        ];
        for (e, w) in set.energies().iter().zip(want) {
            assert!((e - w).norm() < 1e-14, "{e} vs {w}");
        }
    }

    #[test]
    fn mpbc_is_real() {
        let (n, tl, tr) = (6, 1.0, 0.7);
        let r: f64 = (tr / tl as f64).sqrt();
        let set = hn_roots(&ChainSpec::mu_line(n, tl, tr, r.powi(n as i32)).unwrap()).unwrap();
        assert_eq!(set.special, Some(SpecialPoint::MPbc));
        for (m, rec) in set.records.iter().enumerate() {
            let want = 2.0 * (tl * tr).sqrt() * (2.0 * PI * m as f64 / n as f64).cos();
            assert!((rec.energy - want).norm() < 1e-14);
            // z on the mPBC circle is r e^{iθ} with real θ
            assert!(rec.theta.im.abs() < 1e-14);
        }
    }

    #[test]
    fn constraint_z1_z2() {
        let spec = ChainSpec::new(9, 1.0, 0.6, 0.4, 0.2).unwrap();
        let set = hn_roots(&spec).unwrap();
        assert_eq!(set.records.iter().map(|r| r.multiplicity).sum::<usize>(), 9);
        for rec in &set.records {
            assert!((rec.z1 * rec.z2 - 0.6).norm() < 1e-12);
            let e = spec.t_l * rec.z1 + spec.t_r / rec.z1;
            assert!((e - rec.energy).norm() < 1e-10);
        }
    }

    #[test]
    fn off_line_rejected() {
        let spec = ChainSpec::new(5, 1.0, 0.5, 0.3, 0.2).unwrap();
        assert!(matches!(hn_mu_line(&spec), Err(Error::OffMuLine { .. })));
    }
}
