use num_complex::Complex64;

use super::classify::ssh_eta;
use super::edge::ssh_obc_edge;
use super::solve::{ThetaEquation, ThetaRoot};
use super::{kind_of, Kind, ModeSet, ModelKind, RootRecord};
use crate::models::SshSpec;
use crate::oracle::Dd;
use crate::Result;

/// `E² = 2√P cos θ + t1Rt1L + t2Rt2L`, principal branch.
pub(crate) fn ssh_record(spec: &SshSpec, root: &ThetaRoot, index: usize) -> RootRecord {
    let r = spec.r();
    let theta = root.theta;
    let i = Complex64::new(0.0, 1.0);
    let e2 = 2.0 * spec.sqrt_p() * root.c + spec.t1r * spec.t1l + spec.t2r * spec.t2l;
    RootRecord {
        theta,
        z1: r * (i * theta).exp(),
        z2: r * (-i * theta).exp(),
        energy: e2.sqrt(),
        kind: kind_of(theta, ModelKind::Ssh),
        pair_index: index,
        multiplicity: root.multiplicity,
    }
}

/// `E²` of an OBC edge root is exponentially small and cannot be recovered
/// from `θ` by the cosine form; the dedicated edge solution is substituted.
fn polish_obc_edge(spec: &SshSpec, records: &mut [RootRecord]) {
    let Ok(edge) = ssh_obc_edge(spec) else {
        return;
    };
    let i = Complex64::new(0.0, 1.0);
    let r = spec.r();
    for rec in records.iter_mut().filter(|r| r.kind == Kind::Edge) {
        let s = if rec.theta.im < 0.0 { -1.0 } else { 1.0 };
        let theta = Complex64::new(std::f64::consts::PI, s * edge.phi);
        rec.theta = theta;
        rec.z1 = r * (i * theta).exp();
        rec.z2 = r * (-i * theta).exp();
        rec.energy = edge.energy;
    }
}

/// `|E²|` below this fraction of the squared hopping scale is recomputed
/// from the determinant identity.
const SMALL_E2: f64 = 1e-8;
/// Every other record must stay above this fraction for the division to be
/// well conditioned.
const BULK_E2: f64 = 1e-4;

/// Determinant of an `m × m` cyclic bidiagonal matrix with diagonal `d`,
/// off-diagonal `c` and corner `corner`: `dᵐ + (−1)^{m+1} c^{m−1}·corner`,
/// accumulated in double-double so the two terms may cancel.
fn cyclic_det(d: f64, c: f64, corner: f64, m: usize) -> Dd {
    let mut diag = Dd::new(1.0);
    let mut off = Dd::new(corner);
    for _ in 0..m {
        diag = diag.mul_f64(d);
    }
    for _ in 1..m {
        off = off.mul_f64(c);
    }
    if m % 2 == 0 {
        off = off.neg();
    }
    diag.add(off)
}

/// Recovers one exponentially small `E²` away from OBC.
///
/// In the sublattice basis `H = [[0, Q], [R, 0]]`, so the `E²` of all records
/// multiply to `det Q · det R`. Both determinants are exact two-term
/// formulas, and the bulk energies are well conditioned, so the small value
/// follows by division. The cosine form would lose everything below `√eps`.
fn polish_small_energy(spec: &SshSpec, records: &mut [RootRecord]) {
    let s2 = [spec.t1l, spec.t1r, spec.t2l, spec.t2r, spec.delta_l, spec.delta_r]
        .iter()
        .map(|t| t * t)
        .fold(0.0, f64::max);
    let e2 = |r: &RootRecord| r.energy * r.energy;
    let small: Vec<usize> = (0..records.len())
        .filter(|&k| e2(&records[k]).norm() < SMALL_E2 * s2)
        .collect();
    let [k] = small[..] else { return };
    if records[k].multiplicity != 1 {
        return;
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for (j, r) in records.iter().enumerate() {
        if j == k {
            continue;
        }
        if e2(r).norm() < BULK_E2 * s2 {
            return;
        }
        prod *= e2(r).powu(r.multiplicity as u32);
    }
    let m = spec.m;
    let det_q = cyclic_det(spec.t1l, spec.t2r, spec.delta_r, m).value();
    let det_r = cyclic_det(spec.t1r, spec.t2l, spec.delta_l, m).value();
    let target = det_q * det_r / prod;
    // over- or underflow in the products leaves the cosine value in place
    if target.is_finite() && prod.norm() > f64::MIN_POSITIVE && det_q.abs() > 1e-290 && det_r.abs() > 1e-290 {
        records[k].energy = target.sqrt();
    }
}

/// Exact spectrum of an SSH chain: `M` angle records, `2M` energies.
pub fn ssh_roots(spec: &SshSpec) -> Result<ModeSet> {
    spec.validate()?;
    let eta = ssh_eta(spec);
    let eq = ThetaEquation::ssh(
        spec.m,
        eta.eta1,
        eta.eta2.value(),
        eta.eta3.expect("ssh eta3"),
    );
    let (roots, method) = eq.solve()?;
    let mut records: Vec<RootRecord> = roots
        .iter()
        .enumerate()
        .map(|(k, root)| ssh_record(spec, root, k + 1))
        .collect();
    if spec.is_obc() {
        polish_obc_edge(spec, &mut records);
    } else {
        polish_small_energy(spec, &mut records);
    }
    Ok(ModeSet {
        model: ModelKind::Ssh,
        size: spec.m,
        records,
        method,
        special: None,
    })
}
