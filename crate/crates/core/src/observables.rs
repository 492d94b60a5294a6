//! Localization and spectral diagnostics.

use num_complex::Complex64;

use crate::analytic::ModeSet;
use crate::io::{fmt_f64, CsvTable};
use crate::models::ChainSpec;
use crate::{Error, Result, C64};

/// Sampling density of the reference curves before local refinement.
pub const CURVE_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct IprReport {
    pub per_mode: Vec<f64>,
    pub mean: f64,
}

impl IprReport {
    /// Appends an `ipr` column to a spectrum table with one row per mode.
    pub fn append_to(&self, table: &mut CsvTable) {
        table.push_column("ipr", self.per_mode.iter().map(|x| fmt_f64(*x)).collect());
    }
}

/// `Σ|ψ_n|⁴ / (Σ|ψ_n|²)²`, insensitive to the overall scale of `ψ`.
pub fn ipr_single(psi: &[C64]) -> Option<f64> {
    let big = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if big == 0.0 || !big.is_finite() {
        return None;
    }
    let (mut s2, mut s4) = (0.0, 0.0);
    for z in psi {
        let a = (z / big).norm_sqr();
        s2 += a;
        s4 += a * a;
    }
    Some(s4 / (s2 * s2))
}

pub fn ipr<V: AsRef<[C64]>>(modes: &[V]) -> Result<IprReport> {
    if modes.is_empty() {
        return Err(Error::Empty("mode set"));
    }
    let per_mode = modes
        .iter()
        .enumerate()
        .map(|(k, m)| ipr_single(m.as_ref()).ok_or(Error::ZeroVector(k)))
        .collect::<Result<Vec<_>>>()?;
    let mean = per_mode.iter().sum::<f64>() / per_mode.len() as f64;
    Ok(IprReport { per_mode, mean })
}

/// Mode-averaged density on an `nx × ny` grid, site index `(j·nx + i)·sub + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub nx: usize,
    pub ny: usize,
    /// `rho[j·nx + i]`.
    pub rho: Vec<f64>,
    /// `Σ rho`.
    pub normalization: f64,
}

impl DensityProfile {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.rho[j * self.nx + i]
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["x", "y", "rho"]);
        for j in 0..self.ny {
            for i in 0..self.nx {
                t.push(vec![i.to_string(), j.to_string(), fmt_f64(self.at(i, j))]);
            }
        }
        t
    }

    /// Largest mass held by the `fraction` of cells nearest one corner,
    /// with the corner `(i, j)` that attains it.
    pub fn corner_mass(&self, fraction: f64) -> (f64, (usize, usize)) {
        let total = self.rho.len();
        let keep = ((fraction * total as f64).ceil() as usize).clamp(1, total);
        let corners = [
            (0, 0),
            (self.nx - 1, 0),
            (0, self.ny - 1),
            (self.nx - 1, self.ny - 1),
        ];
        let mut best = (f64::NEG_INFINITY, (0, 0));
        for &(ci, cj) in &corners {
            let mut cells: Vec<(usize, f64)> = (0..total)
                .map(|k| {
                    let (i, j) = (k % self.nx, k / self.nx);
                    let (dx, dy) = (i as f64 - ci as f64, j as f64 - cj as f64);
                    (k, dx * dx + dy * dy)
                })
                .collect();
            cells.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            let mass: f64 = cells[..keep].iter().map(|(k, _)| self.rho[*k]).sum();
            if mass > best.0 {
                best = (mass, (ci, cj));
            }
        }
        best
    }

    /// Largest mass held by the `fraction` of columns nearest the left or
    /// right edge, with `true` for the right edge.
    pub fn edge_mass(&self, fraction: f64) -> (f64, bool) {
        let cols = ((fraction * self.nx as f64).ceil() as usize).clamp(1, self.nx);
        let col_sum = |i: usize| (0..self.ny).map(|j| self.at(i, j)).sum::<f64>();
        let left: f64 = (0..cols).map(col_sum).sum();
        let right: f64 = (self.nx - cols..self.nx).map(col_sum).sum();
        if right > left {
            (right, true)
        } else {
            (left, false)
        }
    }
}

/// Mode-averaged density `ρ(x, y) = (1/S)·Σ_s Σ_sub |⟨x, y, sub|Ψ^s⟩|²`
/// with every mode normalized to unit length, so `Σ ρ = 1`.
pub fn rho_xy<V: AsRef<[C64]>>(modes: &[V], nx: usize, ny: usize, sublattices: usize) -> Result<DensityProfile> {
    if modes.is_empty() {
        return Err(Error::Empty("mode set"));
    }
    let dim = nx * ny * sublattices;
    let mut rho = vec![0.0; nx * ny];
    for (k, m) in modes.iter().enumerate() {
        let v = m.as_ref();
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        let nrm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if !(nrm2 > 0.0) {
            return Err(Error::ZeroVector(k));
        }
        for (cell, r) in rho.iter_mut().enumerate() {
            let s: f64 = v[cell * sublattices..(cell + 1) * sublattices]
                .iter()
                .map(|z| z.norm_sqr())
                .sum();
            *r += s / nrm2;
        }
    }
    let count = modes.len() as f64;
    for r in rho.iter_mut() {
        *r /= count;
    }
    let normalization = rho.iter().sum();
    Ok(DensityProfile {
        nx,
        ny,
        rho,
        normalization,
    })
}

/// Both Bloch factors of every analytic mode.
pub fn gbz_points(set: &ModeSet) -> Vec<C64> {
    set.z_points()
}

/// `2|E|` for the eigenvalue closest to zero.
pub fn edge_splitting(spectrum: &[C64]) -> Result<f64> {
    spectrum
        .iter()
        .map(|z| z.norm())
        .min_by(f64::total_cmp)
        .map(|e| 2.0 * e)
        .ok_or(Error::Empty("spectrum"))
}

/// Thermodynamic-limit reference spectra of the HN chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// `E(θ) = (tL+tR)cos θ + i(tL−tR)sin θ`.
    PbcCurve,
    /// `E ∈ 2√(tLtR)·[−1, 1]`.
    ObcSegment,
}

fn pbc_point(spec: &ChainSpec, theta: f64) -> C64 {
    Complex64::new((spec.t_l + spec.t_r) * theta.cos(), (spec.t_l - spec.t_r) * theta.sin())
}

fn distance_to_pbc(spec: &ChainSpec, e: C64, samples: &[C64]) -> f64 {
    let n = samples.len();
    let step = std::f64::consts::TAU / n as f64;
    let (k, _) = samples
        .iter()
        .enumerate()
        .map(|(k, p)| (k, (p - e).norm_sqr()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    // golden-section search on the bracketing arc
    let d = |t: f64| (pbc_point(spec, t) - e).norm();
    let (mut a, mut b) = ((k as f64 - 1.0) * step, (k as f64 + 1.0) * step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut dd = a + g * (b - a);
    let (mut fc, mut fd) = (d(c), d(dd));
    for _ in 0..80 {
        if fc < fd {
            b = dd;
            dd = c;
            fd = fc;
            c = b - g * (b - a);
            fc = d(c);
        } else {
            a = c;
            c = dd;
            fc = fd;
            dd = a + g * (b - a);
            fd = d(dd);
        }
    }
    fc.min(fd).min((samples[k] - e).norm())
}

fn distance_to_segment(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / len2;
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// One-sided Hausdorff distance from `spectrum` to a reference spectrum.
pub fn spectral_distance(spectrum: &[C64], reference: Reference, spec: &ChainSpec) -> f64 {
    match reference {
        Reference::PbcCurve => {
            let samples: Vec<C64> = (0..CURVE_SAMPLES)
                .map(|k| pbc_point(spec, std::f64::consts::TAU * k as f64 / CURVE_SAMPLES as f64))
                .collect();
            spectrum
                .iter()
                .map(|e| distance_to_pbc(spec, *e, &samples))
                .fold(0.0, f64::max)
        }
        Reference::ObcSegment => {
            let half = 2.0 * Complex64::new(spec.t_l * spec.t_r, 0.0).sqrt();
            spectrum
                .iter()
                .map(|e| distance_to_segment(*e, -half, half))
                .fold(0.0, f64::max)
        }
    }
}
