use super::{solve_hn, CellStatus};
use crate::analytic::{hn_classify, hn_crossover, Regime};
use crate::exec::Executor;
use crate::io::{fmt_f64, CsvTable};
use crate::models::{build_skin2d, build_soti, ChainSpec, Skin2DSpec, SotiSpec};
use crate::observables::{rho_xy, spectral_distance, Reference};
use crate::oracle::{eig_dense_with, EigOptions, DEFAULT_CAP};
use crate::{DenseMatrix, Error, Result};

/// `max|Im E|` above this fraction of the spectral radius counts as complex.
pub const COMPLEX_ONSET_TOL: f64 = 1e-8;
/// Share of cells (or columns) counted as the corner (or edge) region.
pub const CORNER_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct FragilityRow {
    pub n: usize,
    pub max_im_e: f64,
    pub spectral_radius: f64,
    pub dist_pbc: f64,
    pub dist_obc: f64,
    /// Mean of `||z| − 1|` over all Bloch factors.
    pub mean_abs_z_dev: f64,
    pub regime: Regime,
    pub n_real_theta: Option<usize>,
    pub status: CellStatus,
}

impl FragilityRow {
    pub fn is_complex(&self) -> bool {
        self.max_im_e > COMPLEX_ONSET_TOL * self.spectral_radius.max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragilityReport {
    pub rows: Vec<FragilityRow>,
    /// First `N` the classification places outside the all-real regime.
    pub predicted_crossover: Option<usize>,
    /// First swept `N` with complex eigenvalues.
    pub observed_crossover: Option<usize>,
    /// Whether `max|Im E|` never decreases (up to `1e-10`) beyond the
    /// observed crossover.
    pub monotone_beyond_crossover: bool,
}

impl FragilityReport {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "N",
            "max_im_E",
            "dist_pbc",
            "dist_obc",
            "mean_abs_z_dev",
            "regime",
            "n_real_theta",
            "status",
        ]);
        for r in &self.rows {
            t.push(vec![
                r.n.to_string(),
                fmt_f64(r.max_im_e),
                fmt_f64(r.dist_pbc),
                fmt_f64(r.dist_obc),
                fmt_f64(r.mean_abs_z_dev),
                r.regime.as_str().to_string(),
                r.n_real_theta.map_or("NA".to_string(), |n| n.to_string()),
                r.status.as_str().to_string(),
            ]);
        }
        t
    }
}

/// Sweeps the chain length at fixed boundary couplings.
pub fn fragility_sweep(template: &ChainSpec, sizes: &[usize], exec: &Executor) -> Result<FragilityReport> {
    template.validate()?;
    if sizes.is_empty() {
        return Err(Error::Empty("size list"));
    }
    let rows = exec.map(sizes, |&n| {
        let spec = template.with_size(n);
        let solved = solve_hn(&spec, false);
        let mean_abs_z_dev = solved.modes.as_ref().map_or(f64::NAN, |m| {
            let z = m.z_points();
            z.iter().map(|z| (z.norm() - 1.0).abs()).sum::<f64>() / z.len() as f64
        });
        FragilityRow {
            n,
            max_im_e: solved.max_im_energy(),
            spectral_radius: solved.spectral_radius(),
            dist_pbc: spectral_distance(&solved.energies, Reference::PbcCurve, &spec),
            dist_obc: spectral_distance(&solved.energies, Reference::ObcSegment, &spec),
            mean_abs_z_dev,
            regime: hn_classify(&spec).regime,
            n_real_theta: solved.n_real_theta(),
            status: solved.status,
        }
    });
    let n_max = sizes.iter().copied().max().unwrap_or(2);
    let predicted_crossover = hn_crossover(template, n_max);
    let mut sorted: Vec<&FragilityRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.n);
    let observed_crossover = sorted.iter().find(|r| r.is_complex()).map(|r| r.n);
    let monotone_beyond_crossover = match observed_crossover {
        Some(nc) => sorted
            .windows(2)
            .filter(|w| w[0].n >= nc)
            .all(|w| w[1].max_im_e >= w[0].max_im_e - 1e-10),
        None => true,
    };
    Ok(FragilityReport {
        rows,
        predicted_crossover,
        observed_crossover,
        monotone_beyond_crossover,
    })
}

/// A 2D model whose size can be varied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwoDSpec {
    Skin(Skin2DSpec),
    Soti(SotiSpec),
}

impl TwoDSpec {
    pub fn with_size(&self, nx: usize, ny: usize) -> Self {
        match *self {
            TwoDSpec::Skin(s) => TwoDSpec::Skin(Skin2DSpec { nx, ny, ..s }),
            TwoDSpec::Soti(s) => TwoDSpec::Soti(SotiSpec { mx: nx, my: ny, ..s }),
        }
    }

    pub fn extents(&self) -> (usize, usize) {
        match self {
            TwoDSpec::Skin(s) => (s.nx, s.ny),
            TwoDSpec::Soti(s) => (s.mx, s.my),
        }
    }

    pub fn sublattices(&self) -> usize {
        match self {
            TwoDSpec::Skin(_) => 1,
            TwoDSpec::Soti(_) => 4,
        }
    }

    pub fn dim(&self) -> usize {
        let (a, b) = self.extents();
        a * b * self.sublattices()
    }

    pub fn build(&self) -> Result<DenseMatrix> {
        match self {
            TwoDSpec::Skin(s) => build_skin2d(s),
            TwoDSpec::Soti(s) => build_soti(s),
        }
    }

    /// Whether the y direction is exactly periodic, so localization is
    /// measured against an x-edge rather than a corner.
    pub fn periodic_y(&self) -> bool {
        match self {
            TwoDSpec::Skin(s) => s.d_ly == s.t_ly && s.d_ry == s.t_ry,
            TwoDSpec::Soti(s) => s.d_ly == s.lambda && s.d_ry == s.lambda,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoDRow {
    pub nx: usize,
    pub ny: usize,
    /// Corner mass, or edge mass when y is periodic.
    pub localization: f64,
    pub max_im_e: f64,
    pub max_residual: f64,
}

impl TwoDRow {
    pub fn csv(rows: &[TwoDRow]) -> CsvTable {
        let mut t = CsvTable::new(&["Nx", "Ny", "localization", "max_im_E", "max_residual"]);
        for r in rows {
            t.push(vec![
                r.nx.to_string(),
                r.ny.to_string(),
                fmt_f64(r.localization),
                fmt_f64(r.max_im_e),
                fmt_f64(r.max_residual),
            ]);
        }
        t
    }
}

/// Localization of the mode-averaged density over a size ladder.
pub fn skin2d_fragility(template: &TwoDSpec, sizes: &[(usize, usize)], exec: &Executor) -> Result<Vec<TwoDRow>> {
    for &(nx, ny) in sizes {
        let s = template.with_size(nx, ny);
        if s.dim() > DEFAULT_CAP {
            return Err(Error::DimensionCap {
                dim: s.dim(),
                cap: DEFAULT_CAP,
            });
        }
    }
    exec.map(sizes, |&(nx, ny)| {
        let s = template.with_size(nx, ny);
        let h = s.build()?;
        let r = eig_dense_with(&h, &EigOptions::default())?;
        let rho = rho_xy(&r.vectors, nx, ny, s.sublattices())?;
        let localization = if s.periodic_y() {
            rho.edge_mass(CORNER_FRACTION).0
        } else {
            rho.corner_mass(CORNER_FRACTION).0
        };
        Ok(TwoDRow {
            nx,
            ny,
            localization,
            max_im_e: r.eigenvalues.iter().map(|e| e.im.abs()).fold(0.0, f64::max),
            max_residual: r.max_residual(),
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn obc_control_stays_on_segment() {
        let t = ChainSpec::obc(8, 1.0, 0.7).unwrap();
        let rep = fragility_sweep(&t, &[8, 16, 32], &Executor::sequential()).unwrap();
        for r in &rep.rows {
            assert!(r.dist_obc < 1e-10);
            assert_eq!(r.regime, Regime::AllReal);
        }
        assert_eq!(rep.observed_crossover, None);
        assert_eq!(rep.predicted_crossover, None);
    }

    #[test]
    fn over_cap_rejected() {
        let s = TwoDSpec::Skin(Skin2DSpec::isotropic(4, 4, 1.0, 0.5, 0.0).unwrap());
        assert!(matches!(
            skin2d_fragility(&s, &[(100, 100)], &Executor::sequential()),
            Err(Error::DimensionCap { .. })
        ));
    }
}
