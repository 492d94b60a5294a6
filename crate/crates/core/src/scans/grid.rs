use super::{solve_hn, CellStatus};
use crate::analytic::hn_classify;
use crate::exec::Executor;
use crate::io::{fmt_f64, CsvTable};
use crate::models::ChainSpec;
use crate::observables::ipr;
use crate::{Error, Result};

/// Inclusive, evenly spaced axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub label: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(label: &str, start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "axis {label}: need finite bounds and at least one step"
            )));
        }
        Ok(Self {
            label: label.to_string(),
            start,
            stop,
            steps,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.stop } else { self.start + h * k as f64 })
            .collect()
    }

    pub fn step(&self) -> f64 {
        if self.steps > 1 {
            (self.stop - self.start) / (self.steps - 1) as f64
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub ix: usize,
    pub iy: usize,
    pub x: f64,
    pub y: f64,
    pub mean_ipr: f64,
    pub n_real_theta: Option<usize>,
    pub max_im_e: f64,
    pub spectral_radius: f64,
    pub phase_label: String,
    pub status: CellStatus,
    pub error: Option<String>,
}

/// Results over a two-axis parameter plane; `cells[iy·nx + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub cells: Vec<Cell>,
}

impl ScanGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &Cell {
        &self.cells[iy * self.x_axis.steps + ix]
    }

    pub fn count(&self, status: CellStatus) -> usize {
        self.cells.iter().filter(|c| c.status == status).count()
    }

    /// Columns: both axis labels, `mean_ipr, n_real_theta, max_im_E,
    /// phase_label, status`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            self.x_axis.label.as_str(),
            self.y_axis.label.as_str(),
            "mean_ipr",
            "n_real_theta",
            "max_im_E",
            "phase_label",
            "status",
        ]);
        for c in &self.cells {
            t.push(vec![
                fmt_f64(c.x),
                fmt_f64(c.y),
                fmt_f64(c.mean_ipr),
                c.n_real_theta.map_or("NA".to_string(), |n| n.to_string()),
                fmt_f64(c.max_im_e),
                c.phase_label.clone(),
                c.status.as_str().to_string(),
            ]);
        }
        t
    }

    pub(crate) fn assemble<F>(x_axis: Axis, y_axis: Axis, exec: &Executor, f: F) -> Self
    where
        F: Fn(usize, usize, f64, f64) -> Cell + Sync + Send,
    {
        let xs = x_axis.values();
        let ys = y_axis.values();
        let items: Vec<(usize, usize)> = (0..ys.len())
            .flat_map(|iy| (0..xs.len()).map(move |ix| (ix, iy)))
            .collect();
        let cells = exec.map(&items, |&(ix, iy)| f(ix, iy, xs[ix], ys[iy]));
        Self { x_axis, y_axis, cells }
    }
}

/// Scans `(δL/tL, δR/tR)` for an HN chain. Each cell records the mean IPR,
/// the number of real `θ`, `max|Im E|` and the regime predicted by the
/// classification, so predicted contours can be overlaid on the observed
/// quantities.
pub fn boundary_grid_scan(template: &ChainSpec, x_axis: &Axis, y_axis: &Axis, exec: &Executor) -> ScanGrid {
    let x_axis = Axis {
        label: "dL_over_tL".into(),
        ..x_axis.clone()
    };
    let y_axis = Axis {
        label: "dR_over_tR".into(),
        ..y_axis.clone()
    };
    ScanGrid::assemble(x_axis, y_axis, exec, |ix, iy, x, y| {
        let base = Cell {
            ix,
            iy,
            x,
            y,
            mean_ipr: f64::NAN,
            n_real_theta: None,
            max_im_e: f64::NAN,
            spectral_radius: f64::NAN,
            phase_label: String::new(),
            status: CellStatus::Failed,
            error: None,
        };
        let spec = match ChainSpec::from_ratios(template.n, template.t_l, template.t_r, x, y) {
            Ok(s) => s,
            Err(e) => {
                return Cell {
                    error: Some(e.to_string()),
                    ..base
                }
            }
        };
        let solved = solve_hn(&spec, true);
        let label = hn_classify(&spec).regime.as_str().to_string();
        if solved.status == CellStatus::Failed {
            return Cell {
                phase_label: label,
                error: solved.error,
                ..base
            };
        }
        let mean_ipr = ipr(&solved.vectors).map_or(f64::NAN, |r| r.mean);
        Cell {
            mean_ipr,
            n_real_theta: solved.n_real_theta(),
            max_im_e: solved.max_im_energy(),
            spectral_radius: solved.spectral_radius(),
            phase_label: label,
            status: solved.status,
            error: solved.error,
            ..base
        }
    })
}
