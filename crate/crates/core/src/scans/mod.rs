//! Parameter scans: boundary-plane grids, spectral flows, SSH phase
//! diagrams and fragility ladders.
//!
//! Every grid cell or route step is an independent work item run through an
//! [`Executor`](crate::exec::Executor). The analytic solver is tried first;
//! if it fails the dense oracle takes over and the item is flagged.

mod flow;
mod fragility;
mod grid;
mod phase;

pub use flow::{closed_form, spectral_flow, ClosedForm, EndpointCheck, FlowResult, FlowRoute, FlowStep, RouteKind};
pub use fragility::{
    fragility_sweep, skin2d_fragility, FragilityReport, FragilityRow, TwoDRow, TwoDSpec,
};
pub use grid::{boundary_grid_scan, Axis, Cell, ScanGrid};
pub use phase::{boundary_samples, ssh_phase_scan};

use crate::analytic::{hn_all_modes, hn_roots, ssh_all_modes, ssh_roots, ModeSet};
use crate::models::{build_hn, build_ssh, ChainSpec, SshSpec};
use crate::oracle::{eig_dense_with, EigOptions};
use crate::{DenseMatrix, Result, C64};

/// How a scan item was solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Analytic,
    OracleFallback,
    Failed,
}

impl CellStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellStatus::Analytic => "analytic",
            CellStatus::OracleFallback => "oracle",
            CellStatus::Failed => "failed",
        }
    }
}

/// Spectrum of one chain with optional right eigenvectors.
#[derive(Debug, Clone)]
pub struct Solved {
    pub status: CellStatus,
    pub energies: Vec<C64>,
    pub vectors: Vec<Vec<C64>>,
    /// Present on the analytic path only.
    pub modes: Option<ModeSet>,
    pub error: Option<String>,
}

impl Solved {
    fn failed(err: String) -> Self {
        Self {
            status: CellStatus::Failed,
            energies: vec![],
            vectors: vec![],
            modes: None,
            error: Some(err),
        }
    }

    pub fn n_real_theta(&self) -> Option<usize> {
        self.modes.as_ref().map(|m| m.n_real_theta())
    }

    pub fn max_im_energy(&self) -> f64 {
        self.energies.iter().map(|e| e.im.abs()).fold(0.0, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.energies.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }
}

fn oracle_fallback(h: Result<DenseMatrix>, vectors: bool, analytic_err: String) -> Solved {
    let opts = EigOptions {
        vectors,
        ..EigOptions::default()
    };
    match h.and_then(|h| eig_dense_with(&h, &opts)) {
        Ok(r) => Solved {
            status: CellStatus::OracleFallback,
            energies: r.eigenvalues,
            vectors: r.vectors,
            modes: None,
            error: Some(analytic_err),
        },
        Err(e) => Solved::failed(format!("{analytic_err}; oracle: {e}")),
    }
}

/// Solves an HN chain analytically, falling back to the dense oracle.
pub fn solve_hn(spec: &ChainSpec, vectors: bool) -> Solved {
    let analytic = hn_roots(spec).and_then(|set| {
        let vecs = if vectors {
            hn_all_modes(&set, spec)?.into_iter().map(|m| m.amplitudes).collect()
        } else {
            vec![]
        };
        Ok((set, vecs))
    });
    match analytic {
        Ok((set, vecs)) => Solved {
            status: CellStatus::Analytic,
            energies: set.energies(),
            vectors: vecs,
            modes: Some(set),
            error: None,
        },
        Err(e) => oracle_fallback(build_hn(spec), vectors, e.to_string()),
    }
}

/// Solves an SSH chain analytically, falling back to the dense oracle.
pub fn solve_ssh(spec: &SshSpec, vectors: bool) -> Solved {
    let analytic = ssh_roots(spec).and_then(|set| {
        let vecs = if vectors {
            ssh_all_modes(&set, spec)?.into_iter().map(|m| m.amplitudes).collect()
        } else {
            vec![]
        };
        Ok((set, vecs))
    });
    match analytic {
        Ok((set, vecs)) => Solved {
            status: CellStatus::Analytic,
            energies: set.energies(),
            vectors: vecs,
            modes: Some(set),
            error: None,
        },
        Err(e) => oracle_fallback(build_ssh(spec), vectors, e.to_string()),
    }
}
