use super::grid::{Axis, Cell, ScanGrid};
use super::{solve_ssh, CellStatus};
use crate::analytic::{ssh_phase_point, BoundaryClass};
use crate::exec::Executor;
use crate::models::SshSpec;
use crate::observables::ipr;

/// Phase labels over `(t1R/t2L, t1L/t2R)` at fixed `t2L, t2R` and `M`.
///
/// Labels are the thermodynamic-limit rules; the other columns come from
/// the exact finite-`M` spectrum so they can be checked against the labels.
pub fn ssh_phase_scan(
    template: &SshSpec,
    x_axis: &Axis,
    y_axis: &Axis,
    class: BoundaryClass,
    exec: &Executor,
) -> ScanGrid {
    let x_axis = Axis {
        label: "t1R_over_t2L".into(),
        ..x_axis.clone()
    };
    let y_axis = Axis {
        label: "t1L_over_t2R".into(),
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
        let raw = SshSpec {
            t1r: x * template.t2l,
            t1l: y * template.t2r,
            ..*template
        };
        if let Err(e) = raw.validate() {
            return Cell {
                error: Some(e.to_string()),
                ..base
            };
        }
        let spec = class.apply(&raw);
        let label = ssh_phase_point(&spec, class).to_string();
        let solved = solve_ssh(&spec, true);
        if solved.status == CellStatus::Failed {
            return Cell {
                phase_label: label,
                error: solved.error,
                ..base
            };
        }
        Cell {
            mean_ipr: ipr(&solved.vectors).map_or(f64::NAN, |r| r.mean),
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

/// `count` points `(x, y)` on the phase boundaries of a class, with the free
/// coordinate log-spaced over `[lo, hi]`.
///
/// OBC-type boundaries are `xy = 1`; PBC-type boundaries are `x = 1` and
/// `y = 1`. For `dL0` the OBC rule holds where `r ≤ 1` (`x ≤ y`) and the
/// PBC rules elsewhere; `dR0` is mirrored. Points are dealt round-robin over
/// the segments that apply and never sit on the corner `(1, 1)`.
pub fn boundary_samples(class: BoundaryClass, count: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    #[derive(Clone, Copy)]
    enum Seg {
        /// `(v, 1/v)`
        Hyperbola(f64, f64),
        /// `(1, v)`
        XOne(f64, f64),
        /// `(v, 1)`
        YOne(f64, f64),
    }
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    let below = (lo, hi.min(1.0));
    let above = (lo.max(1.0), hi);
    let segs: Vec<Seg> = match class {
        BoundaryClass::Obc => vec![Seg::Hyperbola(lo, hi)],
        BoundaryClass::Pbc => vec![Seg::XOne(lo, hi), Seg::YOne(lo, hi)],
        BoundaryClass::DL0 => vec![
            Seg::Hyperbola(below.0, below.1),
            Seg::XOne(below.0, below.1),
            Seg::YOne(above.0, above.1),
        ],
        BoundaryClass::DR0 => vec![
            Seg::Hyperbola(above.0, above.1),
            Seg::YOne(below.0, below.1),
            Seg::XOne(above.0, above.1),
        ],
    };
    let segs: Vec<Seg> = segs
        .into_iter()
        .filter(|s| {
            let (Seg::Hyperbola(a, b) | Seg::XOne(a, b) | Seg::YOne(a, b)) = *s;
            b > a
        })
        .collect();
    if segs.is_empty() {
        return Vec::new();
    }
    let per: Vec<usize> = (0..segs.len())
        .map(|k| count / segs.len() + usize::from(k < count % segs.len()))
        .collect();
    let mut lists: Vec<Vec<(f64, f64)>> = segs
        .iter()
        .zip(&per)
        .map(|(seg, &m)| {
            let (Seg::Hyperbola(a, b) | Seg::XOne(a, b) | Seg::YOne(a, b)) = *seg;
            let (la, lb) = (a.ln(), b.ln());
            (0..m)
                .map(|j| {
                    // interior points only, so the corner (1, 1) is skipped
                    let v = (la + (lb - la) * (j as f64 + 0.5) / m as f64).exp();
                    match seg {
                        Seg::Hyperbola(..) => (v, 1.0 / v),
                        Seg::XOne(..) => (1.0, v),
                        Seg::YOne(..) => (v, 1.0),
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        for l in lists.iter_mut() {
            if !l.is_empty() && out.len() < count {
                out.push(l.remove(0));
            }
        }
    }
    out
}
