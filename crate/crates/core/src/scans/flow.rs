use std::f64::consts::PI;

use num_complex::Complex64;

use super::{solve_hn, CellStatus};
use crate::exec::Executor;
use crate::io::{fmt_f64, CsvTable};
use crate::models::ChainSpec;
use crate::oracle::match_spectra;
use crate::{Error, Result, C64};

/// Decades added beyond `r^{±2N}` at the open ends of S4 and S5.
const OPEN_END_DECADES: f64 = 2.0;

/// Paths through the boundary plane `(δL/tL, δR/tR)`.
#[derive(Debug, Clone, PartialEq)]
pub enum RouteKind {
    /// `(x, x)`, `x: 1 → 0`.
    S1,
    /// `(μ, 1/μ)`, `μ: 1 → r^N`.
    S2,
    /// `μ: r^N → r^{2N}`.
    S3,
    /// `μ: r^{2N} → r^{2N}·10⁻²`.
    S4,
    /// `μ: 1 → e^{2N|ln r|}·10²`.
    S5,
    /// Explicit `(δL/tL, δR/tR)` points.
    Custom(Vec<(f64, f64)>),
}

impl RouteKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S1" => Some(RouteKind::S1),
            "S2" => Some(RouteKind::S2),
            "S3" => Some(RouteKind::S3),
            "S4" => Some(RouteKind::S4),
            "S5" => Some(RouteKind::S5),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RouteKind::S1 => "S1",
            RouteKind::S2 => "S2",
            RouteKind::S3 => "S3",
            RouteKind::S4 => "S4",
            RouteKind::S5 => "S5",
            RouteKind::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowRoute {
    pub kind: RouteKind,
    /// Ignored for custom routes.
    pub steps: usize,
}

impl FlowRoute {
    pub fn new(kind: RouteKind, steps: usize) -> Result<Self> {
        if steps < 2 && !matches!(kind, RouteKind::Custom(_)) {
            return Err(Error::InvalidSpec("a route needs at least 2 steps".into()));
        }
        Ok(Self { kind, steps })
    }

    /// `(param, δL/tL, δR/tR)` per step. S1 is linear in `x`; the μ-routes
    /// are uniform in `ln μ`.
    pub fn points(&self, spec: &ChainSpec) -> Vec<(f64, f64, f64)> {
        let ng = spec.n as f64 * spec.ln_r();
        let log_mu = |a: f64, b: f64| -> Vec<(f64, f64, f64)> {
            (0..self.steps)
                .map(|k| {
                    let s = k as f64 / (self.steps - 1) as f64;
                    let l = a + (b - a) * s;
                    (l.exp(), l.exp(), (-l).exp())
                })
                .collect()
        };
        let dec = OPEN_END_DECADES * std::f64::consts::LN_10;
        match &self.kind {
            RouteKind::S1 => (0..self.steps)
                .map(|k| {
                    let x = 1.0 - k as f64 / (self.steps - 1) as f64;
                    (x, x, x)
                })
                .collect(),
            RouteKind::S2 => log_mu(0.0, ng),
            RouteKind::S3 => log_mu(ng, 2.0 * ng),
            RouteKind::S4 => log_mu(2.0 * ng, 2.0 * ng - dec),
            RouteKind::S5 => log_mu(0.0, 2.0 * ng.abs() + dec),
            RouteKind::Custom(p) => p.iter().enumerate().map(|(k, &(a, b))| (k as f64, a, b)).collect(),
        }
    }

    /// Closed forms expected at the first and last step.
    pub fn endpoints(&self) -> (Option<ClosedForm>, Option<ClosedForm>) {
        use ClosedForm::*;
        match self.kind {
            RouteKind::S1 => (Some(Pbc), Some(Obc)),
            RouteKind::S2 => (Some(Pbc), Some(MPbc)),
            RouteKind::S3 => (Some(MPbc), Some(PPbc)),
            RouteKind::S4 => (Some(PPbc), None),
            RouteKind::S5 => (Some(Pbc), None),
            RouteKind::Custom(_) => (None, None),
        }
    }
}

/// Special boundary conditions with closed-form HN spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Pbc,
    Obc,
    MPbc,
    PPbc,
}

impl ClosedForm {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::Pbc => "PBC",
            ClosedForm::Obc => "OBC",
            ClosedForm::MPbc => "mPBC",
            ClosedForm::PPbc => "pPBC",
        }
    }
}

/// Closed-form spectrum of an `N`-site HN chain at a special boundary.
pub fn closed_form(kind: ClosedForm, spec: &ChainSpec) -> Vec<C64> {
    let n = spec.n;
    let nf = n as f64;
    let s = 2.0 * spec.t_l.signum() * (spec.t_l * spec.t_r).sqrt();
    match kind {
        ClosedForm::Pbc | ClosedForm::PPbc => (0..n)
            .map(|m| {
                let k = 2.0 * PI * m as f64 / nf;
                spec.t_l * Complex64::from_polar(1.0, k) + spec.t_r * Complex64::from_polar(1.0, -k)
            })
            .collect(),
        ClosedForm::Obc => (1..=n)
            .map(|m| Complex64::new(s * (m as f64 * PI / (nf + 1.0)).cos(), 0.0))
            .collect(),
        ClosedForm::MPbc => (0..n)
            .map(|m| Complex64::new(s * (2.0 * PI * m as f64 / nf).cos(), 0.0))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowStep {
    pub step: usize,
    pub param: f64,
    pub x_l: f64,
    pub x_r: f64,
    pub status: CellStatus,
    pub energies: Vec<C64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointCheck {
    pub step: usize,
    pub form: ClosedForm,
    pub max_dist: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub route: FlowRoute,
    pub steps: Vec<FlowStep>,
    pub endpoint_checks: Vec<EndpointCheck>,
}

impl FlowResult {
    /// Columns `step, param_value, mode_index, re_E, im_E`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["step", "param_value", "mode_index", "re_E", "im_E"]);
        for s in &self.steps {
            for (k, e) in s.energies.iter().enumerate() {
                t.push(vec![
                    s.step.to_string(),
                    fmt_f64(s.param),
                    k.to_string(),
                    fmt_f64(e.re),
                    fmt_f64(e.im),
                ]);
            }
        }
        t
    }

    pub fn worst_endpoint(&self) -> f64 {
        self.endpoint_checks.iter().map(|c| c.max_dist).fold(0.0, f64::max)
    }
}

/// Spectra along a route; endpoints are compared with their closed forms.
pub fn spectral_flow(template: &ChainSpec, route: &FlowRoute, exec: &Executor) -> Result<FlowResult> {
    template.validate()?;
    let pts = route.points(template);
    if pts.is_empty() {
        return Err(Error::Empty("route"));
    }
    let items: Vec<(usize, (f64, f64, f64))> = pts.into_iter().enumerate().collect();
    let steps = exec.map(&items, |&(k, (param, x_l, x_r))| {
        match ChainSpec::from_ratios(template.n, template.t_l, template.t_r, x_l, x_r) {
            Ok(spec) => {
                let s = solve_hn(&spec, false);
                FlowStep {
                    step: k,
                    param,
                    x_l,
                    x_r,
                    status: s.status,
                    energies: s.energies,
                    error: s.error,
                }
            }
            Err(e) => FlowStep {
                step: k,
                param,
                x_l,
                x_r,
                status: CellStatus::Failed,
                energies: vec![],
                error: Some(e.to_string()),
            },
        }
    });
    let mut endpoint_checks = Vec::new();
    let (first, last) = route.endpoints();
    for (form, step) in [(first, 0), (last, steps.len() - 1)] {
        let Some(form) = form else { continue };
        let s = &steps[step];
        let max_dist = if s.status == CellStatus::Failed {
            f64::INFINITY
        } else {
            match_spectra(&s.energies, &closed_form(form, template))?.max_dist
        };
        endpoint_checks.push(EndpointCheck { step, form, max_dist });
    }
    Ok(FlowResult {
        route: route.clone(),
        steps,
        endpoint_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_endpoints() {
        let spec = ChainSpec::obc(20, 1.0, 0.85).unwrap();
        let rn = spec.r().powi(20);
        let s2 = FlowRoute::new(RouteKind::S2, 5).unwrap().points(&spec);
        assert!((s2[0].0 - 1.0).abs() < 1e-15);
        assert!((s2[4].0 - rn).abs() < 1e-14 * rn);
        assert!((s2[4].2 * s2[4].1 - 1.0).abs() < 1e-14);
        let s4 = FlowRoute::new(RouteKind::S4, 3).unwrap().points(&spec);
        assert!((s4[2].0 / (rn * rn) - 1e-2).abs() < 1e-14);
        let s5 = FlowRoute::new(RouteKind::S5, 3).unwrap().points(&spec);
        assert!((s5[2].0 * rn * rn - 1e2).abs() < 1e-10);
        let s1 = FlowRoute::new(RouteKind::S1, 3).unwrap().points(&spec);
        assert_eq!(s1.iter().map(|p| p.1).collect::<Vec<_>>(), vec![1.0, 0.5, 0.0]);
    }

    #[test]
    fn s3_endpoints_match_closed_forms() {
        let spec = ChainSpec::obc(12, 1.0, 0.85).unwrap();
        let route = FlowRoute::new(RouteKind::S3, 4).unwrap();
        let res = spectral_flow(&spec, &route, &Executor::sequential()).unwrap();
        assert_eq!(res.endpoint_checks.len(), 2);
        assert!(res.worst_endpoint() < 1e-10, "{:?}", res.endpoint_checks);
        assert_eq!(res.to_csv().len(), 4 * 12);
    }
}
