use std::fmt;

use crate::models::SshSpec;

/// Boundary family of the SSH phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryClass {
    Pbc,
    Obc,
    /// `δL = 0`, `δR ≠ 0`.
    DL0,
    /// `δR = 0`, `δL ≠ 0`.
    DR0,
}

impl BoundaryClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryClass::Pbc => "pbc",
            BoundaryClass::Obc => "obc",
            BoundaryClass::DL0 => "dL0",
            BoundaryClass::DR0 => "dR0",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pbc" | "PBC" => Some(BoundaryClass::Pbc),
            "obc" | "OBC" => Some(BoundaryClass::Obc),
            "dL0" | "dl0" => Some(BoundaryClass::DL0),
            "dR0" | "dr0" => Some(BoundaryClass::DR0),
            _ => None,
        }
    }

    /// Boundary couplings for this class: the cut bond is set to zero and the
    /// other keeps its periodic value.
    pub fn apply(&self, spec: &SshSpec) -> SshSpec {
        let (dl, dr) = match self {
            BoundaryClass::Pbc => (spec.t2l, spec.t2r),
            BoundaryClass::Obc => (0.0, 0.0),
            BoundaryClass::DL0 => (0.0, spec.t2r),
            BoundaryClass::DR0 => (spec.t2l, 0.0),
        };
        SshSpec {
            delta_l: dl,
            delta_r: dr,
            ..*spec
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Topological,
    Trivial,
    /// PBC-like structure with exactly one of `x, y` below one.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Skin {
    Left,
    Right,
    None,
}

/// Phase of one point `(x, y) = (t1R/t2L, t1L/t2R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseLabel {
    pub region: Region,
    pub skin: Skin,
    pub bound_states: bool,
    /// Whether the point follows OBC-type (`xy = 1`) rather than PBC-type
    /// (`x = 1`, `y = 1`) boundaries.
    pub obc_like: bool,
    /// Log-scale distance to the nearest boundary that applies.
    pub boundary_distance: f64,
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let region = match self.region {
            Region::Topological => "topological",
            Region::Trivial => "trivial",
            Region::Mixed => "mixed",
        };
        let skin = match self.skin {
            Skin::Left => "left",
            Skin::Right => "right",
            Skin::None => "none",
        };
        let bound = if self.bound_states { "bound" } else { "nobound" };
        write!(f, "{region}/{skin}/{bound}")
    }
}

fn obc_rules(x: f64, y: f64, skin: Skin) -> PhaseLabel {
    let lxy = (x * y).ln();
    let topo = lxy < 0.0;
    PhaseLabel {
        region: if topo { Region::Topological } else { Region::Trivial },
        skin,
        bound_states: topo,
        obc_like: true,
        boundary_distance: lxy.abs(),
    }
}

fn pbc_rules(x: f64, y: f64) -> PhaseLabel {
    let region = match (x < 1.0, y < 1.0) {
        (true, true) => Region::Topological,
        (false, false) => Region::Trivial,
        _ => Region::Mixed,
    };
    PhaseLabel {
        region,
        skin: Skin::None,
        bound_states: false,
        obc_like: false,
        boundary_distance: x.ln().abs().min(y.ln().abs()),
    }
}

/// Thermodynamic-limit phase label of an SSH chain under a boundary class.
///
/// `r² = x/y`; `r < 1` localizes OBC skin modes on the left edge.
pub fn ssh_phase_point(spec: &SshSpec, class: BoundaryClass) -> PhaseLabel {
    let x = spec.t1r / spec.t2l;
    let y = spec.t1l / spec.t2r;
    let lr = spec.ln_r();
    let obc_skin = if lr < 0.0 {
        Skin::Left
    } else if lr > 0.0 {
        Skin::Right
    } else {
        Skin::None
    };
    match class {
        BoundaryClass::Pbc => pbc_rules(x, y),
        BoundaryClass::Obc => obc_rules(x, y, obc_skin),
        BoundaryClass::DL0 => {
            if lr <= 0.0 {
                obc_rules(x, y, obc_skin)
            } else {
                pbc_rules(x, y)
            }
        }
        BoundaryClass::DR0 => {
            if lr >= 0.0 {
                obc_rules(x, y, obc_skin)
            } else {
                pbc_rules(x, y)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(x: f64, y: f64) -> SshSpec {
        SshSpec::obc(8, y, x, 1.0, 1.0).unwrap()
    }

    #[test]
    fn obc_topological_side() {
        let p = ssh_phase_point(&spec(0.5, 0.8), BoundaryClass::Obc);
        assert_eq!(p.region, Region::Topological);
        assert!(p.bound_states);
        assert_eq!(p.skin, Skin::Left);
        assert_eq!(p.to_string(), "topological/left/bound");
    }

    #[test]
    fn dl0_halves() {
        let left = ssh_phase_point(&spec(0.5, 0.8), BoundaryClass::DL0);
        assert!(left.obc_like);
        assert_eq!(left.skin, Skin::Left);
        let right = ssh_phase_point(&spec(0.8, 0.5), BoundaryClass::DL0);
        assert!(!right.obc_like);
        assert_eq!(right.skin, Skin::None);
        let mirrored = ssh_phase_point(&spec(0.8, 0.5), BoundaryClass::DR0);
        assert!(mirrored.obc_like);
        assert_eq!(mirrored.skin, Skin::Right);
    }

    #[test]
    fn pbc_gap_closing_flag_flips() {
        let below = ssh_phase_point(&spec(0.99, 0.5), BoundaryClass::Pbc);
        let above = ssh_phase_point(&spec(1.01, 0.5), BoundaryClass::Pbc);
        assert_eq!(below.region, Region::Topological);
        assert_eq!(above.region, Region::Mixed);
    }
}
