use crate::{DenseMatrix, Error, Result};

/// Two-band non-reciprocal SSH chain of `m` cells with boundary couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SshSpec {
    pub m: usize,
    pub t1l: f64,
    pub t1r: f64,
    pub t2l: f64,
    pub t2r: f64,
    pub delta_l: f64,
    pub delta_r: f64,
}

impl SshSpec {
    pub fn new(
        m: usize,
        t1l: f64,
        t1r: f64,
        t2l: f64,
        t2r: f64,
        delta_l: f64,
        delta_r: f64,
    ) -> Result<Self> {
        let spec = Self {
            m,
            t1l,
            t1r,
            t2l,
            t2r,
            delta_l,
            delta_r,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn obc(m: usize, t1l: f64, t1r: f64, t2l: f64, t2r: f64) -> Result<Self> {
        Self::new(m, t1l, t1r, t2l, t2r, 0.0, 0.0)
    }

    pub fn pbc(m: usize, t1l: f64, t1r: f64, t2l: f64, t2r: f64) -> Result<Self> {
        Self::new(m, t1l, t1r, t2l, t2r, t2l, t2r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::InvalidSpec(format!("M must be >= 2, got {}", self.m)));
        }
        for (name, v) in [
            ("t1L", self.t1l),
            ("t1R", self.t1r),
            ("t2L", self.t2l),
            ("t2R", self.t2r),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("dL", self.delta_l), ("dR", self.delta_r)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidSpec(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(self.r().is_finite() && self.alpha().is_finite() && self.r() > 0.0) {
            return Err(Error::InvalidSpec("derived r or alpha not finite".into()));
        }
        Ok(())
    }

    /// `r = √(t1R t2R / (t1L t2L))`.
    pub fn r(&self) -> f64 {
        self.ln_r().exp()
    }

    pub fn ln_r(&self) -> f64 {
        0.5 * ((self.t1r * self.t2r) / (self.t1l * self.t2l)).ln()
    }

    /// `α = √(t2R t2L / (t1R t1L))`.
    pub fn alpha(&self) -> f64 {
        ((self.t2r * self.t2l) / (self.t1r * self.t1l)).sqrt()
    }

    /// `√P` with `P = t1R t2R t1L t2L`.
    pub fn sqrt_p(&self) -> f64 {
        (self.t1r * self.t2r * self.t1l * self.t2l).sqrt()
    }

    pub fn is_obc(&self) -> bool {
        self.delta_l == 0.0 && self.delta_r == 0.0
    }

    pub fn with_size(&self, m: usize) -> Self {
        Self { m, ..*self }
    }
}

/// Index of sublattice `A` (0) or `B` (1) of cell `n` (0-based).
#[inline]
pub fn ssh_index(n: usize, sub: usize) -> usize {
    2 * n + sub
}

pub fn build_ssh(spec: &SshSpec) -> Result<DenseMatrix> {
    spec.validate()?;
    let m = spec.m;
    let mut h = DenseMatrix::zeros(2 * m);
    for n in 0..m {
        let (a, b) = (ssh_index(n, 0), ssh_index(n, 1));
        h.add_real(a, b, spec.t1l);
        h.add_real(b, a, spec.t1r);
        if n + 1 < m {
            let a_next = ssh_index(n + 1, 0);
            h.add_real(a_next, b, spec.t2r);
            h.add_real(b, a_next, spec.t2l);
        }
    }
    let (first_a, last_b) = (ssh_index(0, 0), ssh_index(m - 1, 1));
    if spec.delta_r != 0.0 {
        h.add_real(first_a, last_b, spec.delta_r);
    }
    if spec.delta_l != 0.0 {
        h.add_real(last_b, first_a, spec.delta_l);
    }
    h.check_finite()?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_two_cells() {
        let h = build_ssh(&SshSpec::obc(2, 0.4, 0.4, 1.1, 1.1).unwrap()).unwrap();
        assert!(h.is_hermitian(0.0));
        assert_eq!(h.nnz(), 6);
        assert_eq!(h[(0, 1)].re, 0.4);
        assert_eq!(h[(2, 1)].re, 1.1);
    }

    #[test]
    fn corner_entries() {
        let h = build_ssh(&SshSpec::new(3, 0.5, 0.3, 1.0, 0.9, 0.2, 0.7).unwrap()).unwrap();
        assert_eq!(h[(0, 5)].re, 0.7);
        assert_eq!(h[(5, 0)].re, 0.2);
        assert_eq!(h[(1, 0)].re, 0.3);
        assert_eq!(h[(1, 2)].re, 1.0);
        assert_eq!(h[(2, 1)].re, 0.9);
    }

    #[test]
    fn rejects_nonpositive_hoppings() {
        assert!(SshSpec::obc(4, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(SshSpec::obc(1, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(SshSpec::new(4, 1.0, 1.0, 1.0, 1.0, -0.1, 0.0).is_err());
    }

    #[test]
    fn derived_quantities() {
        let s = SshSpec::obc(8, 0.5, 0.3, 1.0, 1.0).unwrap();
        assert!((s.alpha() - (1.0f64 / 0.15).sqrt()).abs() < 1e-15);
        assert!((s.r() - (0.3f64 / 0.5).sqrt()).abs() < 1e-15);
    }
}
