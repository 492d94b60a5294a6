use crate::{DenseMatrix, Error, Result};

/// Hatano–Nelson chain with boundary couplings.
///
/// `delta_r` couples site `N` into site `1` (entry `H[1][N]`), `delta_l`
/// couples site `1` into site `N` (entry `H[N][1]`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub n: usize,
    pub t_l: f64,
    pub t_r: f64,
    pub delta_l: f64,
    pub delta_r: f64,
}

impl ChainSpec {
    pub fn new(n: usize, t_l: f64, t_r: f64, delta_l: f64, delta_r: f64) -> Result<Self> {
        let spec = Self {
            n,
            t_l,
            t_r,
            delta_l,
            delta_r,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn obc(n: usize, t_l: f64, t_r: f64) -> Result<Self> {
        Self::new(n, t_l, t_r, 0.0, 0.0)
    }

    pub fn pbc(n: usize, t_l: f64, t_r: f64) -> Result<Self> {
        Self::new(n, t_l, t_r, t_l, t_r)
    }

    /// Boundary couplings given as ratios `δL/tL` and `δR/tR`.
    pub fn from_ratios(n: usize, t_l: f64, t_r: f64, x_l: f64, x_r: f64) -> Result<Self> {
        Self::new(n, t_l, t_r, x_l * t_l, x_r * t_r)
    }

    /// Point `(δL/tL, δR/tR) = (μ, 1/μ)` on the line `tR/δR = δL/tL = μ`.
    pub fn mu_line(n: usize, t_l: f64, t_r: f64, mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidSpec(format!("mu must be positive, got {mu}")));
        }
        Self::new(n, t_l, t_r, mu * t_l, t_r / mu)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSpec(format!("N must be >= 2, got {}", self.n)));
        }
        for (name, v) in [
            ("tL", self.t_l),
            ("tR", self.t_r),
            ("dL", self.delta_l),
            ("dR", self.delta_r),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} is not finite")));
            }
        }
        if self.t_l * self.t_r <= 0.0 {
            return Err(Error::InvalidSpec("tL*tR must be positive".into()));
        }
        if self.delta_r * self.t_r < 0.0 || self.delta_l * self.t_l < 0.0 {
            return Err(Error::InvalidSpec(
                "boundary couplings must share the sign of the bulk hopping".into(),
            ));
        }
        if !self.ln_r().is_finite() {
            return Err(Error::InvalidSpec("r = sqrt(tR/tL) is not finite".into()));
        }
        Ok(())
    }

    /// `r = √(tR/tL)`.
    pub fn r(&self) -> f64 {
        (self.t_r / self.t_l).sqrt()
    }

    /// `g = ln r`.
    pub fn ln_r(&self) -> f64 {
        0.5 * (self.t_r / self.t_l).ln()
    }

    /// `sgn(tL)·√(tL tR)`: the prefactor of `2 cos θ` in the energy.
    pub fn hopping_scale(&self) -> f64 {
        self.t_l.signum() * (self.t_l * self.t_r).sqrt()
    }

    pub fn x_l(&self) -> f64 {
        self.delta_l / self.t_l
    }

    pub fn x_r(&self) -> f64 {
        self.delta_r / self.t_r
    }

    pub fn is_obc(&self) -> bool {
        self.delta_l == 0.0 && self.delta_r == 0.0
    }

    pub fn with_size(&self, n: usize) -> Self {
        Self { n, ..*self }
    }
}

pub fn build_hn(spec: &ChainSpec) -> Result<DenseMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut h = DenseMatrix::zeros(n);
    for i in 0..n - 1 {
        h.add_real(i, i + 1, spec.t_l);
        h.add_real(i + 1, i, spec.t_r);
    }
    if spec.delta_r != 0.0 {
        h.add_real(0, n - 1, spec.delta_r);
    }
    if spec.delta_l != 0.0 {
        h.add_real(n - 1, 0, spec.delta_l);
    }
    h.check_finite()?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn two_site_obc() {
        let h = build_hn(&ChainSpec::obc(2, 1.0, 0.85).unwrap()).unwrap();
        let want = DenseMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.85, 0.0]]);
        assert_eq!(h, want);
    }

    #[test]
    fn two_site_boundary_terms_accumulate() {
        let h = build_hn(&ChainSpec::new(2, 1.0, 0.5, 0.25, 0.125).unwrap()).unwrap();
        assert_eq!(h[(0, 1)], Complex64::new(1.125, 0.0));
        assert_eq!(h[(1, 0)], Complex64::new(0.75, 0.0));
    }

    #[test]
    fn sparsity_counts() {
        let obc = build_hn(&ChainSpec::obc(9, 1.0, 0.7).unwrap()).unwrap();
        assert_eq!(obc.nnz(), 2 * 9 - 2);
        let gbc = build_hn(&ChainSpec::new(9, 1.0, 0.7, 0.09, 0.56).unwrap()).unwrap();
        assert_eq!(gbc.nnz(), 2 * 9);
        for i in 0..9 {
            assert!(gbc.row(i).iter().filter(|z| z.norm() > 0.0).count() <= 2);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ChainSpec::obc(1, 1.0, 1.0).is_err());
        assert!(ChainSpec::obc(4, 1.0, -1.0).is_err());
        assert!(ChainSpec::new(4, 1.0, 1.0, f64::NAN, 0.0).is_err());
        assert!(ChainSpec::new(4, 1.0, 1.0, -0.1, 0.0).is_err());
        assert!(ChainSpec::new(4, -1.0, -2.0, -0.1, -0.2).is_ok());
    }

    #[test]
    fn hermitian_limit() {
        let h = build_hn(&ChainSpec::pbc(7, 0.8, 0.8).unwrap()).unwrap();
        assert!(h.is_hermitian(0.0));
    }
}
