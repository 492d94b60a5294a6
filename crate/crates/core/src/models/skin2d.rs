use num_complex::Complex64;

use super::ChainSpec;
use crate::{DenseMatrix, Error, Result, C64};

/// Square-lattice Hatano–Nelson model with boundary couplings on both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Skin2DSpec {
    pub nx: usize,
    pub ny: usize,
    pub t_lx: f64,
    pub t_rx: f64,
    pub t_ly: f64,
    pub t_ry: f64,
    pub d_lx: f64,
    pub d_rx: f64,
    pub d_ly: f64,
    pub d_ry: f64,
}

impl Skin2DSpec {
    /// Same hoppings along both axes and a common boundary coupling `delta`.
    pub fn isotropic(nx: usize, ny: usize, t_l: f64, t_r: f64, delta: f64) -> Result<Self> {
        let s = Self {
            nx,
            ny,
            t_lx: t_l,
            t_rx: t_r,
            t_ly: t_l,
            t_ry: t_r,
            d_lx: delta,
            d_rx: delta,
            d_ly: delta,
            d_ry: delta,
        };
        s.validate()?;
        Ok(s)
    }

    /// Periodic along y, keeping the x couplings.
    pub fn with_pbc_y(mut self) -> Self {
        self.d_ly = self.t_ly;
        self.d_ry = self.t_ry;
        self
    }

    pub fn with_pbc_x(mut self) -> Self {
        self.d_lx = self.t_lx;
        self.d_rx = self.t_rx;
        self
    }

    pub fn dim(&self) -> usize {
        self.nx * self.ny
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidSpec(format!(
                "lattice extents must be >= 2, got {}x{}",
                self.nx, self.ny
            )));
        }
        let all = [
            self.t_lx, self.t_rx, self.t_ly, self.t_ry, self.d_lx, self.d_rx, self.d_ly, self.d_ry,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("non-finite 2D hopping".into()));
        }
        if self.t_lx * self.t_rx <= 0.0 || self.t_ly * self.t_ry <= 0.0 {
            return Err(Error::InvalidSpec("tL*tR must be positive on both axes".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }
}

pub fn build_skin2d(spec: &Skin2DSpec) -> Result<DenseMatrix> {
    spec.validate()?;
    let (nx, ny) = (spec.nx, spec.ny);
    let mut h = DenseMatrix::zeros(spec.dim());
    for j in 0..ny {
        for i in 0..nx - 1 {
            let (a, b) = (spec.index(i, j), spec.index(i + 1, j));
            h.add_real(a, b, spec.t_lx);
            h.add_real(b, a, spec.t_rx);
        }
        let (first, last) = (spec.index(0, j), spec.index(nx - 1, j));
        h.add_real(last, first, spec.d_lx);
        h.add_real(first, last, spec.d_rx);
    }
    for i in 0..nx {
        for j in 0..ny - 1 {
            let (a, b) = (spec.index(i, j), spec.index(i, j + 1));
            h.add_real(a, b, spec.t_ly);
            h.add_real(b, a, spec.t_ry);
        }
        let (first, last) = (spec.index(i, 0), spec.index(i, ny - 1));
        h.add_real(last, first, spec.d_ly);
        h.add_real(first, last, spec.d_ry);
    }
    h.check_finite()?;
    Ok(h)
}

/// Fourier-reduces a y-periodic 2D skin model to the x-chain at momentum
/// `ky`, returning the chain and its constant on-site shift
/// `tLy e^{iky} + tRy e^{-iky}`.
pub fn reduce_skin2d_pbc_y(spec: &Skin2DSpec, ky: f64) -> Result<(ChainSpec, C64)> {
    spec.validate()?;
    let periodic = |d: f64, t: f64| (d - t).abs() <= 1e-12 * t.abs().max(1.0);
    if !(periodic(spec.d_ly, spec.t_ly) && periodic(spec.d_ry, spec.t_ry)) {
        return Err(Error::InvalidSpec(
            "y-boundary must be periodic (dLy = tLy, dRy = tRy)".into(),
        ));
    }
    let chain = ChainSpec::new(spec.nx, spec.t_lx, spec.t_rx, spec.d_lx, spec.d_rx)?;
    let onsite = spec.t_ly * Complex64::from_polar(1.0, ky) + spec.t_ry * Complex64::from_polar(1.0, -ky);
    Ok((chain, onsite))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_bond_count() {
        let s = Skin2DSpec::isotropic(2, 2, 0.7, 2.3, 0.0).unwrap();
        let h = build_skin2d(&s).unwrap();
        // two x-bonds and two y-bonds, each with a left and right hop
        assert_eq!(h.nnz(), 8);
        assert_eq!(h[(0, 1)].re, 0.7);
        assert_eq!(h[(1, 0)].re, 2.3);
        assert_eq!(h[(0, 2)].re, 0.7);
        assert_eq!(h[(2, 0)].re, 2.3);
    }

    #[test]
    fn onsite_shift_values() {
        let s = Skin2DSpec::isotropic(4, 4, 0.7, 2.3, 0.0).unwrap().with_pbc_y();
        let (_, at0) = reduce_skin2d_pbc_y(&s, 0.0).unwrap();
        assert!((at0 - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        let (chain, at_pi) = reduce_skin2d_pbc_y(&s, std::f64::consts::PI).unwrap();
        assert!((at_pi - Complex64::new(-3.0, 0.0)).norm() < 1e-15);
        assert_eq!(chain.n, 4);
    }

    #[test]
    fn reduction_requires_periodic_y() {
        let s = Skin2DSpec::isotropic(4, 4, 0.7, 2.3, 0.0).unwrap();
        assert!(reduce_skin2d_pbc_y(&s, 0.0).is_err());
    }
}
