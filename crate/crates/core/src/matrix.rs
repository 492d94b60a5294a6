//! Dense complex square matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::{Error, Result, C64};

const ZERO: C64 = Complex64::new(0.0, 0.0);

/// Row-major dense complex square matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row slices. Panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "rows must form a square matrix");
            data.extend_from_slice(row);
        }
        Self { dim, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Adds `value` to entry `(i, j)`. Builders accumulate so that coinciding
    /// bulk and boundary bonds (e.g. `N = 2`) add up.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: C64) {
        self[(i, j)] += value;
    }

    pub fn add_real(&mut self, i: usize, j: usize, value: f64) {
        self[(i, j)] += Complex64::new(value, 0.0);
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// `D⁻¹ A D` for a diagonal `D` given by its entries.
    pub fn diagonal_similarity(&self, d: &[C64]) -> DenseMatrix {
        assert_eq!(d.len(), self.dim);
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(i, j)] * d[j] / d[i];
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|z| **z != ZERO).count()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    pub fn check_finite(&self) -> Result<()> {
        for (k, z) in self.data.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite {
                    row: k / self.dim,
                    col: k % self.dim,
                });
            }
        }
        Ok(())
    }

    /// `‖H x − λ x‖ / ‖x‖`.
    pub fn residual(&self, x: &[C64], lambda: C64) -> f64 {
        let hx = self.matvec(x);
        let num: f64 = hx
            .iter()
            .zip(x)
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        num / den
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{})", self.dim, self.dim)?;
        if self.dim <= 8 {
            for i in 0..self.dim {
                let row: Vec<String> = self.row(i).iter().map(|z| format!("{z:.4}")).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Euclidean norm of a complex vector.
pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Scales `x` to unit 2-norm and rotates its phase so the largest-magnitude
/// entry is real and positive. Returns the original norm.
pub fn normalize_phase(x: &mut [C64]) -> f64 {
    let nrm = norm2(x);
    if nrm == 0.0 || !nrm.is_finite() {
        return nrm;
    }
    let (mut best, mut best_abs) = (0, -1.0);
    for (k, z) in x.iter().enumerate() {
        let a = z.norm();
        // strict comparison with a small relative margin keeps ties on the
        // lowest index, so the phase convention is reproducible
        if a > best_abs * (1.0 + 1e-12) {
            best = k;
            best_abs = a;
        }
    }
    let phase = x[best].conj() / best_abs;
    for z in x.iter_mut() {
        *z = *z * phase / nrm;
    }
    x[best] = Complex64::new(x[best].norm(), 0.0);
    nrm
}
