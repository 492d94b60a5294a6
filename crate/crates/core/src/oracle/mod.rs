//! Dense non-Hermitian eigensolver used to certify analytic spectra.
//!
//! Pipeline: diagonal balancing, Householder reduction to Hessenberg form,
//! complex single-shift QR for the eigenvalues, then inverse iteration on
//! the Hessenberg matrix for right eigenvectors. Pairs whose residual stays
//! above tolerance are refined with double-double Newton steps.

mod balance;
mod hessenberg;
mod matching;
mod qr;
mod refine;
mod vectors;

pub use matching::{match_spectra, SpectrumMatch, HUNGARIAN_MAX};
pub(crate) use refine::Dd;

use crate::{DenseMatrix, Error, Result, C64};

pub const DEFAULT_CAP: usize = 4096;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;
/// Double-double refinement forms a dense bordered system per pair.
const REFINE_MAX_DIM: usize = 1024;
const REFINE_STEPS: usize = 6;

/// When to run double-double refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refine {
    Never,
    /// Only pairs whose residual exceeds `residual_tol`.
    Auto,
    Always,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigOptions {
    pub cap: usize,
    pub vectors: bool,
    pub refine: Refine,
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            vectors: true,
            refine: Refine::Auto,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            seed: 0x6762_7a5f_6f72_6163,
        }
    }
}

impl EigOptions {
    pub fn values_only() -> Self {
        Self {
            vectors: false,
            ..Self::default()
        }
    }
}

/// Eigenvalues sorted by real then imaginary part, with unit right vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub eigenvalues: Vec<C64>,
    /// One unit vector per eigenvalue; empty when vectors were not requested.
    pub vectors: Vec<Vec<C64>>,
    /// `‖Hv − λv‖ / (‖H‖_F·‖v‖)`.
    pub residuals: Vec<f64>,
    /// Number of pairs that went through double-double refinement.
    pub refined: usize,
}

impl EigenResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn eig_dense(h: &DenseMatrix) -> Result<EigenResult> {
    eig_dense_with(h, &EigOptions::default())
}

pub fn eigenvalues(h: &DenseMatrix) -> Result<Vec<C64>> {
    Ok(eig_dense_with(h, &EigOptions::values_only())?.eigenvalues)
}

/// Nonzero entries by row, for cheap residuals of sparse model matrices.
struct SparseRows {
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseRows {
    fn new(h: &DenseMatrix) -> Self {
        let rows = (0..h.dim())
            .map(|i| {
                h.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
                    .map(|(j, z)| (j, *z))
                    .collect()
            })
            .collect();
        Self { rows }
    }

    /// `‖Hx − λx‖ / ‖x‖`.
    fn residual(&self, x: &[C64], lambda: C64) -> f64 {
        let mut num = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            let hx: C64 = row.iter().map(|(j, a)| a * x[*j]).sum();
            num += (hx - lambda * x[i]).norm_sqr();
        }
        num.sqrt() / crate::matrix::norm2(x)
    }
}

fn sort_order(w: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..w.len()).collect();
    idx.sort_by(|&i, &j| w[i].re.total_cmp(&w[j].re).then(w[i].im.total_cmp(&w[j].im)));
    idx
}

pub fn eig_dense_with(h: &DenseMatrix, opts: &EigOptions) -> Result<EigenResult> {
    let n = h.dim();
    if n > opts.cap {
        return Err(Error::DimensionCap { dim: n, cap: opts.cap });
    }
    h.check_finite()?;
    if n == 0 {
        return Ok(EigenResult {
            eigenvalues: vec![],
            vectors: vec![],
            residuals: vec![],
            refined: 0,
        });
    }
    let mut a = h.as_slice().to_vec();
    let scale = balance::balance(&mut a, n);
    let hs = hessenberg::Hessenberg::reduce(a, n);
    let mut work = hs.h.clone();
    let mut w = match qr::hessenberg_eigenvalues(&mut work, n) {
        Ok(w) => w,
        Err(Error::EigenNonConvergence { dim, converged, mut partial }) => {
            partial.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
            return Err(Error::EigenNonConvergence { dim, converged, partial });
        }
        Err(e) => return Err(e),
    };
    drop(work);
    let order = sort_order(&w);
    w = order.iter().map(|&i| w[i]).collect();
    if !opts.vectors {
        return Ok(EigenResult {
            eigenvalues: w,
            vectors: vec![],
            residuals: vec![],
            refined: 0,
        });
    }

    let hv = vectors::inverse_iteration(&hs.h, n, &w, opts.seed);
    let hnorm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let sparse = SparseRows::new(h);
    let mut vecs = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut refined = 0;
    for (k, mut x) in hv.into_iter().enumerate() {
        hs.apply_q(&mut x);
        for (xi, d) in x.iter_mut().zip(&scale) {
            *xi *= *d;
        }
        crate::matrix::normalize_phase(&mut x);
        let mut res = sparse.residual(&x, w[k]) / hnorm;
        let want = match opts.refine {
            Refine::Never => false,
            Refine::Auto => !(res <= opts.residual_tol),
            Refine::Always => true,
        };
        if want && n <= REFINE_MAX_DIM {
            let (l2, mut x2, _) = refine::refine_pair(h, w[k], &x, REFINE_STEPS);
            crate::matrix::normalize_phase(&mut x2);
            let res2 = sparse.residual(&x2, l2) / hnorm;
            if res2 <= res || opts.refine == Refine::Always {
                w[k] = l2;
                x = x2;
                res = res2;
            }
            refined += 1;
        }
        vecs.push(x);
        residuals.push(res);
    }
    Ok(EigenResult {
        eigenvalues: w,
        vectors: vecs,
        residuals,
        refined,
    })
}
