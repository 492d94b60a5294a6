//! Eigenvectors from analytic roots.
//!
//! Both chains reduce to a scalar sequence `f_n` in the span of `z1^n` and
//! `z2^n`. HN amplitudes are `ψ_n = f_n`; SSH amplitudes are fixed linear
//! combinations of `f_n` and `f_{n+1}`. The two boundary equations give a
//! 2×2 system whose null vector selects `f`. All powers are carried in log
//! form so long, strongly graded chains never overflow.

use num_complex::Complex64;

use super::hn::mu_line_z;
use super::{Kind, ModeSet, ModelKind, RootRecord};
use crate::matrix::normalize_phase;
use crate::models::{ssh_index, ChainSpec, SshSpec};
use crate::{Error, Result, C64};

/// Below this `|sin θ|` the basis `{z1^n, z2^n}` is replaced by
/// `{z1^n + z2^n, (z1^n − z2^n)/(z1 − z2)}`.
const SIN_THETA_SWITCH: f64 = 1e-4;
const RANK0_TOL: f64 = 1e-10;
const RANK1_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeVector {
    pub amplitudes: Vec<C64>,
    pub norm_squared: f64,
    pub energy: C64,
    /// Set when a double root has a one-dimensional boundary null space, so
    /// the vector is repeated for a Jordan block.
    pub defective: bool,
}

impl AsRef<[C64]> for ModeVector {
    fn as_ref(&self) -> &[C64] {
        &self.amplitudes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// `m · e^{e}`.
#[derive(Debug, Clone, Copy)]
struct LogC {
    m: C64,
    e: f64,
}

impl LogC {
    fn is_zero(&self) -> bool {
        self.m.norm() == 0.0 || self.e == f64::NEG_INFINITY
    }
}

/// Sums log-form terms, returning `(mantissa, exponent, magnitude-sum)` with
/// value `mantissa·e^{exponent}` and natural scale `magnitude-sum·e^{exponent}`.
fn log_sum(terms: &[LogC]) -> Option<(C64, f64, f64)> {
    let e_max = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.e)
        .fold(f64::NEG_INFINITY, f64::max);
    if e_max == f64::NEG_INFINITY {
        return None;
    }
    let (mut v, mut s) = (Complex64::new(0.0, 0.0), 0.0);
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let w = (t.e - e_max).exp();
        v += t.m * w;
        s += t.m.norm() * w;
    }
    Some((v, e_max, s))
}

enum Basis {
    /// `b_k(n) = z_k^n`, stored as `ln z_k`.
    Z([C64; 2]),
    /// `b_0(n) = 2 r^n T_n(c)`, `b_1(n) = r^{n-1} U_{n-1}(c)`.
    Sd {
        t: Vec<C64>,
        u_prev: Vec<C64>,
        ln_r: f64,
    },
}

impl Basis {
    fn new(theta: C64, ln_r: f64, n_max: usize) -> Self {
        if theta.sin().norm() >= SIN_THETA_SWITCH {
            let i = Complex64::new(0.0, 1.0);
            return Basis::Z([ln_r + i * theta, ln_r - i * theta]);
        }
        let c = theta.cos();
        let mut t = Vec::with_capacity(n_max + 1);
        let mut u_prev = Vec::with_capacity(n_max + 1);
        // T_0 = 1, T_1 = c; U_{-1} = 0, U_0 = 1
        let (mut t0, mut t1) = (Complex64::new(1.0, 0.0), c);
        let (mut u0, mut u1) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        for _ in 0..=n_max {
            t.push(t0);
            u_prev.push(u0);
            let t2 = 2.0 * c * t1 - t0;
            let u2 = 2.0 * c * u1 - u0;
            (t0, t1) = (t1, t2);
            (u0, u1) = (u1, u2);
        }
        Basis::Sd { t, u_prev, ln_r }
    }

    fn eval(&self, k: usize, n: usize) -> LogC {
        match self {
            Basis::Z(lz) => {
                let l = lz[k] * n as f64;
                LogC {
                    m: Complex64::from_polar(1.0, l.im),
                    e: l.re,
                }
            }
            Basis::Sd { t, u_prev, ln_r } => {
                if k == 0 {
                    LogC {
                        m: 2.0 * t[n],
                        e: n as f64 * ln_r,
                    }
                } else {
                    LogC {
                        m: u_prev[n],
                        e: (n as f64 - 1.0) * ln_r,
                    }
                }
            }
        }
    }

    /// `Σ coef_j · f_{n_j}` for `f = c0 b_0 + c1 b_1` given as log-form
    /// coefficients.
    fn combine(&self, lin: &[(C64, usize)], coef: &[Option<LogC>; 2]) -> LogC {
        let mut terms = Vec::with_capacity(2 * lin.len());
        for &(a, n) in lin {
            for (k, ck) in coef.iter().enumerate() {
                if let Some(ck) = ck {
                    let b = self.eval(k, n);
                    terms.push(LogC {
                        m: a * ck.m * b.m,
                        e: ck.e + b.e,
                    });
                }
            }
        }
        match log_sum(&terms) {
            Some((v, e, _)) => LogC { m: v, e },
            None => LogC {
                m: Complex64::new(0.0, 0.0),
                e: f64::NEG_INFINITY,
            },
        }
    }
}

enum NullSpace {
    /// One combination `[c0, c1]` in log form.
    One([Option<LogC>; 2]),
    Two,
}

/// Null space of the equilibrated 2×2 boundary system.
fn boundary_null(rows: &[Vec<(C64, usize)>; 2], basis: &Basis, theta: C64) -> Result<NullSpace> {
    // entries as (value mantissa, exponent, natural-scale mantissa)
    let mut ent = [[None; 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        for (k, slot) in ent[i].iter_mut().enumerate() {
            let terms: Vec<LogC> = row
                .iter()
                .map(|&(a, n)| {
                    let b = basis.eval(k, n);
                    LogC { m: a * b.m, e: b.e }
                })
                .collect();
            *slot = log_sum(&terms);
        }
    }
    let ln_nat = |x: &Option<(C64, f64, f64)>| match x {
        Some((_, e, s)) if *s > 0.0 => e + s.ln(),
        _ => f64::NEG_INFINITY,
    };
    let row_scale: Vec<f64> = (0..2)
        .map(|i| ln_nat(&ent[i][0]).max(ln_nat(&ent[i][1])))
        .collect();
    if row_scale.iter().all(|s| *s == f64::NEG_INFINITY) {
        return Ok(NullSpace::Two);
    }
    let col_scale: Vec<f64> = (0..2)
        .map(|k| {
            (0..2)
                .filter(|&i| row_scale[i] > f64::NEG_INFINITY)
                .map(|i| ln_nat(&ent[i][k]) - row_scale[i])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let mut a = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            if let Some((v, e, _)) = ent[i][k] {
                if row_scale[i] > f64::NEG_INFINITY && col_scale[k] > f64::NEG_INFINITY {
                    a[i][k] = v * (e - row_scale[i] - col_scale[k]).exp();
                }
            }
        }
    }
    let fro2: f64 = a.iter().flatten().map(|x| x.norm_sqr()).sum();
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).norm();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let s1 = (0.5 * (fro2 + disc)).sqrt();
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    if s1 <= RANK0_TOL {
        return Ok(NullSpace::Two);
    }
    if s2 > RANK1_TOL * s1 {
        return Err(Error::InconsistentRoot { theta });
    }
    let n0 = a[0][0].norm_sqr() + a[0][1].norm_sqr();
    let n1 = a[1][0].norm_sqr() + a[1][1].norm_sqr();
    let row = if n0 >= n1 { a[0] } else { a[1] };
    let null = [row[1], -row[0]];
    let coef = [0, 1].map(|k| {
        (null[k].norm() > 0.0 && col_scale[k] > f64::NEG_INFINITY).then(|| LogC {
            m: null[k],
            e: -col_scale[k],
        })
    });
    Ok(NullSpace::One(coef))
}

fn finish(values: Vec<LogC>, energy: C64, defective: bool) -> ModeVector {
    let e_max = values
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.e)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut amps: Vec<C64> = values
        .iter()
        .map(|v| {
            if v.is_zero() {
                Complex64::new(0.0, 0.0)
            } else {
                v.m * (v.e - e_max).exp()
            }
        })
        .collect();
    normalize_phase(&mut amps);
    let norm_squared = amps.iter().map(|x| x.norm_sqr()).sum();
    ModeVector {
        amplitudes: amps,
        norm_squared,
        energy,
        defective,
    }
}

/// Amplitude layout: each output entry is `Σ coef·f_n`.
type Layout = Vec<Vec<(C64, usize)>>;

fn solve_modes(
    rows: [Vec<(C64, usize)>; 2],
    layout: &Layout,
    basis: &Basis,
    rec: &RootRecord,
    energy: C64,
) -> Result<Vec<ModeVector>> {
    let build = |coef: [Option<LogC>; 2], defective: bool| {
        let vals = layout.iter().map(|lin| basis.combine(lin, &coef)).collect();
        finish(vals, energy, defective)
    };
    let one = LogC {
        m: Complex64::new(1.0, 0.0),
        e: 0.0,
    };
    match boundary_null(&rows, basis, rec.theta)? {
        NullSpace::One(coef) => {
            let v = build(coef, rec.multiplicity > 1);
            Ok(vec![v; rec.multiplicity.max(1)])
        }
        NullSpace::Two => {
            let mut out = vec![build([Some(one), None], false)];
            if rec.multiplicity > 1 {
                out.push(build([None, Some(one)], false));
            }
            Ok(out)
        }
    }
}

fn real(x: f64) -> C64 {
    Complex64::new(x, 0.0)
}

/// Eigenvectors for one HN record; `multiplicity` vectors are returned.
pub fn hn_mode_vectors(rec: &RootRecord, spec: &ChainSpec) -> Result<Vec<ModeVector>> {
    let n = spec.n;
    if let Some(z) = mu_line_z(spec, rec) {
        let lz = z.ln();
        let vals = (1..=n)
            .map(|k| {
                let l = lz * k as f64;
                LogC {
                    m: Complex64::from_polar(1.0, l.im),
                    e: l.re,
                }
            })
            .collect();
        return Ok(vec![finish(vals, rec.energy, false); rec.multiplicity.max(1)]);
    }
    let basis = Basis::new(rec.theta, spec.ln_r(), n + 1);
    let rows = [
        vec![(real(spec.t_r), 0), (real(-spec.delta_r), n)],
        vec![(real(spec.delta_l), 1), (real(-spec.t_l), n + 1)],
    ];
    let layout: Layout = (1..=n).map(|k| vec![(real(1.0), k)]).collect();
    solve_modes(rows, &layout, &basis, rec, rec.energy)
}

pub fn hn_mode_vector(rec: &RootRecord, spec: &ChainSpec) -> Result<ModeVector> {
    Ok(hn_mode_vectors(rec, spec)?.remove(0))
}

/// Eigenvectors for one SSH record and energy branch.
pub fn ssh_mode_vectors(
    rec: &RootRecord,
    spec: &SshSpec,
    branch: Branch,
) -> Result<Vec<ModeVector>> {
    let m = spec.m;
    let e = match branch {
        Branch::Plus => rec.energy,
        Branch::Minus => -rec.energy,
    };
    let (t1l, t1r, t2l, t2r) = (spec.t1l, spec.t1r, spec.t2l, spec.t2r);
    let (dl, dr) = (spec.delta_l, spec.delta_r);
    if spec.is_obc() && rec.kind == Kind::Edge {
        return Ok(vec![ssh_obc_edge_vector(rec, spec, e); rec.multiplicity.max(1)]);
    }
    let z = rec.z1;
    // cell vectors (E, t1R + t2L z) and (t2R + t1L z, E z); keep the better one
    let w1 = (e.norm() + (t1r + t2l * z).norm()) / (e.norm() + t1r + t2l * z.norm());
    let w2 = ((t2r + t1l * z).norm() + (e * z).norm()) / (t2r + t1l * z.norm() + (e * z).norm());
    let basis = Basis::new(rec.theta, spec.ln_r(), m + 2);
    let mut layout: Layout = vec![Vec::new(); 2 * m];
    let rows;
    if w1 >= w2 {
        for n in 1..=m {
            layout[ssh_index(n - 1, 0)] = vec![(e, n)];
            layout[ssh_index(n - 1, 1)] = vec![(real(t1r), n), (real(t2l), n + 1)];
        }
        rows = [
            vec![
                (real(t2r * t1r), 0),
                (real(t2r * t2l), 1),
                (real(-dr * t1r), m),
                (real(-dr * t2l), m + 1),
            ],
            vec![(e * dl, 1), (-e * t2l, m + 1)],
        ];
    } else {
        for n in 1..=m {
            layout[ssh_index(n - 1, 0)] = vec![(real(t2r), n), (real(t1l), n + 1)];
            layout[ssh_index(n - 1, 1)] = vec![(e, n + 1)];
        }
        rows = [
            vec![(e * t2r, 1), (-e * dr, m + 1)],
            vec![
                (real(dl * t2r), 1),
                (real(dl * t1l), 2),
                (real(-t2l * t2r), m + 1),
                (real(-t2l * t1l), m + 2),
            ],
        ];
    }
    let rows = rows.map(|r| r.into_iter().filter(|(c, _)| c.norm() != 0.0).collect());
    solve_modes(rows, &layout, &basis, rec, e)
}

/// OBC edge mode written per sublattice,
/// `ψ_nA = z1^n + a z2^n`, `ψ_nB = b (z1^n − z2^n)` with `|z1| < |z2|`,
/// `b = E z1/(t2R + t1L z1)` and `a = −E b/(t1R + t2L z2)`.
///
/// The generic layout divides an `O(E²)` factor by `E` and loses all
/// precision once `E` approaches machine epsilon; these coefficients do not.
fn ssh_obc_edge_vector(rec: &RootRecord, spec: &SshSpec, e: C64) -> ModeVector {
    let (z1, z2) = if rec.z1.norm() <= rec.z2.norm() {
        (rec.z1, rec.z2)
    } else {
        (rec.z2, rec.z1)
    };
    let b = e * z1 / (spec.t2r + spec.t1l * z1);
    let a = -e * b / (spec.t1r + spec.t2l * z2);
    let (l1, l2) = (z1.ln(), z2.ln());
    let pow = |l: C64, n: usize, coef: C64| {
        let x = l * n as f64;
        LogC {
            m: coef * Complex64::from_polar(1.0, x.im),
            e: x.re,
        }
    };
    let one = real(1.0);
    let mut vals = vec![
        LogC {
            m: Complex64::new(0.0, 0.0),
            e: f64::NEG_INFINITY,
        };
        2 * spec.m
    ];
    for n in 1..=spec.m {
        let terms_a = [pow(l1, n, one), pow(l2, n, a)];
        let terms_b = [pow(l1, n, b), pow(l2, n, -b)];
        for (sub, terms) in [(0, terms_a), (1, terms_b)] {
            if let Some((v, ex, _)) = log_sum(&terms) {
                vals[ssh_index(n - 1, sub)] = LogC { m: v, e: ex };
            }
        }
    }
    finish(vals, e, false)
}

pub fn ssh_mode_vector(rec: &RootRecord, spec: &SshSpec, branch: Branch) -> Result<ModeVector> {
    Ok(ssh_mode_vectors(rec, spec, branch)?.remove(0))
}

/// All HN eigenvectors, aligned with [`ModeSet::energies`].
pub fn hn_all_modes(set: &ModeSet, spec: &ChainSpec) -> Result<Vec<ModeVector>> {
    debug_assert_eq!(set.model, ModelKind::Hn);
    let mut out = Vec::with_capacity(set.dim());
    for rec in &set.records {
        out.extend(hn_mode_vectors(rec, spec)?);
    }
    Ok(out)
}

/// All SSH eigenvectors, aligned with [`ModeSet::energies`].
pub fn ssh_all_modes(set: &ModeSet, spec: &SshSpec) -> Result<Vec<ModeVector>> {
    debug_assert_eq!(set.model, ModelKind::Ssh);
    let mut out = Vec::with_capacity(set.dim());
    for rec in &set.records {
        let plus = ssh_mode_vectors(rec, spec, Branch::Plus)?;
        let minus = ssh_mode_vectors(rec, spec, Branch::Minus)?;
        for (p, q) in plus.into_iter().zip(minus) {
            out.push(p);
            out.push(q);
        }
    }
    Ok(out)
}

/// OBC profile `ψ_n = r^n sin(nθ)`, `n = 1..N`, unnormalized.
pub fn hn_obc_profile(spec: &ChainSpec, theta: C64) -> Vec<C64> {
    let r = spec.r();
    (1..=spec.n)
        .map(|n| r.powi(n as i32) * (n as f64 * theta).sin())
        .collect()
}

/// OBC profile `ψ_nA = r^n(sin nθ + α sin(n−1)θ)`,
/// `ψ_nB = (E/t1L) r^n sin nθ`, unnormalized. With `θ = π + iφ` this is the
/// hyperbolic edge profile.
pub fn ssh_obc_profile(spec: &SshSpec, theta: C64, energy: C64) -> Vec<C64> {
    let (r, a) = (spec.r(), spec.alpha());
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * spec.m];
    for n in 1..=spec.m {
        let nf = n as f64;
        let rn = r.powi(n as i32);
        out[ssh_index(n - 1, 0)] = rn * ((nf * theta).sin() + a * ((nf - 1.0) * theta).sin());
        out[ssh_index(n - 1, 1)] = energy / spec.t1l * rn * (nf * theta).sin();
    }
    out
}
