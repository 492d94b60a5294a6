//! Structural invariants checked on random inputs. Reference values come
//! from closed forms written out here, not from the library's own helpers.

use std::f64::consts::PI;

use gbz_core::analytic::{hn_all_modes, hn_classify, hn_mu_line, hn_roots, ssh_roots, Regime};
use gbz_core::exec::Executor;
use gbz_core::models::{build_hn, build_ssh, ChainSpec, SshSpec};
use gbz_core::observables::{ipr, ipr_single, rho_xy};
use gbz_core::oracle::{eigenvalues, match_spectra};
use gbz_core::scans::{boundary_grid_scan, fragility_sweep, spectral_flow, Axis, FlowRoute, RouteKind};
use gbz_core::{DenseMatrix, C64};
use proptest::prelude::*;

fn radius(e: &[C64]) -> f64 {
    e.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn dist(a: &[C64], b: &[C64]) -> f64 {
    match_spectra(a, b).unwrap().max_dist
}

fn hopping() -> impl Strategy<Value = f64> {
    0.4f64..1.6
}

/// HN specs whose eigenvalue condition stays moderate (`r^{±N}` ≤ ~1e3).
fn moderate_hn() -> impl Strategy<Value = ChainSpec> {
    (2usize..=24, hopping(), 0.7f64..1.4, 0.0f64..1.5, 0.0f64..1.5)
        .prop_map(|(n, tl, ratio, xl, xr)| ChainSpec::from_ratios(n, tl, tl * ratio, xl, xr).unwrap())
}

fn real_matrix() -> impl Strategy<Value = DenseMatrix> {
    (2usize..=32)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(-1.0f64..1.0, n * n)))
        .prop_map(|(n, v)| {
            let rows: Vec<Vec<f64>> = v.chunks(n).map(|r| r.to_vec()).collect();
            DenseMatrix::from_real_rows(&rows)
        })
}

fn unit_modes(count: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<C64>>> {
    prop::collection::vec(prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim), count).prop_map(|modes| {
        modes
            .into_iter()
            .map(|m| {
                let v: Vec<C64> = m.into_iter().map(|(a, b)| C64::new(a, b)).collect();
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
                v.into_iter().map(|z| z / n).collect()
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hn_pbc_matches_bloch_grid(n in 2usize..=40, tl in hopping(), tr in hopping()) {
        let spec = ChainSpec::pbc(n, tl, tr).unwrap();
        let dense = eigenvalues(&build_hn(&spec).unwrap()).unwrap();
        // ψ_j = e^{ikj}: E(k) = tL e^{ik} + tR e^{-ik}
        let bloch: Vec<C64> = (0..n)
            .map(|m| {
                let k = 2.0 * PI * m as f64 / n as f64;
                tl * C64::from_polar(1.0, k) + tr * C64::from_polar(1.0, -k)
            })
            .collect();
        prop_assert!(dist(&dense, &bloch) <= 1e-10 * (tl + tr));
    }

    #[test]
    fn ssh_pbc_matches_bloch_grid(
        m in 2usize..=20, t1l in hopping(), t1r in hopping(), t2l in hopping(), t2r in hopping()
    ) {
        let spec = SshSpec::pbc(m, t1l, t1r, t2l, t2r).unwrap();
        let dense = eigenvalues(&build_ssh(&spec).unwrap()).unwrap();
        let mut bloch = Vec::new();
        for j in 0..m {
            let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
            let e = ((t1l + t2r / z) * (t1r + t2l * z)).sqrt();
            bloch.extend([e, -e]);
        }
        let scale = (t1l + t2r) * (t1r + t2l);
        prop_assert!(dist(&dense, &bloch) <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn reciprocal_chains_are_hermitian(n in 2usize..=30, t in hopping(), x in 0.0f64..1.5) {
        let h = build_hn(&ChainSpec::from_ratios(n, t, t, x, x).unwrap()).unwrap();
        let ht = h.conj_transpose();
        prop_assert_eq!(h.as_slice(), ht.as_slice());
    }

    #[test]
    fn hn_sparsity(n in 3usize..=40, tl in hopping(), tr in hopping(), dl in 0.1f64..1.0, dr in 0.1f64..1.0) {
        prop_assert_eq!(build_hn(&ChainSpec::new(n, tl, tr, dl, dr).unwrap()).unwrap().nnz(), 2 * n);
        prop_assert_eq!(build_hn(&ChainSpec::obc(n, tl, tr).unwrap()).unwrap().nnz(), 2 * n - 2);
    }

    /// `V = diag(r, …, r^N)` symmetrizes the bulk and moves the
    /// asymmetry into the boundary couplings; eigenvalues must not move.
    #[test]
    fn gauge_similarity_on_mu_line(n in 3usize..=20, tl in hopping(), ratio in 0.7f64..1.4, mu in 0.2f64..5.0) {
        let spec = ChainSpec::mu_line(n, tl, tl * ratio, mu).unwrap();
        let h = build_hn(&spec).unwrap();
        let r = spec.r();
        let d: Vec<C64> = (1..=n).map(|k| C64::new(r.powi(k as i32), 0.0)).collect();
        let g = h.diagonal_similarity(&d);
        let s = (spec.t_l * spec.t_r).sqrt();
        for i in 0..n - 1 {
            prop_assert!((g[(i, i + 1)].re - s).abs() <= 1e-12 * s);
            prop_assert!((g[(i + 1, i)].re - s).abs() <= 1e-12 * s);
        }
        let (eh, eg) = (eigenvalues(&h).unwrap(), eigenvalues(&g).unwrap());
        let scale = radius(&eh).max(1.0);
        prop_assert!(dist(&eh, &eg) <= 1e-8 * scale);
        let analytic = hn_mu_line(&spec).unwrap().energies();
        prop_assert!(dist(&analytic, &eg) <= 1e-10 * scale);
    }

    #[test]
    fn analytic_matches_dense_and_conserves_count(spec in moderate_hn()) {
        let set = hn_roots(&spec).unwrap();
        let e = set.energies();
        prop_assert_eq!(e.len(), spec.n);
        let dense = eigenvalues(&build_hn(&spec).unwrap()).unwrap();
        prop_assert!(dist(&e, &dense) <= 1e-8 * radius(&dense).max(f64::MIN_POSITIVE));
    }

    #[test]
    fn ssh_count_and_bloch_constraint(
        m in 2usize..=16, t1l in hopping(), t1r in hopping(), t2l in hopping(), t2r in hopping(),
        dl in 0.0f64..1.2, dr in 0.0f64..1.2
    ) {
        let spec = SshSpec::new(m, t1l, t1r, t2l, t2r, dl, dr).unwrap();
        let set = ssh_roots(&spec).unwrap();
        prop_assert_eq!(set.energies().len(), 2 * m);
        let want = t1r * t2r / (t1l * t2l);
        for rec in &set.records {
            prop_assert!((rec.z1 * rec.z2 - want).norm() <= 1e-10 * want);
        }
    }

    #[test]
    fn hn_bloch_factors_multiply_to_r_squared(spec in moderate_hn()) {
        let set = hn_roots(&spec).unwrap();
        let want = spec.t_r / spec.t_l;
        for rec in &set.records {
            prop_assert!((rec.z1 * rec.z2 - want).norm() <= 1e-10 * want);
        }
    }

    #[test]
    fn all_real_prediction_holds(spec in moderate_hn()) {
        if hn_classify(&spec).regime == Regime::AllReal {
            let e = hn_roots(&spec).unwrap().energies();
            let big = radius(&e);
            prop_assert!(e.iter().all(|z| z.im.abs() <= 1e-9 * big));
        }
    }

    #[test]
    fn oracle_trace_and_conjugate_pairs(h in real_matrix()) {
        let e = eigenvalues(&h).unwrap();
        let norm = h.frobenius_norm();
        let n = h.dim() as f64;
        let sum: C64 = e.iter().sum();
        prop_assert!((sum - h.trace()).norm() <= 1e-9 * norm * n);
        let conj: Vec<C64> = e.iter().map(|z| z.conj()).collect();
        prop_assert!(dist(&e, &conj) <= 1e-10 * norm.max(1.0));
    }

    #[test]
    fn ipr_is_scale_invariant(modes in unit_modes(1, 12), re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let c = C64::new(re, im);
        prop_assume!(c.norm() > 1e-3);
        let psi = &modes[0];
        let scaled: Vec<C64> = psi.iter().map(|z| z * c).collect();
        let (a, b) = (ipr_single(psi).unwrap(), ipr_single(&scaled).unwrap());
        prop_assert!((a - b).abs() <= 1e-13 * a);
        prop_assert!(a > 0.0 && a <= 1.0 + 1e-15);
    }

    #[test]
    fn density_sums_to_one(
        (nx, ny, sub, modes) in (2usize..=6, 2usize..=6, 1usize..=4, 1usize..=5).prop_flat_map(|(nx, ny, sub, count)| {
            (Just(nx), Just(ny), Just(sub), unit_modes(count, nx * ny * sub))
        })
    ) {
        let rho = rho_xy(&modes, nx, ny, sub).unwrap();
        prop_assert!(rho.rho.iter().all(|&x| x >= 0.0));
        prop_assert!((rho.rho.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    /// OBC modes are `ψ_n = r^n sin(nθ_m)`, `θ_m = mπ/(N+1)`.
    #[test]
    fn obc_ipr_matches_closed_profile_and_persists(n in 4usize..=30, tl in hopping(), ratio in 0.3f64..0.95) {
        let mean_ipr = |n: usize| {
            let spec = ChainSpec::obc(n, tl, tl * ratio).unwrap();
            let modes = hn_all_modes(&hn_roots(&spec).unwrap(), &spec).unwrap();
            ipr(&modes).unwrap().mean
        };
        let r = ratio.sqrt();
        let closed = (1..=n)
            .map(|m| {
                let th = m as f64 * PI / (n + 1) as f64;
                let psi: Vec<C64> = (1..=n).map(|j| C64::new(r.powi(j as i32) * (j as f64 * th).sin(), 0.0)).collect();
                ipr_single(&psi).unwrap()
            })
            .sum::<f64>()
            / n as f64;
        let here = mean_ipr(n);
        prop_assert!((here - closed).abs() <= 1e-10 * closed);
        prop_assert!(mean_ipr(2 * n) >= 0.5 * here);
    }

    #[test]
    fn flow_endpoints_match_closed_forms(n in 4usize..=24, tl in hopping(), ratio in 0.7f64..0.95, which in 0usize..3) {
        let spec = ChainSpec::obc(n, tl, tl * ratio).unwrap();
        let kind = [RouteKind::S1, RouteKind::S2, RouteKind::S3][which].clone();
        let res = spectral_flow(&spec, &FlowRoute::new(kind, 5).unwrap(), &Executor::sequential()).unwrap();
        prop_assert_eq!(res.endpoint_checks.len(), 2);
        prop_assert!(res.worst_endpoint() <= 1e-8 * (spec.t_l + spec.t_r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn grid_scans_are_deterministic_and_consistent(n in 4usize..=24, tl in hopping(), ratio in 0.6f64..1.6) {
        let spec = ChainSpec::obc(n, tl, tl * ratio).unwrap();
        let ax = Axis::new("x", 0.0, 1.0, 6).unwrap();
        let a = boundary_grid_scan(&spec, &ax, &ax, &Executor::sequential());
        let b = boundary_grid_scan(&spec, &ax, &ax, &Executor::new(3));
        prop_assert_eq!(a.to_csv().to_csv_string(), b.to_csv().to_csv_string());
        for c in &a.cells {
            if c.phase_label == Regime::AllReal.as_str() {
                prop_assert!(c.max_im_e <= 1e-8 * c.spectral_radius, "{:?}", c);
            }
        }
    }

    #[test]
    fn fragility_grows_beyond_crossover(tl in hopping(), ratio in 0.55f64..0.9, xl in 0.05f64..0.6, xr in 0.05f64..0.8) {
        let spec = ChainSpec::from_ratios(8, tl, tl * ratio, xl, xr).unwrap();
        let sizes: Vec<usize> = (4..=64).step_by(4).collect();
        let rep = fragility_sweep(&spec, &sizes, &Executor::sequential()).unwrap();
        prop_assert!(rep.monotone_beyond_crossover, "{:?}", rep.rows.iter().map(|r| (r.n, r.max_im_e)).collect::<Vec<_>>());
    }
}

/// Each record has one factor on `|z| = μ^{1/N}` and its partner on
/// `|z| = r²μ^{-1/N}`, since `z1·z2 = r²`.
#[test]
fn mu_line_factors_sit_on_two_circles() {
    for (n, ratio, mu) in [(10usize, 1.0, 0.01f64), (100, 1.0, 100.0), (12, 0.64, 3.0), (9, 1.21, 1.0)] {
        let spec = ChainSpec::mu_line(n, 1.0, ratio, mu).unwrap();
        let set = hn_mu_line(&spec).unwrap();
        let inner = mu.powf(1.0 / n as f64);
        let outer = ratio / inner;
        let (lo, hi) = (inner.min(outer), inner.max(outer));
        for rec in &set.records {
            let (a, b) = (rec.z1.norm().min(rec.z2.norm()), rec.z1.norm().max(rec.z2.norm()));
            assert!((a - lo).abs() <= 1e-10 * lo && (b - hi).abs() <= 1e-10 * hi, "{a} {b} vs {lo} {hi}");
        }
    }
}
