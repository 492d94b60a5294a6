//! One function per subcommand. Each returns the files to write plus summary
//! values; [`run`] writes them and the manifest, then maps outcomes onto
//! failures.

use std::collections::BTreeMap;

use gbz_core::analytic::{hn_all_modes, hn_roots, ssh_all_modes, ssh_roots, ModeSet};
use gbz_core::exec::Executor;
use gbz_core::io::{fmt_f64, CsvTable};
use gbz_core::models::{build_hn, build_ssh, reduce_skin2d_pbc_y, ChainSpec, ModelConfig, SshSpec};
use gbz_core::observables::ipr;
use gbz_core::oracle::{eig_dense_with, match_spectra, EigOptions, Refine};
use gbz_core::scans::{
    boundary_grid_scan, fragility_sweep, skin2d_fragility, solve_hn, spectral_flow, ssh_phase_scan,
    CellStatus, FlowRoute, ScanGrid, TwoDRow, TwoDSpec,
};
use gbz_core::{DenseMatrix, C64};
use serde_json::{json, Value};

use crate::config::{Params, RunConfig};
use crate::manifest::{write_atomic, Manifest, Settings, Verification};
use crate::Failure;

#[derive(Default)]
struct Output {
    files: Vec<(String, String)>,
    summary: BTreeMap<String, Value>,
    /// Relative analytic/oracle distances (or oracle residuals) per check.
    checks: Vec<f64>,
    /// Items that failed on both solver paths.
    failed: usize,
}

impl Output {
    fn file(&mut self, name: impl Into<String>, table: &CsvTable) {
        self.files.push((name.into(), table.to_csv_string()));
    }
}

fn oracle_opts(cfg: &RunConfig) -> EigOptions {
    EigOptions {
        vectors: false,
        seed: cfg.seed,
        ..EigOptions::default()
    }
}

/// Distance between an analytic spectrum and the dense one, relative to
/// `max(1, spectral radius)`.
///
/// A plain dense solve resolves near-defective pairs only to about `√eps`,
/// so a failing comparison is repeated once with every pair refined in
/// double-double before it counts as a mismatch.
fn oracle_distance(h: &DenseMatrix, energies: &[C64], opts: &EigOptions, tol: f64) -> Result<f64, Failure> {
    let dist = |o: &EigOptions| -> Result<f64, Failure> {
        let r = eig_dense_with(h, o)?;
        let m = match_spectra(energies, &r.eigenvalues)?;
        Ok(m.max_dist / r.spectral_radius().max(1.0))
    };
    let d = dist(opts)?;
    if d <= tol {
        return Ok(d);
    }
    dist(&EigOptions {
        vectors: true,
        refine: Refine::Always,
        ..*opts
    })
}

fn spectrum_table(set: &ModeSet, vectors: &[Vec<C64>]) -> Result<CsvTable, Failure> {
    let mut t = set.to_csv();
    ipr(vectors)?.append_to(&mut t);
    Ok(t)
}

fn spectrum(cfg: &RunConfig, out: &mut Output) -> Result<(), Failure> {
    let opts = oracle_opts(cfg);
    match &cfg.model {
        ModelConfig::Hn(spec) => {
            let set = hn_roots(spec)?;
            let vecs: Vec<_> = hn_all_modes(&set, spec)?.into_iter().map(|m| m.amplitudes).collect();
            out.file("spectrum.csv", &spectrum_table(&set, &vecs)?);
            if cfg.verify {
                out.checks.push(oracle_distance(&build_hn(spec)?, &set.energies(), &opts, cfg.tolerance)?);
            }
        }
        ModelConfig::Ssh(spec) => {
            let set = ssh_roots(spec)?;
            let vecs: Vec<_> = ssh_all_modes(&set, spec)?.into_iter().map(|m| m.amplitudes).collect();
            out.file("spectrum.csv", &spectrum_table(&set, &vecs)?);
            if cfg.verify {
                out.checks.push(oracle_distance(&build_ssh(spec)?, &set.energies(), &opts, cfg.tolerance)?);
            }
        }
        ModelConfig::Skin2d { spec, ky: Some(ky) } => {
            let (chain, shift) = reduce_skin2d_pbc_y(spec, *ky)?;
            let set = hn_roots(&chain)?;
            let vecs: Vec<_> = hn_all_modes(&set, &chain)?.into_iter().map(|m| m.amplitudes).collect();
            let mut shifted = set.clone();
            for r in &mut shifted.records {
                r.energy += shift;
            }
            out.file("spectrum.csv", &spectrum_table(&shifted, &vecs)?);
            out.summary.insert("onsite_shift".into(), json!([shift.re, shift.im]));
            if cfg.verify {
                out.checks.push(oracle_distance(&build_hn(&chain)?, &set.energies(), &opts, cfg.tolerance)?);
            }
        }
        ModelConfig::Skin2d { spec, ky: None } => {
            twod_spectrum(&TwoDSpec::Skin(*spec), cfg, out)?;
        }
        ModelConfig::Soti(spec) => twod_spectrum(&TwoDSpec::Soti(*spec), cfg, out)?,
    }
    Ok(())
}

/// 2D spectra have no closed form; the dense solver is the source and the
/// check is its own residual.
fn twod_spectrum(spec: &TwoDSpec, cfg: &RunConfig, out: &mut Output) -> Result<(), Failure> {
    let opts = EigOptions {
        vectors: true,
        ..oracle_opts(cfg)
    };
    let r = eig_dense_with(&spec.build()?, &opts)?;
    let mut t = CsvTable::new(&["index", "re_E", "im_E"]);
    for (k, e) in r.eigenvalues.iter().enumerate() {
        t.push(vec![k.to_string(), fmt_f64(e.re), fmt_f64(e.im)]);
    }
    ipr(&r.vectors)?.append_to(&mut t);
    out.file("spectrum.csv", &t);
    if cfg.verify {
        out.checks.push(r.max_residual());
    }
    Ok(())
}

fn gbz(cfg: &RunConfig, out: &mut Output) -> Result<(), Failure> {
    let opts = oracle_opts(cfg);
    let (set, h) = match &cfg.model {
        ModelConfig::Hn(spec) => (hn_roots(spec)?, build_hn(spec)?),
        ModelConfig::Ssh(spec) => (ssh_roots(spec)?, build_ssh(spec)?),
        _ => unreachable!("model checked during config resolution"),
    };
    let mut t = CsvTable::new(&["index", "factor", "re_z", "im_z", "abs_z", "kind"]);
    for (k, r) in set.records.iter().enumerate() {
        for (name, z) in [("z1", r.z1), ("z2", r.z2)] {
            t.push(vec![
                k.to_string(),
                name.to_string(),
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(z.norm()),
                r.kind.as_str().to_string(),
            ]);
        }
    }
    out.file("gbz.csv", &t);
    if cfg.verify {
        out.checks.push(oracle_distance(&h, &set.energies(), &opts, cfg.tolerance)?);
    }
    Ok(())
}

/// Compares every analytic grid cell with the dense spectrum of the same
/// chain; `build` rebuilds the cell's Hamiltonian from its coordinates.
fn verify_grid<F>(grid: &ScanGrid, exec: &Executor, opts: &EigOptions, tol: f64, build: F) -> Result<Vec<f64>, Failure>
where
    F: Fn(f64, f64) -> gbz_core::Result<(DenseMatrix, Vec<C64>)> + Sync + Send,
{
    let cells: Vec<_> = grid.cells.iter().filter(|c| c.status != CellStatus::Failed).collect();
    exec.map(&cells, |c| {
        let (h, energies) = build(c.x, c.y)?;
        oracle_distance(&h, &energies, opts, tol)
    })
    .into_iter()
    .collect()
}

fn scan(cfg: &RunConfig, exec: &Executor, out: &mut Output) -> Result<(), Failure> {
    let (ModelConfig::Hn(spec), Params::Scan { x, y, sizes }) = (&cfg.model, &cfg.params) else {
        unreachable!("scan is resolved with an HN model")
    };
    let opts = oracle_opts(cfg);
    for &n in sizes {
        let template = spec.with_size(n);
        let grid = boundary_grid_scan(&template, x, y, exec);
        out.failed += grid.count(CellStatus::Failed);
        out.summary.insert(format!("N{n}_oracle_cells"), json!(grid.count(CellStatus::OracleFallback)));
        out.file(format!("grid_N{n}.csv"), &grid.to_csv());
        if cfg.verify {
            out.checks.extend(verify_grid(&grid, exec, &opts, cfg.tolerance, |a, b| {
                let s = ChainSpec::from_ratios(n, template.t_l, template.t_r, a, b)?;
                Ok((build_hn(&s)?, solve_hn(&s, false).energies))
            })?);
        }
    }
    Ok(())
}

fn flow(cfg: &RunConfig, exec: &Executor, out: &mut Output) -> Result<(), Failure> {
    let (ModelConfig::Hn(spec), Params::Flow { route, steps }) = (&cfg.model, &cfg.params) else {
        unreachable!("flow is resolved with an HN model")
    };
    let route = FlowRoute::new(route.clone(), *steps)?;
    let res = spectral_flow(spec, &route, exec)?;
    out.failed += res.steps.iter().filter(|s| s.status == CellStatus::Failed).count();
    out.file(format!("flow_{}.csv", route.kind.name()), &res.to_csv());
    for c in &res.endpoint_checks {
        out.summary.insert(format!("endpoint_{}_{}", c.step, c.form.name()), json!(c.max_dist));
    }
    if cfg.verify {
        let opts = oracle_opts(cfg);
        let steps: Vec<_> = res.steps.iter().filter(|s| s.status != CellStatus::Failed).collect();
        let d: Result<Vec<f64>, Failure> = exec
            .map(&steps, |s| {
                let c = ChainSpec::from_ratios(spec.n, spec.t_l, spec.t_r, s.x_l, s.x_r)?;
                oracle_distance(&build_hn(&c)?, &s.energies, &opts, cfg.tolerance)
            })
            .into_iter()
            .collect();
        out.checks.extend(d?);
        // endpoint exactness is part of the contract of a verified flow
        out.checks.extend(res.endpoint_checks.iter().map(|c| c.max_dist / spec.hopping_scale().max(1.0)));
    }
    Ok(())
}

fn phase(cfg: &RunConfig, exec: &Executor, out: &mut Output) -> Result<(), Failure> {
    let (ModelConfig::Ssh(spec), Params::Phase { class, x, y }) = (&cfg.model, &cfg.params) else {
        unreachable!("phase is resolved with an SSH model")
    };
    let grid = ssh_phase_scan(spec, x, y, *class, exec);
    out.failed += grid.count(CellStatus::Failed);
    out.file(format!("phase_{}.csv", class.as_str()), &grid.to_csv());
    if cfg.verify {
        let opts = oracle_opts(cfg);
        out.checks.extend(verify_grid(&grid, exec, &opts, cfg.tolerance, |a, b| {
            let raw = SshSpec {
                t1r: a * spec.t2l,
                t1l: b * spec.t2r,
                ..*spec
            };
            let s = class.apply(&raw);
            Ok((build_ssh(&s)?, ssh_roots(&s)?.energies()))
        })?);
    }
    Ok(())
}

fn fragility(cfg: &RunConfig, exec: &Executor, out: &mut Output) -> Result<(), Failure> {
    let (ModelConfig::Hn(spec), Params::Sizes(sizes)) = (&cfg.model, &cfg.params) else {
        unreachable!("fragility is resolved with an HN model")
    };
    let rep = fragility_sweep(spec, sizes, exec)?;
    out.failed += rep.rows.iter().filter(|r| r.status == CellStatus::Failed).count();
    out.file("fragility.csv", &rep.to_csv());
    out.summary.insert("predicted_crossover".into(), json!(rep.predicted_crossover));
    out.summary.insert("observed_crossover".into(), json!(rep.observed_crossover));
    out.summary.insert("monotone_beyond_crossover".into(), json!(rep.monotone_beyond_crossover));
    if cfg.verify {
        let opts = oracle_opts(cfg);
        let d: Result<Vec<f64>, Failure> = exec
            .map(sizes, |&n| {
                let s = spec.with_size(n);
                oracle_distance(&build_hn(&s)?, &solve_hn(&s, false).energies, &opts, cfg.tolerance)
            })
            .into_iter()
            .collect();
        out.checks.extend(d?);
    }
    Ok(())
}

fn twod(cfg: &RunConfig, exec: &Executor, out: &mut Output) -> Result<(), Failure> {
    let Params::Sizes2d(sizes) = &cfg.params else {
        unreachable!("twod is resolved with a size ladder")
    };
    let spec = match &cfg.model {
        ModelConfig::Skin2d { spec, .. } => TwoDSpec::Skin(*spec),
        ModelConfig::Soti(s) => TwoDSpec::Soti(*s),
        _ => unreachable!("model checked during config resolution"),
    };
    let rows = skin2d_fragility(&spec, sizes, exec)?;
    out.file("twod.csv", &TwoDRow::csv(&rows));
    out.summary.insert(
        "metric".into(),
        json!(if spec.periodic_y() { "edge_mass" } else { "corner_mass" }),
    );
    if cfg.verify {
        out.checks.extend(rows.iter().map(|r| r.max_residual));
    }
    Ok(())
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let exec = Executor::new(cfg.workers);
    let mut out = Output::default();
    use crate::config::Command::*;
    match cfg.command {
        Spectrum => spectrum(cfg, &mut out)?,
        Scan => scan(cfg, &exec, &mut out)?,
        Flow => flow(cfg, &exec, &mut out)?,
        Phase => phase(cfg, &exec, &mut out)?,
        Gbz => gbz(cfg, &mut out)?,
        Fragility => fragility(cfg, &exec, &mut out)?,
        Twod => twod(cfg, &exec, &mut out)?,
    }

    std::fs::create_dir_all(&cfg.out).map_err(|e| Failure::Io(format!("{}: {e}", cfg.out.display())))?;
    let mut files = Vec::with_capacity(out.files.len());
    for (name, data) in &out.files {
        files.push(write_atomic(&cfg.out, name, data.as_bytes())?);
    }
    let verification = cfg.verify.then(|| {
        let worst = out.checks.iter().copied().fold(0.0, f64::max);
        Verification {
            checked: out.checks.len(),
            worst,
            tolerance: cfg.tolerance,
            passed: worst <= cfg.tolerance,
        }
    });
    if out.failed > 0 {
        out.summary.insert("failed_items".into(), json!(out.failed));
    }
    let manifest = Manifest {
        tool: "gbz".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cfg.command.name().into(),
        config: cfg.resolved.clone(),
        settings: Settings {
            workers: cfg.workers,
            verify: cfg.verify,
            tolerance: cfg.tolerance,
            seed: cfg.seed,
        },
        files,
        summary: out.summary,
        verification: verification.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_atomic(&cfg.out, "manifest.json", json.as_bytes())?;

    for f in &manifest.files {
        eprintln!("wrote {}", cfg.out.join(&f.path).display());
    }
    if out.failed > 0 {
        return Err(Failure::Solver(format!("{} item(s) failed on both solver paths", out.failed)));
    }
    if let Some(v) = verification {
        if !v.passed {
            return Err(Failure::Mismatch(format!(
                "worst relative distance {:.3e} exceeds tolerance {:.3e} ({} checks)",
                v.worst, v.tolerance, v.checked
            )));
        }
        eprintln!("verified {} check(s), worst {:.3e} <= {:.3e}", v.checked, v.worst, v.tolerance);
    }
    Ok(())
}
