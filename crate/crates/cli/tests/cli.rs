use std::path::Path;
use std::process::{Command, Output};

use gbz_core::models::{build_hn, ChainSpec};
use gbz_core::oracle::{eigenvalues, match_spectra};
use gbz_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn gbz(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbz"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("GBZ_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&read(&dir.join("manifest.json"))).unwrap()
}

fn set(kv: &[(&str, String)]) -> Vec<String> {
    kv.iter().flat_map(|(k, v)| ["--set".to_string(), format!("{k}={v}")]).collect()
}

#[test]
fn three_site_chain_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let o = gbz(&["spectrum", "--set", "model=hn", "--set", "N=3", "--set", "tL=1", "--set", "tR=1"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&dir.path().join("spectrum.csv"));
    let mut re: Vec<f64> = column(&csv, "re_E").iter().map(|s| s.parse().unwrap()).collect();
    re.sort_by(f64::total_cmp);
    let want = [-(2f64.sqrt()), 0.0, 2f64.sqrt()];
    for (a, b) in re.iter().zip(want) {
        assert!((a - b).abs() < 1e-14, "{re:?}");
    }
    for s in column(&csv, "im_E") {
        assert_eq!(s.parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn boundary_scan_writes_one_grid_per_size() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fig.cfg");
    std::fs::write(&cfg, "model = hn\nN = 10\ntL = 1\ntR = 0.85\nsizes = 10, 20, 80\nx_steps = 6\ny_steps = 6\n").unwrap();
    let out = dir.path().join("out");
    let o = gbz(&["scan", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for n in [10, 20, 80] {
        let csv = read(&out.join(format!("grid_N{n}.csv")));
        let header = csv.lines().next().unwrap();
        assert!(header.starts_with("dL_over_tL,dR_over_tR,mean_ipr,n_real_theta,max_im_E,phase_label"));
        assert_eq!(csv.lines().count(), 1 + 36);
    }
    let m = manifest(&out);
    assert_eq!(m["files"].as_array().unwrap().len(), 3);
    assert_eq!(m["config"]["sizes"], "10,20,80");
}

/// The exit status must agree with an independent comparison of the same
/// spectra: 0 exactly when the analytic and dense spectra match to 1e-8.
#[test]
fn verify_agrees_with_dense_comparison() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..5 {
        let (tl, tr) = (rng.gen_range(0.3..1.5), rng.gen_range(0.3..1.5));
        let (dl, dr) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let dir = tempfile::tempdir().unwrap();
        let kv = set(&[
            ("model", "hn".into()),
            ("N", "16".into()),
            ("tL", tl.to_string()),
            ("tR", tr.to_string()),
            ("dL", dl.to_string()),
            ("dR", dr.to_string()),
        ]);
        let mut args = vec!["spectrum", "--verify"];
        args.extend(kv.iter().map(String::as_str));
        let o = gbz(&args, dir.path());

        let csv = read(&dir.path().join("spectrum.csv"));
        let re = column(&csv, "re_E");
        let im = column(&csv, "im_E");
        let e: Vec<C64> = re.iter().zip(&im).map(|(a, b)| C64::new(a.parse().unwrap(), b.parse().unwrap())).collect();
        let dense = eigenvalues(&build_hn(&ChainSpec::new(16, tl, tr, dl, dr).unwrap()).unwrap()).unwrap();
        let radius = dense.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let d = match_spectra(&e, &dense).unwrap().max_dist / radius;
        assert_eq!(code(&o) == 0, d <= 1e-8, "distance {d:e}, exit {}", code(&o));
        assert_eq!(manifest(dir.path())["verification"]["passed"], Value::Bool(d <= 1e-8));
    }
}

#[test]
fn impossible_tolerance_is_an_oracle_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let o = gbz(
        &["spectrum", "--verify", "--tolerance", "1e-300", "--set", "model=hn", "--set", "N=16", "--set", "tL=1", "--set", "tR=0.5", "--set", "dL=0.3", "--set", "dR=0.2"],
        dir.path(),
    );
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification failed"));
    // data and manifest are still written for inspection
    assert!(dir.path().join("spectrum.csv").exists());
    assert_eq!(manifest(dir.path())["verification"]["passed"], Value::Bool(false));
}

#[test]
fn manifest_round_trip_is_byte_identical() {
    let runs: [&[&str]; 3] = [
        &["flow", "--set", "model=hn", "--set", "N=12", "--set", "tL=1", "--set", "tR=0.8", "--set", "route=S2", "--set", "steps=9"],
        &["phase", "--set", "model=ssh", "--set", "M=6", "--set", "t1L=1", "--set", "t1R=1", "--set", "t2L=1", "--set", "t2R=1", "--set", "class=dR0", "--set", "x_steps=5", "--set", "y_steps=5"],
        &["fragility", "--set", "model=hn", "--set", "N=8", "--set", "tL=1", "--set", "tR=0.7", "--set", "dL=0.09", "--set", "dR=0.56", "--set", "sizes=8,14,16"],
    ];
    for args in runs {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        assert_eq!(code(&gbz(args, &a)), 0);
        let m = a.join("manifest.json");
        let o = gbz(&[args[0], "--config", m.to_str().unwrap()], &b);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let ma = manifest(&a);
        assert_eq!(ma["config"], manifest(&b)["config"]);
        for f in ma["files"].as_array().unwrap() {
            let name = f["path"].as_str().unwrap();
            let bytes = std::fs::read(a.join(name)).unwrap();
            assert_eq!(bytes, std::fs::read(b.join(name)).unwrap(), "{name}");
            let digest: String = Sha256::digest(&bytes).iter().map(|x| format!("{x:02x}")).collect();
            assert_eq!(f["sha256"].as_str().unwrap(), digest);
            assert_eq!(f["bytes"].as_u64().unwrap() as usize, bytes.len());
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["scan", "--set", "model=hn", "--set", "N=12", "--set", "tL=1", "--set", "tR=1.3", "--set", "x_steps=7", "--set", "y_steps=7"];
    let mut files = vec![];
    for w in ["1", "4"] {
        let out = dir.path().join(w);
        let o = Command::new(env!("CARGO_BIN_EXE_gbz"))
            .args(args)
            .arg("--out")
            .arg(&out)
            .env("GBZ_WORKERS", w)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        assert_eq!(manifest(&out)["settings"]["workers"], w.parse::<u64>().unwrap());
        files.push(std::fs::read(out.join("grid_N12.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn flags_win_over_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "model = hn\nN = 3\ntL = 1\ntR = 1\n").unwrap();
    let o = gbz(&["spectrum", "--config", cfg.to_str().unwrap(), "--set", "N=5"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(read(&dir.path().join("spectrum.csv")).lines().count(), 1 + 5);
    assert_eq!(manifest(dir.path())["config"]["N"], "5");
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["spectrum", "--set", "model=hn", "--set", "N=3", "--set", "tL=1"],
        &["spectrum", "--set", "model=hn", "--set", "N=3", "--set", "tL=1", "--set", "tR=1", "--set", "bogus=1"],
        &["spectrum", "--set", "model=hn", "--set", "N=3", "--set", "tL=1", "--set", "tR=1", "--set", "sizes=4"],
        &["phase", "--set", "model=hn", "--set", "N=3", "--set", "tL=1", "--set", "tR=1"],
        &["flow", "--set", "model=hn", "--set", "N=8", "--set", "tL=1", "--set", "tR=0.5", "--set", "route=S9"],
        &["twod", "--set", "model=skin2d", "--set", "Nx=4", "--set", "Ny=4", "--set", "tL=1", "--set", "tR=2", "--set", "sizes=100x100"],
    ];
    for args in cases {
        let o = gbz(args, dir.path());
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "model hn\n").unwrap();
    assert_eq!(code(&gbz(&["spectrum", "--config", bad.to_str().unwrap()], dir.path())), 2);
    // nothing was written by the failed runs
    assert!(!dir.path().join("manifest.json").exists());
}

#[test]
fn manifest_from_another_command_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    assert_eq!(code(&gbz(&["gbz", "--set", "model=hn", "--set", "N=6", "--set", "tL=1", "--set", "tR=0.5"], &a)), 0);
    let m = a.join("manifest.json");
    assert_eq!(code(&gbz(&["spectrum", "--config", m.to_str().unwrap()], dir.path())), 2);
}

#[test]
fn twod_reports_localization_per_size() {
    let dir = tempfile::tempdir().unwrap();
    let o = gbz(
        &["twod", "--verify", "--set", "model=skin2d", "--set", "Nx=6", "--set", "Ny=6", "--set", "tL=0.7", "--set", "tR=2.3", "--set", "sizes=6x6,8x8"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&dir.path().join("twod.csv"));
    let loc: Vec<f64> = column(&csv, "localization").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(loc.len(), 2);
    // OBC skin modes pile into one corner
    assert!(loc.iter().all(|&m| m > 0.5 && m <= 1.0 + 1e-12), "{loc:?}");
    assert_eq!(manifest(dir.path())["summary"]["metric"], "corner_mass");
}
