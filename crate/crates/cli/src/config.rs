//! Resolution of files, manifests and flags into one validated run.
//!
//! Precedence is flags over `--set` over the config file over defaults.
//! Every key is checked before any computation starts.

use std::collections::BTreeMap;
use std::path::PathBuf;

use gbz_core::analytic::BoundaryClass;
use gbz_core::models::config::parse_kv;
use gbz_core::models::ModelConfig;
use gbz_core::scans::{Axis, RouteKind};

use crate::manifest::Manifest;
use crate::{Common, Failure};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 0x6762_7a5f_6f72_6163;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Scan,
    Flow,
    Phase,
    Gbz,
    Fragility,
    Twod,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Scan => "scan",
            Command::Flow => "flow",
            Command::Phase => "phase",
            Command::Gbz => "gbz",
            Command::Fragility => "fragility",
            Command::Twod => "twod",
        }
    }

    /// Keys this command reads besides the model keys.
    fn keys(&self) -> &'static [&'static str] {
        match self {
            Command::Spectrum | Command::Gbz => &[],
            Command::Scan => &["x_start", "x_stop", "x_steps", "y_start", "y_stop", "y_steps", "sizes"],
            Command::Flow => &["route", "steps"],
            Command::Phase => &["class", "x_start", "x_stop", "x_steps", "y_start", "y_stop", "y_steps"],
            Command::Fragility | Command::Twod => &["sizes"],
        }
    }

    fn models(&self) -> &'static [&'static str] {
        match self {
            Command::Spectrum => &["hn", "ssh", "skin2d", "soti"],
            Command::Gbz => &["hn", "ssh"],
            Command::Scan | Command::Flow | Command::Fragility => &["hn"],
            Command::Phase => &["ssh"],
            Command::Twod => &["skin2d", "soti"],
        }
    }
}

/// Command-specific parameters after defaults are applied.
#[derive(Debug, Clone)]
pub enum Params {
    None,
    Scan { x: Axis, y: Axis, sizes: Vec<usize> },
    Flow { route: RouteKind, steps: usize },
    Phase { class: BoundaryClass, x: Axis, y: Axis },
    Sizes(Vec<usize>),
    Sizes2d(Vec<(usize, usize)>),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub model: ModelConfig,
    pub params: Params,
    pub workers: usize,
    pub verify: bool,
    pub tolerance: f64,
    pub seed: u64,
    pub out: PathBuf,
    /// Every key with its resolved value, echoed into the manifest.
    pub resolved: BTreeMap<String, String>,
}

fn cfg_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

struct Settings {
    workers: Option<usize>,
    verify: bool,
    tolerance: Option<f64>,
    seed: Option<u64>,
}

fn load(common: &Common, command: Command) -> Result<(BTreeMap<String, String>, Settings), Failure> {
    let mut settings = Settings {
        workers: None,
        verify: false,
        tolerance: None,
        seed: None,
    };
    let mut map = BTreeMap::new();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        if text.trim_start().starts_with('{') {
            let m: Manifest = serde_json::from_str(&text)
                .map_err(|e| cfg_err(format!("{}: not a valid manifest: {e}", path.display())))?;
            if m.command != command.name() {
                return Err(cfg_err(format!(
                    "manifest was written by `{}`, not `{}`",
                    m.command,
                    command.name()
                )));
            }
            map = m.config;
            settings.workers = Some(m.settings.workers);
            settings.verify = m.settings.verify;
            settings.tolerance = Some(m.settings.tolerance);
            settings.seed = Some(m.settings.seed);
        } else {
            map = parse_kv(&text)?;
        }
    }
    for kv in &common.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| cfg_err(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(cfg_err(format!("--set expects KEY=VALUE, got `{kv}`")));
        }
        map.insert(k.to_string(), v.to_string());
    }
    if common.workers.is_some() {
        settings.workers = common.workers;
    }
    settings.verify |= common.verify;
    if common.tolerance.is_some() {
        settings.tolerance = common.tolerance;
    }
    if common.seed.is_some() {
        settings.seed = common.seed;
    }
    Ok((map, settings))
}

struct Keys<'a> {
    map: &'a BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Keys<'_> {
    fn get<T: std::str::FromStr + ToString>(&mut self, key: &str, default: T) -> Result<T, Failure> {
        let v = match self.map.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map_err(|_| cfg_err(format!("`{key}` has an invalid value: {raw}")))?,
            None => default,
        };
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    fn finite(&mut self, key: &str, default: f64) -> Result<f64, Failure> {
        let v = self.get(key, default)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(cfg_err(format!("`{key}` must be finite")))
        }
    }

    fn axis(&mut self, p: &str, start: f64, stop: f64, steps: usize) -> Result<Axis, Failure> {
        let a = self.finite(&format!("{p}_start"), start)?;
        let b = self.finite(&format!("{p}_stop"), stop)?;
        let n = self.get(&format!("{p}_steps"), steps)?;
        Ok(Axis::new(p, a, b, n)?)
    }

    fn raw(&mut self, key: &str, default: String) -> String {
        let v = self.map.get(key).cloned().unwrap_or(default);
        self.resolved.insert(key.to_string(), v.clone());
        v
    }
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, Failure> {
    let sizes = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| cfg_err(format!("`sizes` must be a comma-separated list of integers: {s}")))?;
    if sizes.is_empty() || sizes.iter().any(|&n| n < 2) {
        return Err(cfg_err("every size must be at least 2"));
    }
    Ok(sizes)
}

fn parse_sizes_2d(s: &str) -> Result<Vec<(usize, usize)>, Failure> {
    let bad = || cfg_err(format!("`sizes` must look like 10x10,20x20: {s}"));
    let sizes = s
        .split(',')
        .map(|t| {
            let (a, b) = t.trim().split_once(['x', 'X']).ok_or_else(bad)?;
            let a = a.trim().parse::<usize>().map_err(|_| bad())?;
            let b = b.trim().parse::<usize>().map_err(|_| bad())?;
            Ok((a, b))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    if sizes.iter().any(|&(a, b)| a < 2 || b < 2) {
        return Err(cfg_err("every extent must be at least 2"));
    }
    Ok(sizes)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn resolve(command: Command, common: &Common) -> Result<Self, Failure> {
        let (map, settings) = load(common, command)?;
        let model = ModelConfig::from_map(&map, command.keys())?;
        if !command.models().contains(&model.model_name()) {
            return Err(cfg_err(format!(
                "`{}` does not support model `{}` (expected one of: {})",
                command.name(),
                model.model_name(),
                command.models().join(", ")
            )));
        }
        let mut keys = Keys {
            map: &map,
            resolved: model.to_kv().into_iter().collect(),
        };
        let params = match (command, &model) {
            (Command::Scan, ModelConfig::Hn(spec)) => {
                let x = keys.axis("x", 0.0, 1.0, 21)?;
                let y = keys.axis("y", 0.0, 1.0, 21)?;
                let sizes = parse_sizes(&keys.raw("sizes", spec.n.to_string()))?;
                keys.resolved.insert("sizes".into(), join(&sizes));
                Params::Scan { x, y, sizes }
            }
            (Command::Flow, _) => {
                let name = keys.raw("route", "S1".into());
                let route = RouteKind::parse(&name)
                    .ok_or_else(|| cfg_err(format!("unknown route `{name}` (expected S1..S5)")))?;
                keys.resolved.insert("route".into(), route.name().into());
                let steps = keys.get("steps", 41usize)?;
                if steps < 2 {
                    return Err(cfg_err("`steps` must be at least 2"));
                }
                Params::Flow { route, steps }
            }
            (Command::Phase, _) => {
                let name = keys.raw("class", "obc".into());
                let class = BoundaryClass::parse(&name)
                    .ok_or_else(|| cfg_err(format!("unknown class `{name}` (expected pbc, obc, dL0 or dR0)")))?;
                keys.resolved.insert("class".into(), class.as_str().into());
                let x = keys.axis("x", 0.1, 2.0, 39)?;
                let y = keys.axis("y", 0.1, 2.0, 39)?;
                if [&x, &y].iter().any(|a| a.start <= 0.0 || a.stop <= 0.0) {
                    return Err(cfg_err("phase axes must be positive"));
                }
                Params::Phase { class, x, y }
            }
            (Command::Fragility, ModelConfig::Hn(spec)) => {
                let n = spec.n;
                let sizes = parse_sizes(&keys.raw("sizes", join(&[n, 2 * n, 4 * n, 8 * n])))?;
                keys.resolved.insert("sizes".into(), join(&sizes));
                Params::Sizes(sizes)
            }
            (Command::Twod, m) => {
                let (nx, ny) = match m {
                    ModelConfig::Skin2d { spec, .. } => (spec.nx, spec.ny),
                    ModelConfig::Soti(s) => (s.mx, s.my),
                    _ => unreachable!("model checked above"),
                };
                let sizes = parse_sizes_2d(&keys.raw("sizes", format!("{nx}x{ny}")))?;
                let text = sizes.iter().map(|(a, b)| format!("{a}x{b}")).collect::<Vec<_>>();
                keys.resolved.insert("sizes".into(), text.join(","));
                Params::Sizes2d(sizes)
            }
            _ => Params::None,
        };
        let tolerance = settings.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(cfg_err("--tolerance must be positive and finite"));
        }
        Ok(Self {
            command,
            model,
            params,
            workers: settings.workers.unwrap_or(0),
            verify: settings.verify,
            tolerance,
            seed: settings.seed.unwrap_or(DEFAULT_SEED),
            out: common.out.clone(),
            resolved: keys.resolved,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(set: &[&str]) -> Common {
        Common {
            config: None,
            out: ".".into(),
            workers: None,
            verify: false,
            tolerance: None,
            seed: None,
            set: set.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn scan_defaults_resolve() {
        let c = common(&["model=hn", "N=10", "tL=1", "tR=0.85"]);
        let cfg = RunConfig::resolve(Command::Scan, &c).unwrap();
        assert_eq!(cfg.resolved["sizes"], "10");
        assert_eq!(cfg.resolved["x_steps"], "21");
        assert_eq!(cfg.resolved["dL"], "0");
    }

    #[test]
    fn command_keys_are_scoped() {
        let c = common(&["model=hn", "N=10", "tL=1", "tR=0.85", "route=S2"]);
        assert!(matches!(RunConfig::resolve(Command::Scan, &c), Err(Failure::Config(_))));
        assert!(RunConfig::resolve(Command::Flow, &c).is_ok());
    }

    #[test]
    fn model_must_fit_command() {
        let c = common(&["model=hn", "N=10", "tL=1", "tR=0.85"]);
        assert!(matches!(RunConfig::resolve(Command::Phase, &c), Err(Failure::Config(_))));
    }

    #[test]
    fn sizes_parse() {
        assert_eq!(parse_sizes("10, 20,80").unwrap(), vec![10, 20, 80]);
        assert!(parse_sizes("10,x").is_err());
        assert_eq!(parse_sizes_2d("10x10,20X30").unwrap(), vec![(10, 10), (20, 30)]);
        assert!(parse_sizes_2d("10").is_err());
    }
}
