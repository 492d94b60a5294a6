//! Flat `key = value` model files.
//!
//! Blank lines and `#` comments are ignored. Keys are case-sensitive; each
//! model accepts only the keys it uses.

use std::collections::BTreeMap;

use super::{ChainSpec, Skin2DSpec, SotiSpec, SshSpec};
use crate::{Error, Result};

/// Every key a model file may contain.
pub const MODEL_KEYS: [&str; 21] = [
    "model", "N", "M", "Nx", "Ny", "tL", "tR", "t1L", "t1R", "t2L", "t2R", "t", "gamma", "lambda",
    "dL", "dR", "dLx", "dRx", "dLy", "dRy", "ky",
];

#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    Hn(ChainSpec),
    Ssh(SshSpec),
    Skin2d { spec: Skin2DSpec, ky: Option<f64> },
    Soti(SotiSpec),
}

/// Parses `key = value` lines, rejecting malformed lines and duplicates.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Config(format!("line {}: empty key or value", lineno + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Config(format!("duplicate key `{k}`")));
        }
    }
    Ok(out)
}

struct Reader<'a> {
    map: &'a BTreeMap<String, String>,
    used: Vec<&'static str>,
}

impl<'a> Reader<'a> {
    fn f64(&mut self, key: &'static str, default: Option<f64>) -> Result<f64> {
        self.used.push(key);
        match self.map.get(key) {
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Config(format!("`{key}` is not a finite number: {v}"))),
            None => default.ok_or_else(|| Error::Config(format!("missing key `{key}`"))),
        }
    }

    fn opt_f64(&mut self, key: &'static str) -> Result<Option<f64>> {
        if self.map.contains_key(key) {
            self.f64(key, None).map(Some)
        } else {
            self.used.push(key);
            Ok(None)
        }
    }

    fn usize(&mut self, key: &'static str) -> Result<usize> {
        self.used.push(key);
        let v = self
            .map
            .get(key)
            .ok_or_else(|| Error::Config(format!("missing key `{key}`")))?;
        v.parse::<usize>()
            .map_err(|_| Error::Config(format!("`{key}` is not a non-negative integer: {v}")))
    }
}

impl ModelConfig {
    /// Builds a model from parsed keys. Keys that are model keys but unused by
    /// the chosen model are rejected; keys listed in `extra` are skipped, and
    /// anything else is rejected as unknown.
    pub fn from_map(map: &BTreeMap<String, String>, extra: &[&str]) -> Result<Self> {
        let model = map
            .get("model")
            .ok_or_else(|| Error::Config("missing key `model`".into()))?
            .clone();
        let mut rd = Reader {
            map,
            used: vec!["model"],
        };
        let cfg = match model.as_str() {
            "hn" => ModelConfig::Hn(ChainSpec {
                n: rd.usize("N")?,
                t_l: rd.f64("tL", None)?,
                t_r: rd.f64("tR", None)?,
                delta_l: rd.f64("dL", Some(0.0))?,
                delta_r: rd.f64("dR", Some(0.0))?,
            }),
            "ssh" => ModelConfig::Ssh(SshSpec {
                m: rd.usize("M")?,
                t1l: rd.f64("t1L", None)?,
                t1r: rd.f64("t1R", None)?,
                t2l: rd.f64("t2L", None)?,
                t2r: rd.f64("t2R", None)?,
                delta_l: rd.f64("dL", Some(0.0))?,
                delta_r: rd.f64("dR", Some(0.0))?,
            }),
            "skin2d" => {
                let (t_l, t_r) = (rd.f64("tL", None)?, rd.f64("tR", None)?);
                ModelConfig::Skin2d {
                    spec: Skin2DSpec {
                        nx: rd.usize("Nx")?,
                        ny: rd.usize("Ny")?,
                        t_lx: t_l,
                        t_rx: t_r,
                        t_ly: t_l,
                        t_ry: t_r,
                        d_lx: rd.f64("dLx", Some(0.0))?,
                        d_rx: rd.f64("dRx", Some(0.0))?,
                        d_ly: rd.f64("dLy", Some(0.0))?,
                        d_ry: rd.f64("dRy", Some(0.0))?,
                    },
                    ky: rd.opt_f64("ky")?,
                }
            }
            "soti" => ModelConfig::Soti(SotiSpec {
                mx: rd.usize("Nx")?,
                my: rd.usize("Ny")?,
                t: rd.f64("t", None)?,
                gamma: rd.f64("gamma", None)?,
                lambda: rd.f64("lambda", None)?,
                d_lx: rd.f64("dLx", Some(0.0))?,
                d_rx: rd.f64("dRx", Some(0.0))?,
                d_ly: rd.f64("dLy", Some(0.0))?,
                d_ry: rd.f64("dRy", Some(0.0))?,
            }),
            other => {
                return Err(Error::Config(format!(
                    "unknown model `{other}` (expected hn, ssh, skin2d or soti)"
                )))
            }
        };
        for key in map.keys() {
            if rd.used.contains(&key.as_str()) || extra.contains(&key.as_str()) {
                continue;
            }
            if MODEL_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("key `{key}` does not apply to model `{model}`")));
            }
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_map(&parse_kv(text)?, &[])
    }

    pub fn validate(&self) -> Result<()> {
        let r = match self {
            ModelConfig::Hn(s) => s.validate(),
            ModelConfig::Ssh(s) => s.validate(),
            ModelConfig::Skin2d { spec, .. } => spec.validate(),
            ModelConfig::Soti(s) => s.validate(),
        };
        r.map_err(|e| Error::Config(e.to_string()))
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            ModelConfig::Hn(_) => "hn",
            ModelConfig::Ssh(_) => "ssh",
            ModelConfig::Skin2d { .. } => "skin2d",
            ModelConfig::Soti(_) => "soti",
        }
    }

    /// Resolved key/value pairs, including defaults, in canonical order.
    pub fn to_kv(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(&str, String)> = vec![("model", self.model_name().to_string())];
        match self {
            ModelConfig::Hn(s) => {
                kv.push(("N", s.n.to_string()));
                kv.extend([
                    ("tL", s.t_l),
                    ("tR", s.t_r),
                    ("dL", s.delta_l),
                    ("dR", s.delta_r),
                ].map(|(k, v)| (k, v.to_string())));
            }
            ModelConfig::Ssh(s) => {
                kv.push(("M", s.m.to_string()));
                kv.extend([
                    ("t1L", s.t1l),
                    ("t1R", s.t1r),
                    ("t2L", s.t2l),
                    ("t2R", s.t2r),
                    ("dL", s.delta_l),
                    ("dR", s.delta_r),
                ].map(|(k, v)| (k, v.to_string())));
            }
            ModelConfig::Skin2d { spec: s, ky } => {
                kv.push(("Nx", s.nx.to_string()));
                kv.push(("Ny", s.ny.to_string()));
                kv.extend([
                    ("tL", s.t_lx),
                    ("tR", s.t_rx),
                    ("dLx", s.d_lx),
                    ("dRx", s.d_rx),
                    ("dLy", s.d_ly),
                    ("dRy", s.d_ry),
                ].map(|(k, v)| (k, v.to_string())));
                if let Some(ky) = ky {
                    kv.push(("ky", ky.to_string()));
                }
            }
            ModelConfig::Soti(s) => {
                kv.push(("Nx", s.mx.to_string()));
                kv.push(("Ny", s.my.to_string()));
                kv.extend([
                    ("t", s.t),
                    ("gamma", s.gamma),
                    ("lambda", s.lambda),
                    ("dLx", s.d_lx),
                    ("dRx", s.d_rx),
                    ("dLy", s.d_ly),
                    ("dRy", s.d_ry),
                ].map(|(k, v)| (k, v.to_string())));
            }
        }
        kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    pub fn to_text(&self) -> String {
        self.to_kv()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_hn_with_defaults() {
        let cfg = ModelConfig::parse("model = hn\n# comment\nN = 3\ntL = 1\ntR = 1\n").unwrap();
        assert_eq!(cfg, ModelConfig::Hn(ChainSpec::obc(3, 1.0, 1.0).unwrap()));
    }

    #[test]
    fn round_trips_through_text() {
        let cfg = ModelConfig::Ssh(SshSpec::new(8, 0.5, 0.3, 1.0, 1.0, 0.1, 0.2).unwrap());
        assert_eq!(ModelConfig::parse(&cfg.to_text()).unwrap(), cfg);
        let soti = ModelConfig::Soti(SotiSpec::new(10, 10, 0.8, -1.0, 0.8, 0.002).unwrap());
        assert_eq!(ModelConfig::parse(&soti.to_text()).unwrap(), soti);
    }

    #[test]
    fn rejects_unknown_and_misplaced_keys() {
        assert!(ModelConfig::parse("model = hn\nN = 3\ntL = 1\ntR = 1\nfoo = 2\n").is_err());
        assert!(ModelConfig::parse("model = hn\nN = 3\ntL = 1\ntR = 1\nt1L = 2\n").is_err());
        assert!(ModelConfig::parse("model = hn\nN = 3\ntL = 1\n").is_err());
        assert!(ModelConfig::parse("model = hn\nN = 3\nN = 4\n").is_err());
        assert!(ModelConfig::parse("model = hn\nN = x\ntL = 1\ntR = 1\n").is_err());
        assert!(ModelConfig::parse("model = hn\nN = 1\ntL = 1\ntR = 1\n").is_err());
    }

    #[test]
    fn extra_keys_can_be_allowed() {
        let map = parse_kv("model = hn\nN = 3\ntL = 1\ntR = 1\nsteps = 4\n").unwrap();
        assert!(ModelConfig::from_map(&map, &["steps"]).is_ok());
        assert!(ModelConfig::from_map(&map, &[]).is_err());
    }
}
