//! Flat `key = value` run configuration.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! # comment
//! omega_pd = 144.27     # trailing comments are allowed
//! method   = propagator
//! ```
//!
//! Keys are case-sensitive, may appear at most once per file and must be
//! known. Frequencies are in MHz, times in μs and the field in gauss.
//! `--set key=value` overrides are applied after the file, in order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use nscool::analysis::OMEGA_PS_CAP;
use nscool::lindblad::{IntegratorConfig, Method};
use nscool::srmodel::ModelParams;
use nscool::Complex64;
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}: expected `key = value`, got `{line}`")]
    Syntax { origin: String, line: String },
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: key `{key}` given twice")]
    Duplicate { origin: String, key: String },
    #[error("{origin}: bad value `{value}` for `{key}`: {reason}")]
    BadValue { origin: String, key: String, value: String, reason: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Everything a command needs, fully resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub t_final: f64,
    pub samples: usize,
    pub integrator: IntegratorConfig,
    pub balance_lo: f64,
    pub balance_hi: f64,
    pub threshold: f64,
    pub omega_ps_cap: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::default(),
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(1.0, 0.0),
            t_final: 20.0,
            samples: 201,
            integrator: IntegratorConfig::default(),
            balance_lo: 100.0,
            balance_hi: 200.0,
            threshold: 0.99,
            omega_ps_cap: OMEGA_PS_CAP,
        }
    }
}

type Getter = fn(&RunConfig) -> String;
type Setter = fn(&mut RunConfig, &str) -> Result<(), String>;

fn num(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| "not a number".to_string())?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err("must be finite".into())
    }
}

macro_rules! float_keys {
    ($($key:literal => $($field:ident).+;)*) => {
        &[$((
            $key,
            (|c: &RunConfig| fmt_f64(c.$($field).+)) as Getter,
            (|c: &mut RunConfig, v: &str| {
                c.$($field).+ = num(v)?;
                Ok(())
            }) as Setter,
        ),)*]
    };
}

const FLOAT_KEYS: &[(&str, Getter, Setter)] = float_keys! {
    "omega_eff" => params.omega_eff;
    "omega_ps" => params.omega_ps;
    "omega_pd" => params.omega_pd;
    "delta" => params.delta;
    "delta_pd" => params.delta_pd;
    "delta_ps_extra" => params.delta_ps_extra;
    "gamma_p" => params.gamma_p;
    "gamma_s" => params.gamma_s;
    "gamma_d" => params.gamma_d;
    "b_field" => params.b_gauss;
    "g_j" => params.g_j;
    "mu_nuclear" => params.mu_nuclear;
    "a_1p1" => params.hf_1p1.a;
    "q_1p1" => params.hf_1p1.q;
    "e_hf" => params.e_hf;
    "xi0" => params.xi.xi0;
    "xi1" => params.xi.xi1;
    "xi2" => params.xi.xi2;
    "xi3" => params.xi.xi3;
    "alpha" => alpha.re;
    "alpha_im" => alpha.im;
    "beta" => beta.re;
    "beta_im" => beta.im;
    "t_final" => t_final;
    "rel_tol" => integrator.rel_tol;
    "abs_tol" => integrator.abs_tol;
    "max_step" => integrator.max_step;
    "balance_lo" => balance_lo;
    "balance_hi" => balance_hi;
    "threshold" => threshold;
    "omega_ps_cap" => omega_ps_cap;
};

fn other_keys() -> [(&'static str, Getter, Setter); 2] {
    [
        (
            "samples",
            |c| c.samples.to_string(),
            |c, v| {
                c.samples = v.parse().map_err(|_| "not a non-negative integer".to_string())?;
                Ok(())
            },
        ),
        (
            "method",
            |c| match c.integrator.method {
                Method::Propagator => "propagator".into(),
                Method::DormandPrince => "dopri".into(),
            },
            |c, v| {
                c.integrator.method = match v {
                    "propagator" => Method::Propagator,
                    "dopri" => Method::DormandPrince,
                    _ => return Err("expected `propagator` or `dopri`".into()),
                };
                Ok(())
            },
        ),
    ]
}

/// Shortest text that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn lookup(key: &str) -> Option<(Getter, Setter)> {
    FLOAT_KEYS
        .iter()
        .copied()
        .chain(other_keys())
        .find(|(k, _, _)| *k == key)
        .map(|(_, g, s)| (g, s))
}

/// All known keys, sorted.
pub fn known_keys() -> Vec<&'static str> {
    let mut v: Vec<_> = FLOAT_KEYS.iter().map(|e| e.0).chain(other_keys().map(|e| e.0)).collect();
    v.sort_unstable();
    v
}

impl RunConfig {
    pub fn set(&mut self, origin: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        let (_, setter) = lookup(key)
            .ok_or_else(|| ConfigError::UnknownKey { origin: origin.into(), key: key.into() })?;
        setter(self, value).map_err(|reason| ConfigError::BadValue {
            origin: origin.into(),
            key: key.into(),
            value: value.into(),
            reason,
        })
    }

    /// Applies the entries of a config file.
    pub fn apply_text(&mut self, name: &str, text: &str) -> Result<(), ConfigError> {
        let mut seen = BTreeSet::new();
        for (n, raw) in text.lines().enumerate() {
            let origin = format!("{name}:{}", n + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = split_entry(line).ok_or_else(|| ConfigError::Syntax {
                origin: origin.clone(),
                line: raw.trim().into(),
            })?;
            if !seen.insert(k.to_string()) {
                return Err(ConfigError::Duplicate { origin, key: k.into() });
            }
            self.set(&origin, k, v)?;
        }
        Ok(())
    }

    /// Applies one `--set key=value` override.
    pub fn apply_override(&mut self, entry: &str) -> Result<(), ConfigError> {
        let origin = format!("--set {entry}");
        let (k, v) = split_entry(entry)
            .ok_or_else(|| ConfigError::Syntax { origin: origin.clone(), line: entry.into() })?;
        self.set(&origin, k, v)
    }

    pub fn load(path: Option<&str>, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut c = RunConfig::default();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|source| ConfigError::Io { path: p.into(), source })?;
            c.apply_text(p, &text)?;
        }
        for o in overrides {
            c.apply_override(o)?;
        }
        Ok(c)
    }

    /// Every key with its resolved value.
    pub fn echo(&self) -> BTreeMap<String, String> {
        known_keys()
            .into_iter()
            .map(|k| (k.to_string(), lookup(k).expect("known key").0(self)))
            .collect()
    }

    /// Canonical config text; feeding it back reproduces `self`.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.echo() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    /// SHA-256 of [`canonical_text`](Self::canonical_text), hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical_text().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

}

fn split_entry(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() || v.is_empty() || k.contains(char::is_whitespace) {
        return None;
    }
    Some((k, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_roundtrip() {
        let mut c = RunConfig::default();
        c.apply_text("t", "omega_pd = 140.5\nmethod = dopri\nsamples = 7\n").unwrap();
        let mut d = RunConfig::default();
        d.apply_text("canon", &c.canonical_text()).unwrap();
        assert_eq!(c, d);
        assert_eq!(c.hash(), d.hash());
        assert_ne!(c.hash(), RunConfig::default().hash());
    }

    #[test]
    fn comments_and_blanks() {
        let mut c = RunConfig::default();
        c.apply_text("t", "# header\n\n  delta = 0   # resonant\n").unwrap();
        assert_eq!(c.params.delta, 0.0);
    }

    #[test]
    fn rejects() {
        let mut c = RunConfig::default();
        assert!(matches!(c.apply_text("t", "omega = 1"), Err(ConfigError::UnknownKey { .. })));
        assert!(matches!(c.apply_text("t", "delta"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(c.apply_text("t", "delta = x"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.apply_text("t", "delta = inf"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.apply_text("t", "delta = 1\ndelta = 2"), Err(ConfigError::Duplicate { .. })));
        assert!(matches!(c.apply_override("samples=-3"), Err(ConfigError::BadValue { .. })));
    }

    #[test]
    fn override_after_file() {
        let c = RunConfig::load(None, &["delta=1.5".into(), "delta=2".into()]).unwrap();
        assert_eq!(c.params.delta, 2.0);
    }

    #[test]
    fn every_key_is_settable() {
        for k in known_keys() {
            let mut c = RunConfig::default();
            let v = c.echo()[k].clone();
            c.set("t", k, &v).unwrap();
            assert_eq!(c, RunConfig::default(), "{k}");
        }
    }
}
