//! Experiment configuration: a TOML key-value file, with every field
//! overridable from CLI flags and the output root defaulting from the
//! `HCCH_OUTPUT_DIR` environment variable.
//!
//! ```toml
//! L = [10.0]          # scalar or list
//! delta = [0.0, 0.05] # scalar or list
//! N = 256
//! dt = "auto"         # or a number
//! T = 200.0
//! seeds = "0..4"      # inclusive range, or a list [0, 1, 2]
//! output_dir = "runs"
//!
//! [tolerances]
//! dist = 1e-6
//! vel = 1e-8
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::evolution::ClassifyTol;

/// Environment variable naming the default output root.
pub const OUTPUT_DIR_ENV: &str = "HCCH_OUTPUT_DIR";

/// Output root when neither flag, config, nor environment provide one.
pub const OUTPUT_DIR_FALLBACK: &str = "runs";

/// Resolve the default output root: `HCCH_OUTPUT_DIR` if set, else `runs`.
pub fn default_output_dir() -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(OUTPUT_DIR_FALLBACK),
    }
}

fn scalar_or_list<'de, D>(de: D) -> std::result::Result<Vec<f64>, D::Error>
where
    D: Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(match OneOrMany::deserialize(de)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(xs) => xs,
    })
}

fn auto_or_number<'de, D>(de: D) -> std::result::Result<Option<f64>, D::Error>
where
    D: Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum AutoOr {
        Num(f64),
        Word(String),
    }
    match AutoOr::deserialize(de)? {
        AutoOr::Num(x) => Ok(Some(x)),
        AutoOr::Word(w) if w == "auto" => Ok(None),
        AutoOr::Word(w) => Err(serde::de::Error::custom(format!(
            "dt must be a number or \"auto\", found {w:?}"
        ))),
    }
}

fn auto_or_number_ser<S>(v: &Option<f64>, ser: S) -> std::result::Result<S::Ok, S::Error>
where
    S: serde::Serializer,
{
    match v {
        Some(x) => ser.serialize_f64(*x),
        None => ser.serialize_str("auto"),
    }
}

fn seed_list<'de, D>(de: D) -> std::result::Result<Vec<u64>, D::Error>
where
    D: Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum SeedsSpec {
        Range(String),
        List(Vec<u64>),
    }
    match SeedsSpec::deserialize(de)? {
        SeedsSpec::List(xs) => Ok(xs),
        SeedsSpec::Range(s) => parse_seeds(&s).map_err(serde::de::Error::custom),
    }
}

/// Parse a seed specification: `"0..4"` (inclusive range) or `"0,3,7"`.
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let spec = spec.trim();
    if let Some((a, b)) = spec.split_once("..") {
        let lo: u64 = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad seed range start {a:?}")))?;
        let hi: u64 = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad seed range end {b:?}")))?;
        if hi < lo {
            return Err(Error::Parse(format!("seed range {spec:?} is empty")));
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad seed {t:?}")))
        })
        .collect()
}

/// Parse a comma-separated list of reals, e.g. `"0,0.025,0.05"`.
pub fn parse_f64_list(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number {t:?}")))
        })
        .collect()
}

/// Full description of a sweep or single-run experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Domain lengths to sweep.
    #[serde(rename = "L", deserialize_with = "scalar_or_list")]
    pub l: Vec<f64>,
    /// Convection strengths to sweep.
    #[serde(deserialize_with = "scalar_or_list")]
    pub delta: Vec<f64>,
    /// Modes per field.
    #[serde(rename = "N")]
    pub n: usize,
    /// Time step; `None` means the grid-based default.
    #[serde(deserialize_with = "auto_or_number", serialize_with = "auto_or_number_ser")]
    pub dt: Option<f64>,
    /// Integration horizon.
    #[serde(rename = "T")]
    pub t_final: f64,
    /// RNG seeds, one trajectory per seed.
    #[serde(deserialize_with = "seed_list")]
    pub seeds: Vec<u64>,
    /// Classification tolerances.
    pub tolerances: ClassifyTol,
    /// Root directory for run outputs.
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            l: vec![10.0],
            delta: vec![0.0],
            n: 256,
            dt: None,
            t_final: 200.0,
            seeds: vec![0],
            tolerances: ClassifyTol::default(),
            output_dir: default_output_dir(),
        }
    }
}

/// CLI-flag overrides; `None` keeps the config-file (or default) value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub l: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub seeds: Option<Vec<u64>>,
    pub dist_tol: Option<f64>,
    pub vel_tol: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Load a TOML config file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Apply CLI-flag overrides on top of the file values.
    pub fn apply(&mut self, ov: &Overrides) {
        if let Some(v) = &ov.l {
            self.l = v.clone();
        }
        if let Some(v) = &ov.delta {
            self.delta = v.clone();
        }
        if let Some(v) = ov.n {
            self.n = v;
        }
        if let Some(v) = ov.dt {
            self.dt = Some(v);
        }
        if let Some(v) = ov.t_final {
            self.t_final = v;
        }
        if let Some(v) = &ov.seeds {
            self.seeds = v.clone();
        }
        if let Some(v) = ov.dist_tol {
            self.tolerances.dist = v;
        }
        if let Some(v) = ov.vel_tol {
            self.tolerances.vel = v;
        }
        if let Some(v) = &ov.output_dir {
            self.output_dir = v.clone();
        }
    }

    /// Value checks (no filesystem access): every L positive, N even,
    /// horizon and tolerances positive, dt (when given) positive.
    pub fn validate(&self) -> Result<()> {
        for &l in &self.l {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Domain(format!("L = {l} must be positive")));
            }
        }
        for &d in &self.delta {
            if !d.is_finite() {
                return Err(Error::Domain(format!("delta = {d} must be finite")));
            }
        }
        if self.n < 8 || self.n % 2 != 0 {
            return Err(Error::Domain(format!("N = {} must be even and >= 8", self.n)));
        }
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::Domain(format!("dt = {dt} must be positive")));
            }
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::Domain(format!("T = {} must be positive", self.t_final)));
        }
        if !(self.tolerances.dist > 0.0 && self.tolerances.vel > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Create the output root and verify it is writable with a probe file.
    pub fn ensure_output_dir(&self) -> Result<()> {
        fs::create_dir_all(&self.output_dir)?;
        let probe = self.output_dir.join(".write_probe");
        fs::write(&probe, b"ok")?;
        fs::remove_file(&probe)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_toml_parses() {
        let cfg: ExperimentConfig = toml::from_str(
            r#"
            L = [10.0, 12.0]
            delta = 0.05
            N = 128
            dt = "auto"
            T = 50.0
            seeds = "0..4"
            output_dir = "out"

            [tolerances]
            dist = 1e-5
            vel = 1e-7
            "#,
        )
        .unwrap();
        assert_eq!(cfg.l, vec![10.0, 12.0]);
        assert_eq!(cfg.delta, vec![0.05]);
        assert_eq!(cfg.n, 128);
        assert_eq!(cfg.dt, None);
        assert_eq!(cfg.seeds, vec![0, 1, 2, 3, 4]);
        assert_eq!(cfg.tolerances.dist, 1e-5);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
        cfg.validate().unwrap();
    }

    #[test]
    fn scalar_and_integer_values_coerce() {
        let cfg: ExperimentConfig =
            toml::from_str("L = 10\ndelta = [0, 0.05]\ndt = 0.001\nseeds = [3]").unwrap();
        assert_eq!(cfg.l, vec![10.0]);
        assert_eq!(cfg.delta, vec![0.0, 0.05]);
        assert_eq!(cfg.dt, Some(1e-3));
        assert_eq!(cfg.seeds, vec![3]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<ExperimentConfig>("bogus = 1").is_err());
    }

    #[test]
    fn seed_specs() {
        assert_eq!(parse_seeds("0..4").unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(parse_seeds("7").unwrap(), vec![7]);
        assert_eq!(parse_seeds("1, 5,9").unwrap(), vec![1, 5, 9]);
        assert!(parse_seeds("4..1").is_err());
        assert!(parse_seeds("a..b").is_err());
    }

    #[test]
    fn overrides_take_precedence() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply(&Overrides {
            delta: Some(vec![0.0, 0.025, 0.05]),
            n: Some(64),
            t_final: Some(200.0),
            seeds: Some(parse_seeds("0..4").unwrap()),
            ..Overrides::default()
        });
        assert_eq!(cfg.delta.len(), 3);
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.seeds.len(), 5);
        // untouched fields keep their defaults
        assert_eq!(cfg.l, vec![10.0]);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut cfg = ExperimentConfig::default();
        cfg.n = 63;
        assert!(cfg.validate().is_err());
        cfg = ExperimentConfig::default();
        cfg.l = vec![0.0];
        assert!(cfg.validate().is_err());
        cfg = ExperimentConfig::default();
        cfg.t_final = -1.0;
        assert!(cfg.validate().is_err());
        cfg = ExperimentConfig::default();
        cfg.dt = Some(0.0);
        assert!(cfg.validate().is_err());
        // empty sweep axes are allowed: they produce an empty grid
        cfg = ExperimentConfig::default();
        cfg.delta = vec![];
        cfg.seeds = vec![];
        cfg.validate().unwrap();
    }
}
