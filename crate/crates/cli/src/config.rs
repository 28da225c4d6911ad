//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; blank lines and lines starting with `#` are
//! ignored. Every key has a default, so an empty file is a valid config.
//! Angles are radians and accept `pi`, `pi/k` and `x*pi` shorthands.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::{Path, PathBuf};

use phasemix_core::closed_form::CouplingPair;
use phasemix_core::fock::ThermalFieldSpec;
use phasemix_core::phase::exact_node_count;
use phasemix_core::reduction::AtomicMixtureSpec;

use crate::error::{CliError, Result};

pub const KEYS: [&str; 13] = [
    "nbar",
    "gamma",
    "lambda1",
    "lambda2",
    "theta",
    "vartheta",
    "t_min",
    "t_max",
    "steps",
    "tail_tolerance",
    "quadrature_nodes",
    "mode",
    "output_path",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Couplings {
    /// `lambda1 = 1 + gamma`, `lambda2 = 1 - gamma`.
    Gamma(f64),
    Explicit {
        lambda1: f64,
        lambda2: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureNodes {
    /// `2N + 3`, the smallest exact rule.
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Closed-form reduced density per time point.
    Reduced,
    /// Phase-quadrature joint density, traced per time point; the joint
    /// density at `t_max` is dumped alongside.
    Joint,
    /// Cross-path discrepancies and the amplitude unitarity sweep.
    Validate,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Reduced => "reduced",
            Mode::Joint => "joint",
            Mode::Validate => "validate",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nbar: f64,
    pub couplings: Couplings,
    pub theta: f64,
    pub vartheta: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
    pub tail_tolerance: f64,
    pub quadrature_nodes: QuadratureNodes,
    pub mode: Mode,
    pub output_path: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            nbar: 1.0,
            couplings: Couplings::Gamma(0.0),
            theta: FRAC_PI_2,
            vartheta: 0.0,
            t_min: 0.0,
            t_max: 25.0,
            steps: 1001,
            tail_tolerance: 1e-10,
            quadrature_nodes: QuadratureNodes::Auto,
            mode: Mode::Reduced,
            output_path: PathBuf::from("phasemix.csv"),
        }
    }
}

/// Parses a real number, allowing `pi` multiples.
pub fn parse_real(field: &str, raw: &str) -> Result<f64> {
    let s = raw.trim();
    let bad = || CliError::config(field, format!("expected a real number, got `{raw}`"));
    let value = if let Some(rest) = s.strip_prefix("pi") {
        let rest = rest.trim();
        if rest.is_empty() {
            PI
        } else if let Some(den) = rest.strip_prefix('/') {
            PI / den.trim().parse::<f64>().map_err(|_| bad())?
        } else {
            return Err(bad());
        }
    } else if let Some(coef) = s.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        coef.parse::<f64>().map_err(|_| bad())? * PI
    } else {
        s.parse::<f64>().map_err(|_| bad())?
    };
    if !value.is_finite() {
        return Err(CliError::config(
            field,
            format!("must be finite, got `{raw}`"),
        ));
    }
    Ok(value)
}

fn parse_count(field: &str, raw: &str) -> Result<usize> {
    raw.trim().parse::<usize>().map_err(|_| {
        CliError::config(
            field,
            format!("expected a non-negative integer, got `{raw}`"),
        )
    })
}

/// Splits `key = value` text into ordered pairs.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::config(
                format!("line {}", lineno + 1),
                format!("expected `key = value`, got `{line}`"),
            )
        })?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

/// Parses `key=value` command-line overrides.
pub fn parse_override(raw: &str) -> Result<(String, String)> {
    let (k, v) = raw
        .split_once('=')
        .ok_or_else(|| CliError::config(raw, "override must look like `key=value`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

impl RunConfig {
    /// Applies `pairs` (later entries win) on top of the defaults and
    /// validates the result.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> Result<Self> {
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for (k, v) in pairs {
            let k = k.as_ref();
            if !KEYS.contains(&k) {
                return Err(CliError::config(
                    k,
                    format!("unknown key; expected one of {}", KEYS.join(", ")),
                ));
            }
            map.insert(k, v.as_ref());
        }
        let mut cfg = RunConfig::default();
        let real = |k: &str| map.get(k).map(|v| parse_real(k, v)).transpose();

        if let Some(v) = real("nbar")? {
            cfg.nbar = v;
        }
        let gamma = real("gamma")?;
        let (l1, l2) = (real("lambda1")?, real("lambda2")?);
        cfg.couplings = match (gamma, l1, l2) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(CliError::config(
                    "gamma",
                    "exactly one of `gamma` or (`lambda1`, `lambda2`) may be given",
                ))
            }
            (Some(g), None, None) => Couplings::Gamma(g),
            (None, Some(lambda1), Some(lambda2)) => Couplings::Explicit { lambda1, lambda2 },
            (None, Some(_), None) => {
                return Err(CliError::config(
                    "lambda2",
                    "required together with `lambda1`",
                ))
            }
            (None, None, Some(_)) => {
                return Err(CliError::config(
                    "lambda1",
                    "required together with `lambda2`",
                ))
            }
            (None, None, None) => cfg.couplings,
        };
        if let Some(v) = real("theta")? {
            cfg.theta = v;
        }
        if let Some(v) = real("vartheta")? {
            cfg.vartheta = v;
        }
        if let Some(v) = real("t_min")? {
            cfg.t_min = v;
        }
        if let Some(v) = real("t_max")? {
            cfg.t_max = v;
        }
        if let Some(v) = map.get("steps") {
            cfg.steps = parse_count("steps", v)?;
        }
        if let Some(v) = real("tail_tolerance")? {
            cfg.tail_tolerance = v;
        }
        if let Some(v) = map.get("quadrature_nodes") {
            cfg.quadrature_nodes = if v.eq_ignore_ascii_case("auto") {
                QuadratureNodes::Auto
            } else {
                QuadratureNodes::Fixed(parse_count("quadrature_nodes", v)?)
            };
        }
        if let Some(v) = map.get("mode") {
            cfg.mode = match v.to_ascii_lowercase().as_str() {
                "reduced" => Mode::Reduced,
                "joint" => Mode::Joint,
                "validate" => Mode::Validate,
                other => {
                    return Err(CliError::config(
                        "mode",
                        format!("expected reduced, joint or validate, got `{other}`"),
                    ))
                }
            };
        }
        if let Some(v) = map.get("output_path") {
            cfg.output_path = PathBuf::from(v);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    /// Reads a config file and applies `overrides` on top.
    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })?;
        let mut pairs = parse_pairs(&text)?;
        pairs.extend(overrides.iter().cloned());
        Self::from_pairs(&pairs)
    }

    /// Recovers a config from the `# key = value` echo in an output preamble.
    pub fn from_echo(text: &str) -> Result<Self> {
        let pairs: Vec<(String, String)> = text
            .lines()
            .filter_map(|l| l.strip_prefix("# "))
            .filter_map(|l| l.split_once(" = "))
            .filter(|(k, _)| KEYS.contains(&k.trim()))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect();
        Self::from_pairs(&pairs)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nbar.is_nan() || self.nbar < 0.0 {
            return Err(CliError::config(
                "nbar",
                format!("must be >= 0, got {}", self.nbar),
            ));
        }
        match self.couplings {
            Couplings::Gamma(g) if !(0.0..=1.0).contains(&g) => {
                return Err(CliError::config(
                    "gamma",
                    format!("must lie in [0, 1], got {g}"),
                ));
            }
            Couplings::Explicit { lambda1, .. } if lambda1.is_nan() || lambda1 <= 0.0 => {
                return Err(CliError::config(
                    "lambda1",
                    format!("must be > 0, got {lambda1}"),
                ));
            }
            Couplings::Explicit { lambda2, .. } if lambda2.is_nan() || lambda2 < 0.0 => {
                return Err(CliError::config(
                    "lambda2",
                    format!("must be >= 0, got {lambda2}"),
                ));
            }
            _ => {}
        }
        if self.t_min > self.t_max {
            return Err(CliError::config(
                "t_min",
                format!("must not exceed t_max ({} > {})", self.t_min, self.t_max),
            ));
        }
        if self.steps == 0 {
            return Err(CliError::config("steps", "must be >= 1"));
        }
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance <= 1.0) {
            return Err(CliError::config(
                "tail_tolerance",
                format!("must lie in (0, 1], got {}", self.tail_tolerance),
            ));
        }
        if self.quadrature_nodes == QuadratureNodes::Fixed(0) {
            return Err(CliError::config(
                "quadrature_nodes",
                "must be >= 1 or `auto`",
            ));
        }
        if self.output_path.as_os_str().is_empty() {
            return Err(CliError::config("output_path", "must not be empty"));
        }
        Ok(())
    }

    pub fn coupling_pair(&self) -> Result<CouplingPair> {
        Ok(match self.couplings {
            Couplings::Gamma(g) => CouplingPair::from_gamma(g)?,
            Couplings::Explicit { lambda1, lambda2 } => CouplingPair::new(lambda1, lambda2)?,
        })
    }

    pub fn field(&self) -> Result<ThermalFieldSpec> {
        Ok(ThermalFieldSpec::new(self.nbar, self.tail_tolerance)?)
    }

    pub fn mixture(&self) -> AtomicMixtureSpec {
        AtomicMixtureSpec::new(self.theta, self.vartheta)
    }

    pub fn node_count(&self, truncation: usize) -> usize {
        match self.quadrature_nodes {
            QuadratureNodes::Auto => exact_node_count(truncation),
            QuadratureNodes::Fixed(m) => m,
        }
    }

    /// `steps` equally spaced times from `t_min` to `t_max` inclusive.
    pub fn times(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.t_min];
        }
        let span = self.t_max - self.t_min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| self.t_min + span * (k as f64 / last))
            .collect()
    }

    /// `(key, value)` pairs that [`RunConfig::from_pairs`] maps back to `self`.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![("nbar", self.nbar.to_string())];
        match self.couplings {
            Couplings::Gamma(g) => out.push(("gamma", g.to_string())),
            Couplings::Explicit { lambda1, lambda2 } => {
                out.push(("lambda1", lambda1.to_string()));
                out.push(("lambda2", lambda2.to_string()));
            }
        }
        out.extend([
            ("theta", self.theta.to_string()),
            ("vartheta", self.vartheta.to_string()),
            ("t_min", self.t_min.to_string()),
            ("t_max", self.t_max.to_string()),
            ("steps", self.steps.to_string()),
            ("tail_tolerance", self.tail_tolerance.to_string()),
            (
                "quadrature_nodes",
                match self.quadrature_nodes {
                    QuadratureNodes::Auto => "auto".to_string(),
                    QuadratureNodes::Fixed(m) => m.to_string(),
                },
            ),
            ("mode", self.mode.to_string()),
            ("output_path", self.output_path.display().to_string()),
        ]);
        out
    }
}
