//! Run configuration and its flat `key = value # unit` file format.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use viralcm::diffusion::{DEFAULT_FLOOR, DEFAULT_GAMMA};
use viralcm::estimators::DEFAULT_Z;
use viralcm::population::{DegreeLaw, JointDegreeLaw, TransmissionModel};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: &'static str, message: String },
}

fn field_err(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DegreeKind {
    Poisson,
    Powerlaw,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TransKind {
    Bernoulli,
    Nodeperc,
    Coupon,
}

macro_rules! keyword_enum {
    ($ty:ty { $($variant:ident => $text:literal),* $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$variant => $text),* })
            }
        }

        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok(Self::$variant),)*
                    other => Err(format!("unknown value `{other}`")),
                }
            }
        }
    };
}

keyword_enum!(DegreeKind { Poisson => "poisson", Powerlaw => "powerlaw", Empirical => "empirical" });
keyword_enum!(TransKind { Bernoulli => "bernoulli", Nodeperc => "nodeperc", Coupon => "coupon" });

/// Inclusive range `start:end:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Grid {
    /// Points `start + i·step` up to `end`, rounded to 12 decimals.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12).collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.step)
    }
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("expected start:end:step, got `{s}`"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let grid = Grid { start: num(a)?, end: num(b)?, step: num(c)? };
        if !(grid.step > 0.0) || !(grid.end >= grid.start) || !grid.start.is_finite() || !grid.end.is_finite() {
            return Err(format!("grid `{s}` needs start <= end and step > 0"));
        }
        Ok(grid)
    }
}

/// Everything a run depends on. Written into every output for provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub degree: DegreeKind,
    pub lambda: f64,
    pub beta: f64,
    /// Raw degree list for the empirical law.
    pub degree_file: Option<PathBuf>,
    pub trans: TransKind,
    pub p: f64,
    #[serde(rename = "K")]
    pub k: u32,
    pub n: usize,
    pub seed: u64,
    pub grid: Option<Grid>,
    pub gamma: f64,
    pub floor: f64,
    pub z: f64,
    pub cost_per_pioneer: f64,
    pub value_per_influenced: f64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            degree: DegreeKind::Poisson,
            lambda: 2.0,
            beta: 2.45,
            degree_file: None,
            trans: TransKind::Bernoulli,
            p: 0.8,
            k: 2,
            n: 1000,
            seed: 1,
            grid: None,
            gamma: DEFAULT_GAMMA,
            floor: DEFAULT_FLOOR,
            z: DEFAULT_Z,
            cost_per_pioneer: 1.0,
            value_per_influenced: 0.0,
            out: PathBuf::from("out"),
        }
    }
}

/// `(key, unit)` in file order.
const KEYS: &[(&str, &str)] = &[
    ("degree", "law"),
    ("lambda", "mean degree"),
    ("beta", "tail exponent"),
    ("degree_file", "path"),
    ("trans", "model"),
    ("p", "probability"),
    ("K", "messages per user"),
    ("n", "nodes"),
    ("seed", "rng seed"),
    ("grid", "start:end:step"),
    ("gamma", "fraction of max reach"),
    ("floor", "fraction of n"),
    ("z", "standard errors"),
    ("cost_per_pioneer", "cost per pioneer"),
    ("value_per_influenced", "value per influenced node"),
    ("out", "directory"),
];

fn parse<T: FromStr>(field: &'static str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| field_err(field, e.to_string()))
}

impl RunConfig {
    fn set(&mut self, key: &'static str, value: &str) -> Result<(), ConfigError> {
        match key {
            "degree" => self.degree = parse(key, value)?,
            "lambda" => self.lambda = parse(key, value)?,
            "beta" => self.beta = parse(key, value)?,
            "degree_file" => self.degree_file = (!value.is_empty()).then(|| PathBuf::from(value)),
            "trans" => self.trans = parse(key, value)?,
            "p" => self.p = parse(key, value)?,
            "K" => self.k = parse(key, value)?,
            "n" => self.n = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "grid" => self.grid = if value.is_empty() { None } else { Some(parse(key, value)?) },
            "gamma" => self.gamma = parse(key, value)?,
            "floor" => self.floor = parse(key, value)?,
            "z" => self.z = parse(key, value)?,
            "cost_per_pioneer" => self.cost_per_pioneer = parse(key, value)?,
            "value_per_influenced" => self.value_per_influenced = parse(key, value)?,
            "out" => self.out = PathBuf::from(value),
            _ => unreachable!("key table and setter disagree on `{key}`"),
        }
        Ok(())
    }

    fn get(&self, key: &str) -> String {
        match key {
            "degree" => self.degree.to_string(),
            "lambda" => self.lambda.to_string(),
            "beta" => self.beta.to_string(),
            "degree_file" => self.degree_file.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
            "trans" => self.trans.to_string(),
            "p" => self.p.to_string(),
            "K" => self.k.to_string(),
            "n" => self.n.to_string(),
            "seed" => self.seed.to_string(),
            "grid" => self.grid.map(|g| g.to_string()).unwrap_or_default(),
            "gamma" => self.gamma.to_string(),
            "floor" => self.floor.to_string(),
            "z" => self.z.to_string(),
            "cost_per_pioneer" => self.cost_per_pioneer.to_string(),
            "value_per_influenced" => self.value_per_influenced.to_string(),
            "out" => self.out.display().to_string(),
            _ => unreachable!("unknown key `{key}`"),
        }
    }

    /// Applies `key = value  # unit` lines on top of `self`. Blank lines and
    /// lines starting with `#` are skipped; a unit comment, when present,
    /// must match the key's unit.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (body, unit) = match trimmed.split_once('#') {
                Some((b, u)) => (b.trim(), Some(u.trim())),
                None => (trimmed, None),
            };
            let Some((key, value)) = body.split_once('=') else {
                return Err(ConfigError::Syntax { line, message: format!("expected key = value, got `{trimmed}`") });
            };
            let (key, value) = (key.trim(), value.trim());
            let Some(&(key, expected)) = KEYS.iter().find(|(k, _)| *k == key) else {
                return Err(ConfigError::Syntax { line, message: format!("unknown key `{key}`") });
            };
            if let Some(unit) = unit {
                if unit != expected {
                    return Err(ConfigError::Syntax {
                        line,
                        message: format!("{key} is measured in `{expected}`, not `{unit}`"),
                    });
                }
            }
            self.set(key, value).map_err(|e| ConfigError::Syntax { line, message: e.to_string() })?;
        }
        Ok(())
    }

    pub fn from_file_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_file(text)?;
        Ok(cfg)
    }

    /// Every key with its unit, one per line.
    pub fn to_file_text(&self) -> String {
        KEYS.iter().map(|(k, unit)| format!("{k} = {}  # {unit}\n", self.get(k))).collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.degree {
            DegreeKind::Poisson if !(self.lambda > 0.0 && self.lambda.is_finite()) => {
                return Err(field_err("lambda", format!("must be positive, got {}", self.lambda)))
            }
            DegreeKind::Powerlaw if !(self.beta > 2.0 && self.beta.is_finite()) => {
                return Err(field_err("beta", format!("must exceed 2, got {}", self.beta)))
            }
            DegreeKind::Empirical if self.degree_file.is_none() => {
                return Err(field_err("degree_file", "required by the empirical degree law"))
            }
            _ => {}
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(field_err("p", format!("must lie in [0, 1], got {}", self.p)));
        }
        if self.n == 0 || u32::try_from(self.n).is_err() {
            return Err(field_err("n", format!("must lie in 1..=2^32-1, got {}", self.n)));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(field_err("gamma", format!("must lie in (0, 1], got {}", self.gamma)));
        }
        if !(0.0..1.0).contains(&self.floor) {
            return Err(field_err("floor", format!("must lie in [0, 1), got {}", self.floor)));
        }
        if !(self.z >= 0.0 && self.z.is_finite()) {
            return Err(field_err("z", format!("must be a non-negative number, got {}", self.z)));
        }
        if let Some(g) = self.grid {
            match self.trans {
                TransKind::Coupon if g.start < 0.0 || g.start.fract() != 0.0 || g.step.fract() != 0.0 => {
                    return Err(field_err("grid", format!("coupon sweeps need whole K values, got {g}")))
                }
                TransKind::Bernoulli | TransKind::Nodeperc if g.start < 0.0 || g.end > 1.0 => {
                    return Err(field_err("grid", format!("p sweeps must stay in [0, 1], got {g}")))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn degree_law(&self) -> anyhow::Result<DegreeLaw> {
        Ok(match self.degree {
            DegreeKind::Poisson => DegreeLaw::poisson(self.lambda)?,
            DegreeKind::Powerlaw => DegreeLaw::power_law(self.beta)?,
            DegreeKind::Empirical => {
                let path = self.degree_file.as_ref().ok_or_else(|| field_err("degree_file", "missing"))?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| anyhow::anyhow!("degree_file {}: {e}", path.display()))?;
                DegreeLaw::from_degrees(read_degree_list(&text)?)?
            }
        })
    }

    pub fn transmission(&self) -> TransmissionModel {
        self.transmission_at(None)
    }

    /// Transmission model with its parameter replaced by a grid value.
    pub fn transmission_at(&self, param: Option<f64>) -> TransmissionModel {
        match self.trans {
            TransKind::Bernoulli => TransmissionModel::Bernoulli { p: param.unwrap_or(self.p) },
            TransKind::Nodeperc => TransmissionModel::NodePercolation { p: param.unwrap_or(self.p) },
            TransKind::Coupon => TransmissionModel::CouponCollector { k: param.map(|v| v as u32).unwrap_or(self.k) },
        }
    }

    pub fn joint_law(&self) -> anyhow::Result<JointDegreeLaw> {
        Ok(JointDegreeLaw::new(self.degree_law()?, self.transmission())?)
    }

    pub fn grid_or_default(&self) -> Grid {
        self.grid.unwrap_or(match self.trans {
            TransKind::Coupon => Grid { start: 0.0, end: 10.0, step: 1.0 },
            _ => Grid { start: 0.0, end: 1.0, step: 0.02 },
        })
    }
}

/// Whitespace- or comma-separated non-negative integers; `#` starts a comment.
pub fn read_degree_list(text: &str) -> anyhow::Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            out.push(tok.parse::<u64>().map_err(|e| anyhow::anyhow!("degree list line {}: `{tok}`: {e}", i + 1))?);
        }
    }
    Ok(out)
}
