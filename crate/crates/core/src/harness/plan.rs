//! Experiment plans: a domain, a set of `α`, a geometric time grid and estimators.
//!
//! Plan files are `key = value` text:
//!
//! ```text
//! schema = 1
//! domain = cantor
//! alpha = 0.3, 1.5
//! t_min = 1e-4
//! t_max = 1e-1
//! per_decade = 16
//! estimators = shc, rhc
//! n = 200000
//! n_steps = 64
//! richardson_levels = 2
//! seed = 1
//! output = cantor.jsonl
//! ```
//!
//! Optional keys: `depth`, `unit_size` (1024), `points` (`qmc` | `random`),
//! `log_periodic` (`true` requires 16 points per decade), `allow_fractal_skbm`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::drum_file::parse_number;
use crate::geometry::{parse_domain, Domain};
use crate::simulate::{McConfig, PathScheme, PointMode, SeedPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Shc,
    Rhc,
    Skbm,
    Defect,
}

impl Estimator {
    pub const ALL: [Estimator; 4] = [Estimator::Shc, Estimator::Rhc, Estimator::Skbm, Estimator::Defect];

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Shc => "shc",
            Estimator::Rhc => "rhc",
            Estimator::Skbm => "skbm",
            Estimator::Defect => "defect",
        }
    }

    /// Heat contents are fitted through `|D| − value`; the defect is fitted directly.
    pub fn is_heat_content(&self) -> bool {
        !matches!(self, Estimator::Defect)
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown estimator {s:?} (shc, rhc, skbm, defect)")))
    }
}

/// `t_k = t_min · 10^{k / per_decade}` up to `t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub per_decade: u32,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        let decades = (self.t_max / self.t_min).log10();
        let n = (decades * self.per_decade as f64 + 1e-9).floor() as i64;
        (0..=n)
            .map(|k| self.t_min * 10f64.powf(k as f64 / self.per_decade as f64))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub domain: Domain,
    pub alphas: Vec<f64>,
    pub grid: TimeGrid,
    pub estimators: Vec<Estimator>,
    pub mc: McConfig,
    pub output: PathBuf,
    pub log_periodic: bool,
}

/// One `(α, t, estimator)` evaluation of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub alpha: f64,
    pub t: f64,
    pub estimator: Estimator,
    pub seed: u64,
    pub digest: String,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if !(g.t_min > 0.0 && g.t_min < g.t_max) {
            return Err(Error::DomainError(format!("need 0 < t_min < t_max, got {} and {}", g.t_min, g.t_max)));
        }
        if g.per_decade < 4 {
            return Err(Error::DomainError("fitting needs at least 4 points per decade".into()));
        }
        if self.log_periodic && g.per_decade < 16 {
            return Err(Error::DomainError("log-periodic extraction needs at least 16 points per decade".into()));
        }
        if self.alphas.is_empty() || self.estimators.is_empty() {
            return Err(Error::DomainError("plan needs at least one α and one estimator".into()));
        }
        self.mc.validate()
    }

    /// Cells in execution order: `α`, then estimator, then `t`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &alpha in &self.alphas {
            for &estimator in &self.estimators {
                for t in self.grid.points() {
                    let text = self.cell_text(alpha, t, estimator);
                    let hash = Sha256::digest(text.as_bytes());
                    let seed = u64::from_le_bytes(hash[..8].try_into().unwrap());
                    out.push(Cell {
                        alpha,
                        t,
                        estimator,
                        seed,
                        digest: hex::encode(&hash[..16]),
                    });
                }
            }
        }
        out
    }

    /// Canonical description of a cell; its hash seeds the cell and names it
    /// in the record file.
    fn cell_text(&self, alpha: f64, t: f64, estimator: Estimator) -> String {
        let s = &self.mc.scheme;
        format!(
            "cell|{}|alpha={alpha}|t={t:e}|{estimator}|n={}|steps={}|levels={}|depth={:?}|seed={}|unit={}|points={:?}|fractal_skbm={}",
            self.domain.id(),
            self.mc.n,
            s.n_steps,
            s.richardson_levels,
            s.membership_depth,
            self.mc.seeds.master_seed,
            self.mc.unit_size,
            self.mc.points,
            self.mc.allow_fractal_skbm,
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut plan = ExperimentPlan::parse(&text)?;
        if plan.output.is_relative() {
            if let Some(dir) = path.parent() {
                plan.output = dir.join(&plan.output);
            }
        }
        Ok(plan)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = Vec::new();
        let mut saw_schema = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !saw_schema {
                if k != "schema" || v != "1" {
                    return Err(Error::Parse("plan must start with `schema = 1`".into()));
                }
                saw_schema = true;
                continue;
            }
            kv.push((k.to_string(), v.to_string()));
        }
        if !saw_schema {
            return Err(Error::Parse("missing `schema = 1`".into()));
        }
        let get = |key: &str| kv.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let need = |key: &str| get(key).ok_or_else(|| Error::Parse(format!("plan is missing `{key}`")));
        const KNOWN: [&str; 17] = [
            "domain", "alpha", "t_min", "t_max", "per_decade", "estimators", "n", "n_steps",
            "richardson_levels", "depth", "seed", "unit_size", "points", "output", "log_periodic",
            "allow_fractal_skbm", "name",
        ];
        if let Some((k, _)) = kv.iter().find(|(k, _)| !KNOWN.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown plan key {k:?}")));
        }
        let int = |key: &str, v: &str| -> Result<u64> {
            let x = parse_number(v)?;
            if x < 0.0 || x.fract() != 0.0 || x > u64::MAX as f64 {
                return Err(Error::Parse(format!("`{key}` must be a non-negative integer, got {v}")));
            }
            Ok(x as u64)
        };
        let flag = |key: &str| -> Result<bool> {
            match get(key) {
                None | Some("false") => Ok(false),
                Some("true") => Ok(true),
                Some(v) => Err(Error::Parse(format!("`{key}` must be true or false, got {v}"))),
            }
        };
        let alphas = need("alpha")?
            .split(',')
            .map(parse_number)
            .collect::<Result<Vec<_>>>()?;
        let estimators = need("estimators")?
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Estimator>>>()?;
        let scheme = PathScheme {
            n_steps: get("n_steps").map(|v| int("n_steps", v)).transpose()?.unwrap_or(64) as u32,
            membership_depth: get("depth").map(|v| int("depth", v).map(|d| d as u32)).transpose()?,
            richardson_levels: get("richardson_levels").map(|v| int("richardson_levels", v)).transpose()?.unwrap_or(2) as u32,
        };
        let points = match get("points").unwrap_or("qmc") {
            "qmc" => PointMode::Qmc,
            "random" => PointMode::Random,
            v => return Err(Error::Parse(format!("`points` must be qmc or random, got {v}"))),
        };
        let mc = McConfig {
            n: int("n", need("n")?)?,
            scheme,
            seeds: SeedPlan::new(get("seed").map(|v| int("seed", v)).transpose()?.unwrap_or(1)),
            unit_size: get("unit_size").map(|v| int("unit_size", v)).transpose()?.unwrap_or(1024),
            points,
            allow_fractal_skbm: flag("allow_fractal_skbm")?,
        };
        let plan = ExperimentPlan {
            domain: parse_domain(need("domain")?)?,
            alphas,
            grid: TimeGrid {
                t_min: parse_number(need("t_min")?)?,
                t_max: parse_number(need("t_max")?)?,
                per_decade: int("per_decade", get("per_decade").unwrap_or("16"))? as u32,
            },
            estimators,
            mc,
            output: PathBuf::from(get("output").unwrap_or("records.jsonl")),
            log_periodic: flag("log_periodic")?,
        };
        plan.validate()?;
        Ok(plan)
    }
}
