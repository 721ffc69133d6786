//! Run settings: a TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use curvecode::rational::parse_rational;
use curvecode::Rational;
use serde::Deserialize;

use crate::CliError;

/// A rational given as `"p/q"`, a decimal string or a TOML integer.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalField {
    Int(i64),
    Text(String),
}

impl RationalField {
    fn resolve(&self, key: &str) -> Result<Rational, CliError> {
        match self {
            RationalField::Int(i) => Ok(Rational::from_integer((*i).into())),
            RationalField::Text(s) => parse_rational(s).map_err(|e| CliError::Validation(format!("{key}: {e}"))),
        }
    }
}

/// Level selection: `"4..12"` (inclusive), `"1,3,5"`, or a TOML array.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LevelsField {
    List(Vec<usize>),
    Text(String),
}

impl LevelsField {
    pub fn resolve(&self) -> Result<Vec<usize>, CliError> {
        match self {
            LevelsField::List(v) => Ok(v.clone()),
            LevelsField::Text(s) => parse_levels(s),
        }
    }
}

pub fn parse_levels(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Validation(format!("cannot read level list {text:?}"));
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let range = text.split_once("..=").or_else(|| text.split_once(".."));
    if let Some((a, b)) = range {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

/// Every key the config file may carry. Flags of the same name win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub system: Option<String>,
    pub depth: Option<usize>,
    pub function: Option<String>,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub levels: Option<LevelsField>,
    pub w: Option<Vec<i64>>,
    pub alpha: Option<RationalField>,
    pub t: Option<u32>,
    pub eps: Option<RationalField>,
    pub mode: Option<String>,
    pub min_level: Option<usize>,
    pub jump: Option<u64>,
    pub level: Option<usize>,
    pub beta: Option<RationalField>,
    pub intercept: Option<RationalField>,
    pub kind: Option<String>,
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `flags` replace those here.
    pub fn overlay(self, flags: Settings) -> Settings {
        Settings {
            system: flags.system.or(self.system),
            depth: flags.depth.or(self.depth),
            function: flags.function.or(self.function),
            out_dir: flags.out_dir.or(self.out_dir),
            jobs: flags.jobs.or(self.jobs),
            seed: flags.seed.or(self.seed),
            levels: flags.levels.or(self.levels),
            w: flags.w.or(self.w),
            alpha: flags.alpha.or(self.alpha),
            t: flags.t.or(self.t),
            eps: flags.eps.or(self.eps),
            mode: flags.mode.or(self.mode),
            min_level: flags.min_level.or(self.min_level),
            jump: flags.jump.or(self.jump),
            level: flags.level.or(self.level),
            beta: flags.beta.or(self.beta),
            intercept: flags.intercept.or(self.intercept),
            kind: flags.kind.or(self.kind),
        }
    }

    pub fn rational(&self, key: &str) -> Result<Option<Rational>, CliError> {
        let field = match key {
            "alpha" => &self.alpha,
            "eps" => &self.eps,
            "beta" => &self.beta,
            "intercept" => &self.intercept,
            _ => unreachable!("not a rational setting: {key}"),
        };
        field.as_ref().map(|f| f.resolve(key)).transpose()
    }

    pub fn require_rational(&self, key: &str) -> Result<Rational, CliError> {
        self.rational(key)?.ok_or_else(|| missing(key))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn jobs(&self) -> Result<usize, CliError> {
        match self.jobs {
            Some(0) => Err(CliError::Validation("--jobs must be at least 1".into())),
            Some(j) => Ok(j),
            None => Ok(1),
        }
    }
}

pub fn missing(key: &str) -> CliError {
    CliError::Validation(format!("missing required setting `{key}`"))
}
