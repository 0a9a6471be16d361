//! Flat-key JSON experiment configuration and its per-command plans.
//!
//! Every key is optional in the file; each command fills its own defaults,
//! rejects keys it does not use, and validates all ranges before any
//! sampling starts. The resolved configuration is what reports echo.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use greyvar_core::inference::{Candidate, GammaRegion, DEFAULT_MIN_LEVEL, DEFAULT_THRESHOLD};
use greyvar_core::sampling::FbmMethod;
use greyvar_core::validation::{CfCheckSpec, Probe, MAX_MIXING_LAG};
use greyvar_core::{GreyParams, GridSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Sample,
    Variation,
    Estimate,
    Discriminate,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Sample => "sample",
            Self::Variation => "variation",
            Self::Estimate => "estimate",
            Self::Discriminate => "discriminate",
            Self::Validate => "validate",
        }
    }

    /// Keys this command reads besides `command`, `master_seed`, `format`
    /// and `out`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Self::Sample => &["alpha", "beta", "method", "grid", "level", "n", "n_paths"],
            Self::Variation => &[
                "alpha",
                "beta",
                "method",
                "grid",
                "level",
                "n",
                "n_paths",
                "p",
                "level_min",
                "level_max",
            ],
            Self::Estimate => &[
                "alpha",
                "beta",
                "method",
                "level",
                "n_paths",
                "p_alpha",
                "level_min",
                "level_max",
                "gamma_region",
            ],
            Self::Discriminate => &["candidates", "method", "level", "n_paths", "threshold"],
            Self::Validate => &[
                "alpha",
                "beta",
                "n_paths",
                "checks",
                "thetas",
                "cf_s",
                "cf_t",
                "cf_level",
                "moment_t",
                "orders",
                "lags",
                "probe",
                "probe_clamp",
                "sampler_draws",
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Cholesky,
    Circulant,
}

impl From<Method> for FbmMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => FbmMethod::Auto,
            Method::Cholesky => FbmMethod::Cholesky,
            Method::Circulant => FbmMethod::Circulant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    #[default]
    Dyadic,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    #[default]
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    #[default]
    Tanh,
    Clamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Special,
    Samplers,
    Cf,
    Moments,
    Mixing,
}

pub const ALL_CHECKS: [Check; 5] = [
    Check::Special,
    Check::Samplers,
    Check::Cf,
    Check::Moments,
    Check::Mixing,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Named {
    Critical,
}

/// A variation exponent: a number, or `"critical"` for `2/α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Value(f64),
    Named(Named),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_paths: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Exponent>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level_min: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_region: Option<Region>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thetas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cf_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cf_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cf_level: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lags: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_clamp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler_draws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn field(name: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::usage(format!("config field `{name}`: {msg}"))
}

fn required<T: Copy>(name: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| field(name, "is required"))
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(field(name, format!("must be positive and finite, got {v}")))
    }
}

fn params(alpha: Option<f64>, beta: Option<f64>) -> Result<GreyParams> {
    let (a, b) = (required("alpha", alpha)?, required("beta", beta)?);
    GreyParams::new(a, b).map_err(|e| CliError::usage(format!("config: {e}")))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Command-line flags take precedence over file values.
    pub fn apply_overrides(&mut self, seed: Option<u64>, out: Option<PathBuf>, format: Option<Format>) {
        if seed.is_some() {
            self.master_seed = seed;
        }
        if out.is_some() {
            self.out = out;
        }
        if format.is_some() {
            self.format = format;
        }
    }

    fn check_keys(&self, cmd: Command) -> Result<()> {
        if let Some(c) = self.command {
            if c != cmd {
                return Err(field(
                    "command",
                    format!("config is for `{}`, not `{}`", c.name(), cmd.name()),
                ));
            }
        }
        let value = serde_json::to_value(self).expect("config serializes");
        let allowed = cmd.keys();
        for key in value.as_object().expect("struct serializes to an object").keys() {
            let common = matches!(key.as_str(), "command" | "master_seed" | "format" | "out");
            if !common && !allowed.contains(&key.as_str()) {
                return Err(field(key, format!("does not apply to `{}`", cmd.name())));
            }
        }
        Ok(())
    }

    /// Fills defaults for `cmd`, validates every field and returns the
    /// filled configuration with its plan.
    pub fn resolve(&self, cmd: Command) -> Result<(ExperimentConfig, Plan)> {
        self.check_keys(cmd)?;
        let mut c = self.clone();
        c.command = Some(cmd);
        c.format.get_or_insert(Format::Json);
        let master_seed = required("master_seed", c.master_seed)?;
        let plan = match cmd {
            Command::Sample => {
                c.method.get_or_insert_default();
                c.grid.get_or_insert_default();
                Plan::Sample(SamplePlan {
                    params: params(c.alpha, c.beta)?,
                    grid: grid(&c)?,
                    method: c.method.unwrap().into(),
                    n_paths: n_paths(&c)?,
                    master_seed,
                })
            }
            Command::Variation => {
                c.method.get_or_insert_default();
                c.grid.get_or_insert_default();
                let params = params(c.alpha, c.beta)?;
                let grid = grid(&c)?;
                c.p.get_or_insert_with(|| vec![Exponent::Named(Named::Critical)]);
                let levels = match grid {
                    GridSpec::Dyadic { level } => {
                        let lo = *c.level_min.get_or_insert(1);
                        let hi = *c.level_max.get_or_insert(level);
                        Some(level_range(lo, hi, level, 1)?)
                    }
                    GridSpec::Uniform { .. } => {
                        for (k, v) in [("level_min", c.level_min), ("level_max", c.level_max)] {
                            if v.is_some() {
                                return Err(field(k, "applies to dyadic grids only"));
                            }
                        }
                        None
                    }
                };
                Plan::Variation(VariationPlan {
                    params,
                    grid,
                    method: c.method.unwrap().into(),
                    n_paths: n_paths(&c)?,
                    master_seed,
                    exponents: exponents(c.p.as_deref().unwrap(), params)?,
                    levels,
                })
            }
            Command::Estimate => {
                c.method.get_or_insert_default();
                let params = params(c.alpha, c.beta)?;
                let level = required("level", c.level)?;
                GridSpec::dyadic(level).validate().map_err(|e| field("level", e))?;
                let p_alpha = positive("p_alpha", *c.p_alpha.get_or_insert(1.0))?;
                let lo = *c
                    .level_min
                    .get_or_insert(DEFAULT_MIN_LEVEL.min(level.saturating_sub(3)));
                let hi = *c.level_max.get_or_insert(level);
                let levels = level_range(lo, hi, level, 4)?;
                let region = match *c.gamma_region.get_or_insert_default() {
                    Region::Low => GammaRegion::Low,
                    Region::High => GammaRegion::High,
                };
                Plan::Estimate(EstimatePlan {
                    params,
                    level,
                    method: c.method.unwrap().into(),
                    n_paths: n_paths(&c)?,
                    master_seed,
                    p_alpha,
                    levels,
                    region,
                })
            }
            Command::Discriminate => {
                c.method.get_or_insert_default();
                let list = c.candidates.clone().ok_or_else(|| field("candidates", "is required"))?;
                if list.len() < 2 {
                    return Err(field("candidates", "needs at least two entries"));
                }
                let mut candidates = Vec::with_capacity(list.len());
                for (i, [a, b]) in list.iter().copied().enumerate() {
                    let p = GreyParams::new(a, b).map_err(|e| field("candidates", format!("entry {i}: {e}")))?;
                    if candidates.iter().any(|c: &Candidate| c.params == p) {
                        return Err(field("candidates", format!("entry {i} repeats an earlier one")));
                    }
                    candidates.push(Candidate::new(p));
                }
                let level = required("level", c.level)?;
                GridSpec::dyadic(level).validate().map_err(|e| field("level", e))?;
                if level < DEFAULT_MIN_LEVEL {
                    return Err(field("level", format!("must be at least {DEFAULT_MIN_LEVEL}")));
                }
                Plan::Discriminate(DiscriminatePlan {
                    candidates,
                    level,
                    method: c.method.unwrap().into(),
                    n_paths: n_paths(&c)?,
                    master_seed,
                    threshold: positive("threshold", *c.threshold.get_or_insert(DEFAULT_THRESHOLD))?,
                })
            }
            Command::Validate => {
                let params = params(c.alpha, c.beta)?;
                let checks = c.checks.get_or_insert_with(|| ALL_CHECKS.to_vec()).clone();
                if checks.is_empty() {
                    return Err(field("checks", "must name at least one check"));
                }
                let n_paths = n_paths(&c)?;
                let cf = CfCheckSpec {
                    thetas: c.thetas.get_or_insert_with(|| vec![0.5, 1.0, 2.0]).clone(),
                    s: *c.cf_s.get_or_insert(0.5),
                    t: *c.cf_t.get_or_insert(1.0),
                    n_paths,
                    level: *c.cf_level.get_or_insert(1),
                };
                if checks.contains(&Check::Cf) {
                    cf.validate().map_err(|e| CliError::usage(format!("config: {e}")))?;
                }
                let moment_t = *c.moment_t.get_or_insert(1.0);
                if !(moment_t > 0.0 && moment_t <= 1.0) {
                    return Err(field("moment_t", format!("must lie in (0, 1], got {moment_t}")));
                }
                let orders = c.orders.get_or_insert_with(|| vec![2, 4]).clone();
                if orders.is_empty() || orders.iter().any(|&k| k == 0 || k > 4) {
                    return Err(field("orders", "must be a nonempty list of orders in 1..=4"));
                }
                let lags = c.lags.get_or_insert_with(|| vec![1, 2, 4, 8, 16, 32, 64]).clone();
                if lags.is_empty() || lags.iter().any(|&l| l == 0 || l > MAX_MIXING_LAG) {
                    return Err(field(
                        "lags",
                        format!("must be a nonempty list of lags in 1..={MAX_MIXING_LAG}"),
                    ));
                }
                let probe = match *c.probe.get_or_insert_default() {
                    ProbeKind::Tanh => {
                        if c.probe_clamp.is_some() {
                            return Err(field("probe_clamp", "applies to the clamp probe only"));
                        }
                        Probe::Tanh
                    }
                    ProbeKind::Clamp => Probe::Clamp(positive("probe_clamp", required("probe_clamp", c.probe_clamp)?)?),
                };
                let sampler_draws = *c.sampler_draws.get_or_insert(1_000_000);
                if sampler_draws < 2 {
                    return Err(field("sampler_draws", "must be at least 2"));
                }
                Plan::Validate(ValidatePlan {
                    params,
                    master_seed,
                    checks,
                    n_paths,
                    cf,
                    moment_t,
                    orders,
                    lags,
                    probe,
                    sampler_draws,
                })
            }
        };
        Ok((c, plan))
    }
}

fn n_paths(c: &ExperimentConfig) -> Result<usize> {
    match required("n_paths", c.n_paths)? {
        0 => Err(field("n_paths", "must be at least 1")),
        n => Ok(n),
    }
}

fn grid(c: &ExperimentConfig) -> Result<GridSpec> {
    let g = match c.grid.unwrap_or_default() {
        GridKind::Dyadic => {
            if c.n.is_some() {
                return Err(field("n", "applies to uniform grids only"));
            }
            GridSpec::dyadic(required("level", c.level)?)
        }
        GridKind::Uniform => {
            if c.level.is_some() {
                return Err(field("level", "applies to dyadic grids only"));
            }
            GridSpec::uniform(required("n", c.n)?)
        }
    };
    g.validate().map_err(|e| CliError::usage(format!("config: {e}")))?;
    Ok(g)
}

fn level_range(lo: u32, hi: u32, top: u32, min_len: u32) -> Result<RangeInclusive<u32>> {
    if lo < 1 {
        return Err(field("level_min", "must be at least 1"));
    }
    if hi > top {
        return Err(field("level_max", format!("exceeds the path level {top}")));
    }
    if hi + 1 < lo + min_len {
        return Err(field(
            "level_max",
            format!("range {lo}..={hi} needs at least {min_len} levels"),
        ));
    }
    Ok(lo..=hi)
}

fn exponents(list: &[Exponent], params: GreyParams) -> Result<Vec<f64>> {
    if list.is_empty() {
        return Err(field("p", "must list at least one exponent"));
    }
    list.iter()
        .map(|e| match *e {
            Exponent::Value(p) => positive("p", p),
            Exponent::Named(Named::Critical) => Ok(params.critical_exponent()),
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SamplePlan {
    pub params: GreyParams,
    pub grid: GridSpec,
    pub method: FbmMethod,
    pub n_paths: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone)]
pub struct VariationPlan {
    pub params: GreyParams,
    pub grid: GridSpec,
    pub method: FbmMethod,
    pub n_paths: usize,
    pub master_seed: u64,
    pub exponents: Vec<f64>,
    /// `None` on uniform grids.
    pub levels: Option<RangeInclusive<u32>>,
}

#[derive(Debug, Clone)]
pub struct EstimatePlan {
    pub params: GreyParams,
    pub level: u32,
    pub method: FbmMethod,
    pub n_paths: usize,
    pub master_seed: u64,
    pub p_alpha: f64,
    pub levels: RangeInclusive<u32>,
    pub region: GammaRegion,
}

#[derive(Debug, Clone)]
pub struct DiscriminatePlan {
    pub candidates: Vec<Candidate>,
    pub level: u32,
    pub method: FbmMethod,
    pub n_paths: usize,
    pub master_seed: u64,
    pub threshold: f64,
}

#[derive(Debug, Clone)]
pub struct ValidatePlan {
    pub params: GreyParams,
    pub master_seed: u64,
    pub checks: Vec<Check>,
    pub n_paths: usize,
    pub cf: CfCheckSpec,
    pub moment_t: f64,
    pub orders: Vec<u32>,
    pub lags: Vec<usize>,
    pub probe: Probe,
    pub sampler_draws: usize,
}

#[derive(Debug, Clone)]
pub enum Plan {
    Sample(SamplePlan),
    Variation(VariationPlan),
    Estimate(EstimatePlan),
    Discriminate(DiscriminatePlan),
    Validate(ValidatePlan),
}
