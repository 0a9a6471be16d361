//! The five experiment commands. Each is a pure function of its plan: path
//! `k` of a batch always uses the same substream, and every reduction runs
//! in index order.

use std::ops::RangeInclusive;

use greyvar_core::exec::map_paths;
use greyvar_core::inference::{
    discriminate, distinguishability_check, estimate_alpha, estimate_beta, Clause, DecisionLabel, GammaRegion,
};
use greyvar_core::sampling::{FbmMethod, GgbmSampler};
use greyvar_core::special::mittag_leffler;
use greyvar_core::stats::{median, Moments};
use greyvar_core::validation::{
    cf_curvature_at_zero, check_even_moments, check_fbm_covariance, check_fbm_samplers_agree, check_increment_cf,
    check_mixing_decay, check_mwright_sampler, check_stable_laplace, ggbm_moment, laplace_identity, moment_identity,
    Z_POLICY,
};
use greyvar_core::variation::{
    p_variation_sum, regime_evidence, renormalized_statistic, variation_sequence, variation_trichotomy, RegimeEvidence,
    TrichotomyLabel, VariationRecord, DEFAULT_GROWTH_RATIO,
};
use greyvar_core::{Executor, GreyParams, GridSpec, RngSpec, SamplePath};
use serde::{Deserialize, Serialize};

use crate::config::{Check, DiscriminatePlan, EstimatePlan, SamplePlan, ValidatePlan, VariationPlan};
use crate::error::{CliError, Result};
use crate::io::{fmt_f64, Table};

fn method_name(m: FbmMethod) -> &'static str {
    match m {
        FbmMethod::Auto => "auto",
        FbmMethod::Cholesky => "cholesky",
        FbmMethod::Circulant => "circulant",
    }
}

fn grid_name(g: GridSpec) -> (&'static str, u32) {
    match g {
        GridSpec::Dyadic { level } => ("dyadic", level),
        GridSpec::Uniform { n } => ("uniform", n),
    }
}

fn collect<T>(items: Vec<greyvar_core::Result<T>>) -> Result<Vec<T>> {
    items.into_iter().map(|r| r.map_err(CliError::from)).collect()
}

// ---------------------------------------------------------------- sample

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub stream_id: u64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleResults {
    pub grid: String,
    pub resolution: u32,
    pub alpha: f64,
    pub beta: f64,
    pub master_seed: u64,
    pub method: String,
    pub paths: Vec<PathRecord>,
}

pub fn sample_paths<E: Executor + ?Sized>(plan: &SamplePlan, exec: &E) -> Result<Vec<SamplePath>> {
    let sampler = GgbmSampler::with_method(plan.params, plan.grid, plan.method)?;
    let base = RngSpec::new(plan.master_seed, 0);
    Ok(map_paths(exec, &sampler, base, plan.n_paths, |p| p.clone()))
}

pub fn sample<E: Executor + ?Sized>(plan: &SamplePlan, exec: &E) -> Result<(SampleResults, Vec<SamplePath>)> {
    let paths = sample_paths(plan, exec)?;
    let (grid, resolution) = grid_name(plan.grid);
    let results = SampleResults {
        grid: grid.into(),
        resolution,
        alpha: plan.params.alpha(),
        beta: plan.params.beta(),
        master_seed: plan.master_seed,
        method: method_name(plan.method).into(),
        paths: paths
            .iter()
            .map(|p| PathRecord {
                stream_id: p.seed().map_or(0, |s| s.stream_id),
                values: p.values().to_vec(),
            })
            .collect(),
    };
    Ok((results, paths))
}

// ------------------------------------------------------------- variation

/// Summary over paths of the variation sums at one resolution and exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationRow {
    /// Dyadic level, or `n` on a uniform grid.
    pub level: u32,
    pub p: f64,
    pub median: f64,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentSummary {
    pub p: f64,
    /// `zero`, `infinite` or `finite`.
    pub regime: String,
    /// Limit of the sums when the regime is `finite`.
    pub limit: Option<f64>,
    /// Drift of the median sums from the coarsest to the finest level.
    pub evidence: Option<String>,
    /// Mean of `n^{pα/2−1} V_{p,n}` over paths on uniform grids.
    pub renormalized_mean: Option<f64>,
    pub renormalized_sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationResults {
    pub n_paths: usize,
    pub rows: Vec<VariationRow>,
    pub exponents: Vec<ExponentSummary>,
}

impl VariationResults {
    pub fn row(&self, level: u32, p: f64) -> Option<&VariationRow> {
        self.rows.iter().find(|r| r.level == level && r.p == p)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["level", "p", "value"]);
        for r in &self.rows {
            t.push(vec![r.level.to_string(), fmt_f64(r.p), fmt_f64(r.median)]);
        }
        t
    }
}

fn summarize(level: u32, p: f64, xs: &[f64]) -> VariationRow {
    let m: Moments = xs.iter().copied().collect();
    VariationRow {
        level,
        p,
        median: median(xs),
        mean: m.mean(),
        sd: m.std_dev(),
    }
}

fn evidence_name(e: RegimeEvidence) -> &'static str {
    match e {
        RegimeEvidence::Vanishing => "vanishing",
        RegimeEvidence::Exploding => "exploding",
        RegimeEvidence::Stable => "stable",
    }
}

pub fn variation<E: Executor + ?Sized>(plan: &VariationPlan, exec: &E) -> Result<VariationResults> {
    let sampler = GgbmSampler::with_method(plan.params, plan.grid, plan.method)?;
    let base = RngSpec::new(plan.master_seed, 0);
    let alpha = plan.params.alpha();
    let mut rows = Vec::new();
    let mut exponents = Vec::new();

    match &plan.levels {
        Some(levels) => {
            // per path: for each exponent, the sums at every level
            let per_path: Vec<greyvar_core::Result<Vec<Vec<VariationRecord>>>> =
                map_paths(exec, &sampler, base, plan.n_paths, |path| {
                    plan.exponents
                        .iter()
                        .map(|&p| variation_sequence(path, p, levels.clone()))
                        .collect()
                });
            let per_path = collect(per_path)?;
            for (k, &p) in plan.exponents.iter().enumerate() {
                let mut medians = Vec::new();
                for (j, level) in levels.clone().enumerate() {
                    let xs: Vec<f64> = per_path.iter().map(|recs| recs[k][j].value).collect();
                    let row = summarize(level, p, &xs);
                    medians.push(VariationRecord {
                        level_or_n: level,
                        p,
                        value: row.median,
                    });
                    rows.push(row);
                }
                let evidence = (medians.len() >= 2)
                    .then(|| regime_evidence(&medians, DEFAULT_GROWTH_RATIO))
                    .transpose()?;
                exponents.push(exponent_summary(plan.params, p, evidence.map(evidence_name), None)?);
            }
        }
        None => {
            let n = plan.grid.resolution();
            let per_path: Vec<greyvar_core::Result<Vec<(f64, f64)>>> =
                map_paths(exec, &sampler, base, plan.n_paths, |path| {
                    plan.exponents
                        .iter()
                        .map(|&p| Ok((p_variation_sum(path, p)?.value, renormalized_statistic(path, p, alpha)?)))
                        .collect()
                });
            let per_path = collect(per_path)?;
            for (k, &p) in plan.exponents.iter().enumerate() {
                let xs: Vec<f64> = per_path.iter().map(|v| v[k].0).collect();
                rows.push(summarize(n, p, &xs));
                let z: Moments = per_path.iter().map(|v| v[k].1).collect();
                exponents.push(exponent_summary(plan.params, p, None, Some(&z))?);
            }
        }
    }
    Ok(VariationResults {
        n_paths: plan.n_paths,
        rows,
        exponents,
    })
}

fn exponent_summary(
    params: GreyParams,
    p: f64,
    evidence: Option<&str>,
    renormalized: Option<&Moments>,
) -> Result<ExponentSummary> {
    let (regime, limit) = match variation_trichotomy(params.alpha(), params.beta(), p)? {
        TrichotomyLabel::Zero => ("zero", None),
        TrichotomyLabel::Infinite => ("infinite", None),
        TrichotomyLabel::CriticalFinite(mu) => ("finite", Some(mu)),
    };
    Ok(ExponentSummary {
        p,
        regime: regime.into(),
        limit,
        evidence: evidence.map(Into::into),
        renormalized_mean: renormalized.map(Moments::mean),
        renormalized_sd: renormalized.map(Moments::std_dev),
    })
}

// -------------------------------------------------------------- estimate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub stream_id: u64,
    pub alpha: f64,
    pub alpha_se: f64,
    pub alpha_boundary: bool,
    pub beta: Option<f64>,
    pub beta_boundary: Option<bool>,
    pub beta_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub true_alpha: f64,
    pub true_beta: f64,
    pub alpha_mean: f64,
    pub alpha_bias: f64,
    pub alpha_sd: f64,
    /// Median over paths whose beta inversion succeeded.
    pub beta_median: Option<f64>,
    pub beta_median_bias: Option<f64>,
    pub beta_failures: usize,
    pub beta_boundary_hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResults {
    pub p_alpha: f64,
    pub levels: [u32; 2],
    pub region: String,
    pub summary: EstimateSummary,
    pub paths: Vec<EstimateRow>,
}

impl EstimateResults {
    pub fn table(&self) -> Table {
        let mut t = Table::new([
            "stream_id",
            "alpha",
            "alpha_se",
            "alpha_boundary",
            "beta",
            "beta_boundary",
            "beta_error",
        ]);
        for r in &self.paths {
            t.push(vec![
                r.stream_id.to_string(),
                fmt_f64(r.alpha),
                fmt_f64(r.alpha_se),
                r.alpha_boundary.to_string(),
                r.beta.map(fmt_f64).unwrap_or_default(),
                r.beta_boundary.map(|b| b.to_string()).unwrap_or_default(),
                r.beta_error.clone().unwrap_or_default(),
            ]);
        }
        t
    }
}

pub fn estimate<E: Executor + ?Sized>(plan: &EstimatePlan, exec: &E) -> Result<EstimateResults> {
    let sampler = GgbmSampler::with_method(plan.params, GridSpec::dyadic(plan.level), plan.method)?;
    let base = RngSpec::new(plan.master_seed, 0);
    let alpha_true = plan.params.alpha();
    let levels: RangeInclusive<u32> = plan.levels.clone();
    let rows = map_paths(exec, &sampler, base, plan.n_paths, |path| {
        let a = estimate_alpha(path, plan.p_alpha, levels.clone())?;
        let b = estimate_beta(path, alpha_true, plan.region);
        Ok(EstimateRow {
            stream_id: path.seed().map_or(0, |s| s.stream_id),
            alpha: a.alpha,
            alpha_se: a.std_error,
            alpha_boundary: a.boundary,
            beta: b.as_ref().ok().map(|b| b.beta),
            beta_boundary: b.as_ref().ok().map(|b| b.boundary),
            beta_error: b.err().map(|e| e.to_string()),
        })
    });
    let rows = collect(rows)?;
    let am: Moments = rows.iter().map(|r| r.alpha).collect();
    let betas: Vec<f64> = rows.iter().filter_map(|r| r.beta).collect();
    let beta_median = (!betas.is_empty()).then(|| median(&betas));
    Ok(EstimateResults {
        p_alpha: plan.p_alpha,
        levels: [*plan.levels.start(), *plan.levels.end()],
        region: match plan.region {
            GammaRegion::Low => "low".into(),
            GammaRegion::High => "high".into(),
        },
        summary: EstimateSummary {
            true_alpha: alpha_true,
            true_beta: plan.params.beta(),
            alpha_mean: am.mean(),
            alpha_bias: am.mean() - alpha_true,
            alpha_sd: am.std_dev(),
            beta_median,
            beta_median_bias: beta_median.map(|m| m - plan.params.beta()),
            beta_failures: rows.len() - betas.len(),
            beta_boundary_hits: rows.iter().filter(|r| r.beta_boundary == Some(true)).count(),
        },
        paths: rows,
    })
}

// ---------------------------------------------------------- discriminate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateInfo {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub p_crit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairInfo {
    pub first: usize,
    pub second: usize,
    pub distinguishable: bool,
    pub clause: String,
    pub common_monotone_region: bool,
    pub reason: String,
}

/// One decision between candidates `first < second` for a path drawn from
/// candidate `truth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub truth: usize,
    pub stream_id: u64,
    pub first: usize,
    pub second: usize,
    pub label: String,
    #[serde(rename = "V1")]
    pub v1: f64,
    #[serde(rename = "V2")]
    pub v2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub d1: f64,
    pub d2: f64,
    pub threshold: f64,
    pub levels: [u32; 2],
    pub drift_slope_first: Option<f64>,
    pub drift_slope_second: Option<f64>,
    pub drift_consistent: Option<bool>,
}

/// Rows are true candidates; columns are predicted candidates followed by
/// `inconclusive`. Every pairwise decision contributes one count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn inconclusive(&self) -> u64 {
        self.counts.iter().map(|r| *r.last().unwrap()).sum()
    }

    pub fn accuracy(&self) -> f64 {
        self.correct() as f64 / self.total() as f64
    }

    pub fn inconclusive_rate(&self) -> f64 {
        self.inconclusive() as f64 / self.total() as f64
    }

    pub fn table(&self) -> Table {
        let k = self.counts.len();
        let mut cols = vec!["truth".to_string()];
        cols.extend(self.labels[..k].iter().cloned());
        cols.push("inconclusive".into());
        let mut t = Table::new(cols);
        for (i, row) in self.counts.iter().enumerate() {
            let mut r = vec![self.labels[i].clone()];
            r.extend(row.iter().map(u64::to_string));
            t.push(r);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminateResults {
    pub candidates: Vec<CandidateInfo>,
    pub pairs: Vec<PairInfo>,
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub inconclusive_rate: f64,
    pub decisions: Vec<DecisionRecord>,
}

fn label_name(l: DecisionLabel) -> &'static str {
    match l {
        DecisionLabel::First => "first",
        DecisionLabel::Second => "second",
        DecisionLabel::Inconclusive => "inconclusive",
    }
}

pub fn discriminate_batch<E: Executor + ?Sized>(plan: &DiscriminatePlan, exec: &E) -> Result<DiscriminateResults> {
    let cands = &plan.candidates;
    let k = cands.len();
    let mut pairs = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let check = distinguishability_check(&cands[a], &cands[b]);
            pairs.push(PairInfo {
                first: a,
                second: b,
                distinguishable: check.distinguishable,
                clause: match check.clause {
                    Clause::DifferentAlpha => "different_alpha",
                    Clause::DifferentGamma => "different_gamma",
                    Clause::NotSeparable => "not_separable",
                }
                .into(),
                common_monotone_region: check.common_monotone_region,
                reason: check.reason,
            });
        }
    }
    let active: Vec<(usize, usize)> = pairs
        .iter()
        .filter(|p| p.distinguishable)
        .map(|p| (p.first, p.second))
        .collect();
    if active.is_empty() {
        return Err(CliError::usage("no pair of candidates is distinguishable"));
    }

    let grid = GridSpec::dyadic(plan.level);
    let mut counts = vec![vec![0u64; k + 1]; k];
    let mut decisions = Vec::new();
    for (truth, cand) in cands.iter().enumerate() {
        let sampler = GgbmSampler::with_method(cand.params, grid, plan.method)?;
        let base = RngSpec::new(plan.master_seed, (truth as u64) << 32);
        let per_path = map_paths(exec, &sampler, base, plan.n_paths, |path| {
            active
                .iter()
                .filter(|(a, b)| *a == truth || *b == truth)
                .map(|&(a, b)| {
                    let d = discriminate(path, &cands[a], &cands[b], plan.threshold)?;
                    Ok((a, b, path.seed().map_or(0, |s| s.stream_id), d))
                })
                .collect::<greyvar_core::Result<Vec<_>>>()
        });
        for recs in collect(per_path)? {
            for (a, b, stream_id, d) in recs {
                let col = match d.label {
                    DecisionLabel::First => a,
                    DecisionLabel::Second => b,
                    DecisionLabel::Inconclusive => k,
                };
                counts[truth][col] += 1;
                decisions.push(DecisionRecord {
                    truth,
                    stream_id,
                    first: a,
                    second: b,
                    label: label_name(d.label).into(),
                    v1: d.v1,
                    v2: d.v2,
                    mu1: d.mu1,
                    mu2: d.mu2,
                    d1: d.d1,
                    d2: d.d2,
                    threshold: d.threshold,
                    levels: d.drift.map_or([d.level, d.level], |dr| [dr.levels.0, dr.levels.1]),
                    drift_slope_first: d.drift.map(|dr| dr.slope_first),
                    drift_slope_second: d.drift.map(|dr| dr.slope_second),
                    drift_consistent: d.drift_consistent,
                });
            }
        }
    }
    let mut labels: Vec<String> = cands
        .iter()
        .map(|c| format!("({}, {})", fmt_f64(c.params.alpha()), fmt_f64(c.params.beta())))
        .collect();
    labels.push("inconclusive".into());
    let confusion = ConfusionMatrix { labels, counts };
    Ok(DiscriminateResults {
        candidates: cands
            .iter()
            .map(|c| CandidateInfo {
                alpha: c.params.alpha(),
                beta: c.params.beta(),
                mu: c.mu,
                p_crit: c.p_crit,
            })
            .collect(),
        pairs,
        accuracy: confusion.accuracy(),
        inconclusive_rate: confusion.inconclusive_rate(),
        confusion,
        decisions,
    })
}

// -------------------------------------------------------------- validate

/// One compared quantity. `score` is a z-score for Monte Carlo rows and an
/// absolute error for deterministic rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateRow {
    pub check: String,
    pub item: String,
    pub value: f64,
    pub reference: f64,
    pub score: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    pub pass: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateResults {
    pub alpha: f64,
    pub beta: f64,
    pub pass: bool,
    pub checks: Vec<CheckSummary>,
    pub rows: Vec<ValidateRow>,
}

impl ValidateResults {
    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn rows_of<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a ValidateRow> + 'a {
        self.rows.iter().filter(move |r| r.check == name)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["check", "item", "value", "reference", "score", "tolerance", "pass"]);
        for r in &self.rows {
            t.push(vec![
                r.check.clone(),
                r.item.clone(),
                fmt_f64(r.value),
                fmt_f64(r.reference),
                fmt_f64(r.score),
                fmt_f64(r.tolerance),
                r.pass.to_string(),
            ]);
        }
        t
    }
}

fn exact_row(check: &str, item: String, value: f64, reference: f64, tolerance: f64) -> ValidateRow {
    let score = (value - reference).abs();
    ValidateRow {
        check: check.into(),
        item,
        value,
        reference,
        score,
        tolerance,
        pass: score <= tolerance,
    }
}

fn z_row(check: &str, item: String, value: f64, reference: f64, z: f64) -> ValidateRow {
    ValidateRow {
        check: check.into(),
        item,
        value,
        reference,
        score: z,
        tolerance: Z_POLICY,
        pass: z.abs() <= Z_POLICY,
    }
}

const SAMPLER_BETAS: [f64; 3] = [0.3, 0.5, 0.8];
const SAMPLER_DELTAS: [f64; 3] = [0.5, 1.0, 2.0];
const LAPLACE_S: [f64; 3] = [0.5, 1.0, 2.0];
const IDENTITY_BETAS: [f64; 3] = [0.3, 0.5, 0.7];
const HURSTS: [f64; 3] = [0.3, 0.5, 0.7];
const FBM_CHECK_LEVEL: u32 = 8;

/// Deterministic special-function checks.
fn special_rows(params: GreyParams) -> Result<Vec<ValidateRow>> {
    let mut rows = Vec::new();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..100 {
        let s = 50.0 * k as f64 / 99.0;
        let (got, want) = (mittag_leffler(1.0, s)?, (-s).exp());
        if (got - want).abs() >= (worst.1 - worst.2).abs() {
            worst = (s, got, want);
        }
    }
    rows.push(exact_row(
        "special",
        format!("E_1(-s) vs exp(-s), worst of 100 points at s={}", fmt_f64(worst.0)),
        worst.1,
        worst.2,
        1e-12,
    ));
    let e_erfc = std::f64::consts::E * libm::erfc(1.0);
    rows.push(exact_row(
        "special",
        "E_0.5(-1) vs e*erfc(1)".into(),
        mittag_leffler(0.5, 1.0)?,
        e_erfc,
        1e-8,
    ));
    for beta in IDENTITY_BETAS {
        for s in [0.1, 1.0, 5.0] {
            let (quad, ml) = laplace_identity(beta, s)?;
            rows.push(exact_row(
                "special",
                format!("laplace beta={} s={}", fmt_f64(beta), fmt_f64(s)),
                quad,
                ml,
                1e-6,
            ));
        }
    }
    for beta in IDENTITY_BETAS {
        for delta in SAMPLER_DELTAS {
            let (quad, closed) = moment_identity(beta, delta)?;
            rows.push(exact_row(
                "special",
                format!("moment beta={} delta={}", fmt_f64(beta), fmt_f64(delta)),
                quad,
                closed,
                1e-6 * closed,
            ));
        }
    }
    let second = ggbm_moment(&params, 1.0, 2);
    rows.push(exact_row(
        "special",
        "cf curvature at 0 vs second moment".into(),
        cf_curvature_at_zero(&params, 1.0, 1e-3)?,
        second,
        1e-6 * second,
    ));
    Ok(rows)
}

fn sampler_rows<E: Executor + ?Sized>(plan: &ValidatePlan, base: RngSpec, exec: &E) -> Result<Vec<ValidateRow>> {
    let mut rows = Vec::new();
    let block = 1u64 << 24;
    for (i, beta) in SAMPLER_BETAS.into_iter().enumerate() {
        let rng = base.offset(i as u64 * block);
        for r in check_mwright_sampler(beta, &SAMPLER_DELTAS, plan.sampler_draws, rng, exec)? {
            rows.push(z_row(
                "samplers",
                format!("mwright moment beta={} delta={}", fmt_f64(beta), fmt_f64(r.delta)),
                r.sample,
                r.theory,
                r.z,
            ));
        }
        let rng = base.offset((3 + i) as u64 * block);
        for r in check_stable_laplace(beta, &LAPLACE_S, plan.sampler_draws, rng, exec)? {
            rows.push(z_row(
                "samplers",
                format!("stable laplace beta={} s={}", fmt_f64(beta), fmt_f64(r.s)),
                r.sample,
                r.theory,
                r.z,
            ));
        }
    }
    for (i, h) in HURSTS.into_iter().enumerate() {
        let rng = base.offset((6 + i) as u64 * block);
        let r = check_fbm_covariance(h, FBM_CHECK_LEVEL, (0.5, 1.0), plan.n_paths, rng, exec)?;
        rows.push(z_row(
            "samplers",
            format!("cholesky cov(0.5, 1) H={}", fmt_f64(h)),
            r.sample,
            r.theory,
            r.z,
        ));
        let rng = base.offset((9 + i) as u64 * block);
        let incr = (1usize << FBM_CHECK_LEVEL) / 2;
        let ks = check_fbm_samplers_agree(h, FBM_CHECK_LEVEL, incr, plan.n_paths, rng, exec)?;
        rows.push(ValidateRow {
            check: "samplers".into(),
            item: format!("circulant vs cholesky KS p-value H={}", fmt_f64(h)),
            value: ks.p_value,
            reference: ks.ks_statistic,
            score: ks.p_value,
            tolerance: 1e-3,
            pass: ks.p_value > 1e-3,
        });
    }
    Ok(rows)
}

pub fn validate<E: Executor + ?Sized>(plan: &ValidatePlan, exec: &E) -> Result<ValidateResults> {
    let params = plan.params;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let stream = |k: u64| RngSpec::new(plan.master_seed, k << 40);
    for &check in &plan.checks {
        let (name, new_rows, pass, note) = match check {
            Check::Special => {
                let r = special_rows(params)?;
                let pass = r.iter().all(|x| x.pass);
                ("special", r, pass, "absolute error within tolerance".to_string())
            }
            Check::Samplers => {
                let r = sampler_rows(plan, stream(1), exec)?;
                let pass = r.iter().all(|x| x.pass);
                (
                    "samplers",
                    r,
                    pass,
                    format!("{} draws per sampler row", plan.sampler_draws),
                )
            }
            Check::Cf => {
                let rep = check_increment_cf(params, &plan.cf, stream(2), exec)?;
                let mut r = Vec::new();
                for row in &rep.rows {
                    let t = fmt_f64(row.theta);
                    r.push(z_row("cf", format!("re theta={t}"), row.re, row.theory, row.z_re));
                    r.push(z_row("cf", format!("im theta={t}"), row.im, 0.0, row.z_im));
                }
                let note = format!("increment over [{}, {}]", fmt_f64(rep.s), fmt_f64(rep.t));
                ("cf", r, rep.pass(), note)
            }
            Check::Moments => {
                let rep = check_even_moments(params, plan.moment_t, &plan.orders, plan.n_paths, stream(3), exec)?;
                let r = rep
                    .rows
                    .iter()
                    .map(|m| z_row("moments", format!("order={}", m.order), m.sample, m.theory, m.z))
                    .collect();
                ("moments", r, rep.pass(), format!("t={}", fmt_f64(rep.t)))
            }
            Check::Mixing => {
                let rep = check_mixing_decay(params, &plan.lags, plan.probe, plan.n_paths, stream(4), exec)?;
                let r = rep
                    .rows
                    .iter()
                    .map(|m| z_row("mixing", format!("lag={}", m.lag), m.cov, 0.0, m.z))
                    .collect();
                let note = format!(
                    "unit increments from level {} scaled by {}; verdict at the largest lag",
                    rep.level,
                    fmt_f64(rep.unit_scale)
                );
                ("mixing", r, rep.pass(), note)
            }
        };
        rows.extend(new_rows);
        checks.push(CheckSummary {
            check: name.into(),
            pass,
            note,
        });
    }
    Ok(ValidateResults {
        alpha: params.alpha(),
        beta: params.beta(),
        pass: checks.iter().all(|c| c.pass),
        checks,
        rows,
    })
}
