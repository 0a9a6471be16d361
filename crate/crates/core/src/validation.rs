//! Monte Carlo checks of the distributional laws of ggBm against their
//! closed forms, at a 4-standard-error pass policy.
//!
//! Every check draws its paths through an [`Executor`] with path `i` on
//! substream `rng.offset(i)` and reduces the per-path results in index
//! order, so reports are reproducible for a fixed seed whatever the thread
//! count.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exec::{map_paths, Executor};
use crate::params::GreyParams;
use crate::rng::RngSpec;
use crate::sampling::{
    draw_mwright, draw_one_sided_stable, fbm_covariance, CholeskyFbm, CirculantFbm, GgbmSampler, GridSpec,
};
use crate::special::quadrature::GaussLegendre;
use crate::special::{gamma, mittag_leffler, mwright_moment, mwright_pdf};
use crate::stats::{covariance_with_se, ks_two_sample, z_score, Moments};

/// Number of standard errors a Monte Carlo estimate may deviate.
pub const Z_POLICY: f64 = 4.0;

/// Minimum number of paths for the characteristic-function check.
pub const MIN_CF_PATHS: usize = 10_000;

/// Largest lag of the mixing check.
pub const MAX_MIXING_LAG: usize = 128;

fn within_policy(z: f64) -> bool {
    z.abs() <= Z_POLICY
}

/// Increment characteristic-function check configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CfCheckSpec {
    pub thetas: Vec<f64>,
    pub s: f64,
    pub t: f64,
    pub n_paths: usize,
    /// Dyadic level of the simulation grid; `s` and `t` must be on it.
    pub level: u32,
}

impl CfCheckSpec {
    pub fn validate(&self) -> Result<()> {
        if self.s == self.t {
            return Err(Error::Input(format!("cf check needs s != t, got s = t = {}", self.s)));
        }
        if self.n_paths < MIN_CF_PATHS {
            return Err(Error::param(
                "n_paths",
                self.n_paths as f64,
                "cf check needs at least 10^4 paths",
            ));
        }
        if self.thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::Input("cf check thetas must be finite".into()));
        }
        let grid = GridSpec::dyadic(self.level);
        for (name, v) in [("s", self.s), ("t", self.t)] {
            if grid.index_of(v).is_none() {
                return Err(Error::Input(format!(
                    "{name} = {v} is not on the level-{} dyadic grid",
                    self.level
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfRow {
    pub theta: f64,
    pub re: f64,
    pub re_se: f64,
    pub im: f64,
    pub im_se: f64,
    pub theory: f64,
    pub z_re: f64,
    pub z_im: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfReport {
    pub params: GreyParams,
    pub s: f64,
    pub t: f64,
    pub n_paths: usize,
    pub rows: Vec<CfRow>,
}

impl CfReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Empirical `E cos(θΔ)` and `E sin(θΔ)` of `Δ = x(t) − x(s)` against
/// `E_β(−θ²|t−s|^α/2)`.
pub fn check_increment_cf<E: Executor + ?Sized>(
    params: GreyParams,
    spec: &CfCheckSpec,
    rng: RngSpec,
    exec: &E,
) -> Result<CfReport> {
    spec.validate()?;
    let grid = GridSpec::dyadic(spec.level);
    let (is, it) = (grid.index_of(spec.s).unwrap(), grid.index_of(spec.t).unwrap());
    let sampler = GgbmSampler::new(params, grid)?;
    let deltas = map_paths(exec, &sampler, rng, spec.n_paths, |p| p.values()[it] - p.values()[is]);
    let lag = (spec.t - spec.s).abs().powf(params.alpha());
    let mut rows = Vec::with_capacity(spec.thetas.len());
    for &theta in &spec.thetas {
        let re: Moments = deltas.iter().map(|d| (theta * d).cos()).collect();
        let im: Moments = deltas.iter().map(|d| (theta * d).sin()).collect();
        let theory = mittag_leffler(params.beta(), theta * theta * lag / 2.0)?;
        let z_re = z_score(re.mean(), theory, re.std_error());
        let z_im = z_score(im.mean(), 0.0, im.std_error());
        rows.push(CfRow {
            theta,
            re: re.mean(),
            re_se: re.std_error(),
            im: im.mean(),
            im_se: im.std_error(),
            theory,
            z_re,
            z_im,
            pass: within_policy(z_re) && within_policy(z_im),
        });
    }
    Ok(CfReport {
        params,
        s: spec.s,
        t: spec.t,
        n_paths: spec.n_paths,
        rows,
    })
}

/// `E B(t)^k`: `k!/(2^{k/2} Γ(βk/2 + 1)) t^{kα/2}` for even `k`, 0 for odd.
pub fn ggbm_moment(params: &GreyParams, t: f64, order: u32) -> f64 {
    if order % 2 == 1 {
        return 0.0;
    }
    let n = (order / 2) as f64;
    let fact: f64 = (1..=order).map(|k| k as f64).product();
    fact / (2f64.powf(n) * gamma(params.beta() * n + 1.0)) * t.powf(n * params.alpha())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub order: u32,
    pub sample: f64,
    pub se: f64,
    pub theory: f64,
    pub z: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub params: GreyParams,
    pub t: f64,
    pub n_paths: usize,
    pub rows: Vec<MomentRow>,
}

impl MomentReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Sample moments of `B(t)` against the moment formula. Each even order
/// `2n` also checks the odd order `2n − 1`, which must vanish.
///
/// `B(t)` is realized as `t^{α/2} B(1)` with `B(1)` from a level-0 path.
pub fn check_even_moments<E: Executor + ?Sized>(
    params: GreyParams,
    t: f64,
    orders: &[u32],
    n_paths: usize,
    rng: RngSpec,
    exec: &E,
) -> Result<MomentReport> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::param("t", t, "must lie in (0, 1]"));
    }
    if let Some(&bad) = orders.iter().find(|&&k| k == 0 || k > 4) {
        return Err(Error::param("order", bad as f64, "moment orders must lie in 1..=4"));
    }
    if n_paths < 2 {
        return Err(Error::param("n_paths", n_paths as f64, "need at least two paths"));
    }
    let mut all: Vec<u32> = Vec::new();
    for &k in orders {
        if k % 2 == 0 {
            all.push(k - 1);
        }
        all.push(k);
    }
    all.sort_unstable();
    all.dedup();

    let sampler = GgbmSampler::new(params, GridSpec::dyadic(0))?;
    let scale = t.powf(params.hurst());
    let xs = map_paths(exec, &sampler, rng, n_paths, |p| scale * p.values()[1]);
    let rows = all
        .into_iter()
        .map(|k| {
            let m: Moments = xs.iter().map(|x| x.powi(k as i32)).collect();
            let theory = ggbm_moment(&params, t, k);
            let z = z_score(m.mean(), theory, m.std_error());
            MomentRow {
                order: k,
                sample: m.mean(),
                se: m.std_error(),
                theory,
                z,
                pass: within_policy(z),
            }
        })
        .collect();
    Ok(MomentReport {
        params,
        t,
        n_paths,
        rows,
    })
}

/// Bounded test function applied to unit increments in the mixing check.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Probe {
    #[default]
    Tanh,
    /// `clamp(x, −c, c)`.
    Clamp(f64),
}

impl Probe {
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            Probe::Tanh => x.tanh(),
            Probe::Clamp(c) => x.clamp(-c, c),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingRow {
    pub lag: usize,
    pub cov: f64,
    pub se: f64,
    pub z: f64,
    /// Correlation of the underlying unit-step fGn at this lag, as a trend
    /// reference for the Gaussian factor.
    pub gaussian_corr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    pub params: GreyParams,
    pub probe: Probe,
    pub level: u32,
    /// Factor turning level-`N` increments into unit-step increments.
    pub unit_scale: f64,
    pub n_paths: usize,
    pub rows: Vec<MixingRow>,
}

impl MixingReport {
    /// The covariance at the largest lag is within the policy band of 0.
    pub fn pass(&self) -> bool {
        self.rows
            .iter()
            .max_by_key(|r| r.lag)
            .is_some_and(|r| within_policy(r.z))
    }
}

/// `Cov(f(Δ₁), f(Δ_{1+lag}))` over unit-step increments.
///
/// The increments come from one dyadic path of level
/// `N = ⌈log₂(max lag + 1)⌉` on `[0, 1]`: by self-similarity,
/// `2^{Nα/2} (x(j/2^N) − x((j−1)/2^N))` has the law of `B(j) − B(j−1)`.
pub fn check_mixing_decay<E: Executor + ?Sized>(
    params: GreyParams,
    lags: &[usize],
    probe: Probe,
    n_paths: usize,
    rng: RngSpec,
    exec: &E,
) -> Result<MixingReport> {
    let max_lag = match lags.iter().max() {
        Some(&m) => m,
        None => return Err(Error::Input("mixing check needs at least one lag".into())),
    };
    if lags.contains(&0) {
        return Err(Error::Input("mixing lags must be positive".into()));
    }
    if max_lag > MAX_MIXING_LAG {
        return Err(Error::Input(format!(
            "lag {max_lag} exceeds the available {MAX_MIXING_LAG} unit increments"
        )));
    }
    if n_paths < 2 {
        return Err(Error::param("n_paths", n_paths as f64, "need at least two paths"));
    }
    if let Probe::Clamp(c) = probe {
        if !(c > 0.0) {
            return Err(Error::param("clamp", c, "must be positive"));
        }
    }
    let needed = max_lag + 1;
    let level = (needed as f64).log2().ceil() as u32;
    let unit_scale = 2f64.powf(level as f64 * params.hurst());
    let sampler = GgbmSampler::new(params, GridSpec::dyadic(level))?;
    let probes: Vec<Vec<f64>> = map_paths(exec, &sampler, rng, n_paths, |p| {
        p.increments()
            .take(needed)
            .map(|d| probe.apply(unit_scale * d))
            .collect()
    });
    let first: Vec<f64> = probes.iter().map(|v| v[0]).collect();
    let mut sorted = lags.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let h2 = 2.0 * params.hurst();
    let rows = sorted
        .into_iter()
        .map(|lag| {
            let later: Vec<f64> = probes.iter().map(|v| v[lag]).collect();
            let (cov, se) = covariance_with_se(&first, &later);
            let k = lag as f64;
            MixingRow {
                lag,
                cov,
                se,
                z: z_score(cov, 0.0, se),
                gaussian_corr: 0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2)),
            }
        })
        .collect();
    Ok(MixingReport {
        params,
        probe,
        level,
        unit_scale,
        n_paths,
        rows,
    })
}

/// Second derivative of `θ ↦ E_β(−θ² c/2)` at 0 by central differences,
/// negated; equals the second moment `c/Γ(β+1)` of an increment with
/// `c = |t−s|^α`.
pub fn cf_curvature_at_zero(params: &GreyParams, lag: f64, step: f64) -> Result<f64> {
    let c = lag.abs().powf(params.alpha());
    let cf = |theta: f64| mittag_leffler(params.beta(), theta * theta * c / 2.0);
    let d2 = (cf(step)? - 2.0 * cf(0.0)? + cf(-step)?) / (step * step);
    Ok(-d2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerMomentRow {
    pub beta: f64,
    pub delta: f64,
    pub sample: f64,
    pub se: f64,
    pub theory: f64,
    pub z: f64,
    pub pass: bool,
}

/// Moments `E[Y_β^δ]` of the M-Wright sampler against
/// `Γ(δ+1)/Γ(βδ+1)` from `n` draws.
///
/// Draws are split into `chunks` substreams (one per executor task).
pub fn check_mwright_sampler<E: Executor + ?Sized>(
    beta: f64,
    deltas: &[f64],
    n: usize,
    rng: RngSpec,
    exec: &E,
) -> Result<Vec<SamplerMomentRow>> {
    let ys = draw_chunked(n, rng, exec, |r| draw_mwright(beta, r))?;
    deltas
        .iter()
        .map(|&delta| {
            let m: Moments = ys.iter().map(|y| y.powf(delta)).collect();
            let theory = mwright_moment(beta, delta)?;
            let z = z_score(m.mean(), theory, m.std_error());
            Ok(SamplerMomentRow {
                beta,
                delta,
                sample: m.mean(),
                se: m.std_error(),
                theory,
                z,
                pass: within_policy(z),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceRow {
    pub s: f64,
    pub sample: f64,
    pub se: f64,
    pub theory: f64,
    pub z: f64,
    pub pass: bool,
}

/// Monte Carlo `E e^{−sS}` of the one-sided stable sampler against
/// `e^{−s^β}`.
pub fn check_stable_laplace<E: Executor + ?Sized>(
    beta: f64,
    svals: &[f64],
    n: usize,
    rng: RngSpec,
    exec: &E,
) -> Result<Vec<LaplaceRow>> {
    let draws = draw_chunked(n, rng, exec, |r| draw_one_sided_stable(beta, r))?;
    Ok(svals
        .iter()
        .map(|&s| {
            let m: Moments = draws.iter().map(|x| (-s * x).exp()).collect();
            let theory = (-s.powf(beta)).exp();
            let z = z_score(m.mean(), theory, m.std_error());
            LaplaceRow {
                s,
                sample: m.mean(),
                se: m.std_error(),
                theory,
                z,
                pass: within_policy(z),
            }
        })
        .collect())
}

const CHUNK: usize = 1 << 14;

fn draw_chunked<E, F>(n: usize, rng: RngSpec, exec: &E, draw: F) -> Result<Vec<f64>>
where
    E: Executor + ?Sized,
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> Result<f64> + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<f64>>> = exec.map(chunks, |c| {
        let mut r = rng.offset(c as u64).rng();
        let len = CHUNK.min(n - c * CHUNK);
        (0..len).map(|_| draw(&mut r)).collect()
    });
    let mut out = Vec::with_capacity(n);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerAgreement {
    pub hurst: f64,
    pub level: u32,
    pub increment_index: usize,
    pub ks_statistic: f64,
    pub p_value: f64,
}

/// Two-sample KS test between one increment of circulant-embedding paths
/// and the same increment of Cholesky paths (independent streams).
pub fn check_fbm_samplers_agree<E: Executor + ?Sized>(
    hurst: f64,
    level: u32,
    increment_index: usize,
    n: usize,
    rng: RngSpec,
    exec: &E,
) -> Result<SamplerAgreement> {
    let grid = GridSpec::dyadic(level);
    if increment_index >= grid.intervals() {
        return Err(Error::Input(format!(
            "increment {increment_index} is outside the level-{level} grid"
        )));
    }
    let circ = CirculantFbm::new(hurst, level)?;
    let chol = CholeskyFbm::new(hurst, grid)?;
    let j = increment_index;
    let a = exec.map(n, |i| {
        let v = circ.draw(&mut rng.offset(i as u64).rng());
        v[j + 1] - v[j]
    });
    let b = exec.map(n, |i| {
        let v = chol.draw(&mut rng.offset((n + i) as u64).rng());
        v[j + 1] - v[j]
    });
    let (d, p) = ks_two_sample(&a, &b);
    Ok(SamplerAgreement {
        hurst,
        level,
        increment_index,
        ks_statistic: d,
        p_value: p,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceRow {
    pub hurst: f64,
    pub s: f64,
    pub t: f64,
    pub sample: f64,
    pub se: f64,
    pub theory: f64,
    pub z: f64,
    pub pass: bool,
}

/// Sample `E[x(s) x(t)]` of Cholesky fBm paths on the level-`level` grid
/// against `(s^{2H} + t^{2H} − |t−s|^{2H})/2`.
pub fn check_fbm_covariance<E: Executor + ?Sized>(
    hurst: f64,
    level: u32,
    (s, t): (f64, f64),
    n: usize,
    rng: RngSpec,
    exec: &E,
) -> Result<CovarianceRow> {
    let grid = GridSpec::dyadic(level);
    let (i, j) = match (grid.index_of(s), grid.index_of(t)) {
        (Some(i), Some(j)) => (i, j),
        _ => {
            return Err(Error::Input(format!(
                "({s}, {t}) is not on the level-{level} dyadic grid"
            )))
        }
    };
    if n < 2 {
        return Err(Error::param("n_paths", n as f64, "need at least two paths"));
    }
    let chol = CholeskyFbm::new(hurst, grid)?;
    let prods = exec.map(n, |k| {
        let v = chol.draw(&mut rng.offset(k as u64).rng());
        v[i] * v[j]
    });
    let m: Moments = prods.into_iter().collect();
    let theory = fbm_covariance(hurst, s, t)?;
    let z = z_score(m.mean(), theory, m.std_error());
    Ok(CovarianceRow {
        hurst,
        s,
        t,
        sample: m.mean(),
        se: m.std_error(),
        theory,
        z,
        pass: within_policy(z),
    })
}

/// Laplace-transform identity `∫₀^∞ e^{−sτ} M_β(τ) dτ = E_β(−s)` by
/// quadrature; returns `(quadrature, E_β(−s))`.
pub fn laplace_identity(beta: f64, s: f64) -> Result<(f64, f64)> {
    let lhs = mwright_quadrature(beta, |tau| (-s * tau).exp())?;
    Ok((lhs, mittag_leffler(beta, s)?))
}

/// Moment identity `∫₀^∞ τ^δ M_β(τ) dτ = Γ(δ+1)/Γ(βδ+1)`; returns
/// `(quadrature, closed form)`.
pub fn moment_identity(beta: f64, delta: f64) -> Result<(f64, f64)> {
    let lhs = mwright_quadrature(beta, |tau| tau.powf(delta))?;
    Ok((lhs, mwright_moment(beta, delta)?))
}

fn mwright_quadrature<F: Fn(f64) -> f64>(beta: f64, weight: F) -> Result<f64> {
    let gl = GaussLegendre::new(32);
    let mut breaks = vec![0.0];
    let mut x = 0.125;
    while x < 128.0 {
        breaks.push(x);
        x += if x < 4.0 { 0.125 } else { 0.5 };
    }
    breaks.push(128.0);
    let mut err = None;
    let total = gl.integrate_panels(&breaks, |tau| match mwright_pdf(beta, tau) {
        Ok(m) => m * weight(tau),
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}
