//! M-Wright density `M_β(τ)`, the law of the random variance factor of a
//! ggBm. Its Laplace transform is `E_β(−s)` and its moments are
//! `Γ(δ+1)/Γ(βδ+1)`.
//!
//! Small `τ` uses the power series
//! `M_β(τ) = Σ (−τ)ⁿ / (n! Γ(1 − β − βn))`; once the series would lose too
//! many digits to cancellation we switch to the Kanter-type representation
//! `M_β(τ) = τ^{β/(1−β)}/(1−β) ∫₀¹ a(u) exp(−a(u) τ^{1/(1−β)}) du`
//! whose integrand is nonnegative.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::gamma::{ln_gamma, recip_gamma, sin_pi};
use super::quadrature::GaussLegendre;
use super::{EvalConfig, MAX_SERIES_PEAK_LOG10};
use crate::error::{Error, Result};

/// Kanter's function `a(u) = (sin βπu / sin πu)^{1/(1−β)} · sin((1−β)πu) / sin βπu`
/// on `[0, 1)`.
///
/// If `U` is uniform on `(0,1)` and `E` is a unit exponential independent
/// of `U`, then `(a(U)/E)^{(1−β)/β}` is one-sided β-stable with Laplace
/// transform `exp(−s^β)`.
pub fn kanter_weight(beta: f64, u: f64) -> f64 {
    if u <= 0.0 {
        // limit u -> 0
        return beta.powf(beta / (1.0 - beta)) * (1.0 - beta);
    }
    let s_bu = sin_pi(beta * u);
    let s_u = sin_pi(u);
    let s_cu = sin_pi((1.0 - beta) * u);
    (s_bu / s_u).powf(1.0 / (1.0 - beta)) * s_cu / s_bu
}

fn check_args(beta: f64, tau: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::param("beta", beta, "must lie in (0, 1)"));
    }
    if beta == 1.0 {
        return Err(Error::Degenerate);
    }
    if !tau.is_finite() {
        return Err(Error::Input(format!("M-Wright argument tau = {tau} is not finite")));
    }
    if tau < 0.0 {
        return Err(Error::param("tau", tau, "must be nonnegative"));
    }
    Ok(())
}

pub fn mwright_pdf(beta: f64, tau: f64) -> Result<f64> {
    mwright_pdf_with(beta, tau, &EvalConfig::default())
}

pub fn mwright_pdf_with(beta: f64, tau: f64, cfg: &EvalConfig) -> Result<f64> {
    check_args(beta, tau)?;
    if tau == 0.0 {
        return Ok(recip_gamma(1.0 - beta));
    }
    let value = if series_is_safe(beta, tau, cfg) {
        mwright_series(beta, tau, cfg)?
    } else {
        mwright_integral(beta, tau, cfg)?
    };
    // cancellation can leave tiny negative residue in the far tail
    Ok(value.max(0.0))
}

// log of an upper bound on |n-th term|, dropping the |sin| factor
fn term_bound_log(beta: f64, ln_tau: f64, n: usize) -> f64 {
    let n_f = n as f64;
    n_f * ln_tau - ln_gamma(n_f + 1.0) + ln_gamma(beta * n_f + beta) - PI.ln()
}

fn series_is_safe(beta: f64, tau: f64, cfg: &EvalConfig) -> bool {
    let ln_tau = tau.ln();
    let limit = MAX_SERIES_PEAK_LOG10 * core::f64::consts::LN_10;
    let mut peak = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    for n in 1..=cfg.max_terms {
        let b = term_bound_log(beta, ln_tau, n);
        if b > limit {
            return false;
        }
        peak = peak.max(b);
        if b < prev && b < cfg.series_tol.ln() + peak.min(0.0) {
            return n < cfg.max_terms;
        }
        prev = b;
    }
    false
}

/// Power-series route.
pub fn mwright_series(beta: f64, tau: f64, cfg: &EvalConfig) -> Result<f64> {
    check_args(beta, tau)?;
    if tau == 0.0 {
        return Ok(recip_gamma(1.0 - beta));
    }
    let ln_tau = tau.ln();
    let mut sum = recip_gamma(1.0 - beta);
    let mut log_fact = 0.0;
    let mut prev_bound = f64::INFINITY;
    let mut past_peak = false;
    for n in 1..cfg.max_terms {
        let n_f = n as f64;
        log_fact += n_f.ln();
        let rg = recip_gamma(1.0 - beta - beta * n_f);
        let mag = (n_f * ln_tau - log_fact).exp() * rg;
        sum += if n % 2 == 0 { mag } else { -mag };
        let bound = term_bound_log(beta, ln_tau, n);
        if bound < prev_bound {
            past_peak = true;
        }
        prev_bound = bound;
        if past_peak && bound.exp() <= cfg.series_tol * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy(format!(
        "M-Wright series for beta = {beta}, tau = {tau} did not converge in {} terms",
        cfg.max_terms
    )))
}

/// Integral route for `τ > 0`.
pub fn mwright_integral(beta: f64, tau: f64, cfg: &EvalConfig) -> Result<f64> {
    check_args(beta, tau)?;
    if tau == 0.0 {
        return Ok(recip_gamma(1.0 - beta));
    }
    let inv = 1.0 / (1.0 - beta);
    let scale = tau.powf(inv);

    // a(u) is smooth at 0 and increases to ∞ at 1; panels refine towards 1
    // until the exponential factor underflows
    let mut breaks: Vec<f64> = (0..8).map(|k| k as f64 / 16.0).collect();
    let mut cut = false;
    for k in 1..=52 {
        let b = 1.0 - 0.5f64.powi(k);
        breaks.push(b);
        if kanter_weight(beta, b) * scale > 745.0 {
            cut = true;
            break;
        }
    }
    if !cut {
        breaks.push(1.0);
    }

    let gl = GaussLegendre::new(cfg.quadrature_points);
    let integral = gl.integrate_panels(&breaks, |u| {
        let a = kanter_weight(beta, u);
        let x = a * scale;
        if !x.is_finite() || x > 745.0 {
            0.0
        } else {
            a * (-x).exp()
        }
    });
    let value = tau.powf(beta * inv) * inv * integral;
    if !value.is_finite() {
        return Err(Error::Accuracy(format!(
            "M-Wright integral for beta = {beta}, tau = {tau} is not finite"
        )));
    }
    Ok(value)
}
