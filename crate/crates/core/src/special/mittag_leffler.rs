//! Mittag-Leffler function on the negative real axis, `E_β(−s)`, `s ≥ 0`.
//!
//! Two routes:
//! - the power series `Σ (−s)ⁿ / Γ(βn + 1)` for small `s`, used only while
//!   the largest term stays below `10^MAX_SERIES_PEAK_LOG10`;
//! - for `0 < β < 1` the real-axis representation
//!   `E_β(−s) = sin(βπ)/(βπ) ∫₀^∞ exp(−s^{1/β} u^{1/β}) / (u² + 2u cos βπ + 1) du`,
//!   integrated with Gauss–Legendre on a panel grid adapted to the cutoff
//!   and to the near-pole of the denominator at `u = −cos βπ`.
//!
//! `β = 1` is `exp(−s)`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::gamma::ln_gamma;
use super::quadrature::GaussLegendre;
use super::{EvalConfig, MAX_SERIES_PEAK_LOG10};
use crate::error::{Error, Result};

// exp(-CUTOFF) is negligible against the smallest integrand scale we care about
const CUTOFF: f64 = 60.0;

fn check_args(beta: f64, s: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::param("beta", beta, "must lie in (0, 1]"));
    }
    if !s.is_finite() {
        return Err(Error::Input(format!("mittag_leffler argument s = {s} is not finite")));
    }
    if s < 0.0 {
        return Err(Error::param("s", s, "must be nonnegative"));
    }
    Ok(())
}

/// `E_β(−s)` with default accuracy settings.
pub fn mittag_leffler(beta: f64, s: f64) -> Result<f64> {
    mittag_leffler_with(beta, s, &EvalConfig::default())
}

pub fn mittag_leffler_with(beta: f64, s: f64, cfg: &EvalConfig) -> Result<f64> {
    check_args(beta, s)?;
    if s == 0.0 {
        return Ok(1.0);
    }
    if beta == 1.0 {
        return Ok((-s).exp());
    }
    if s <= cfg.series_switch && series_is_safe(beta, s, cfg) {
        mittag_leffler_series(beta, s, cfg)
    } else {
        mittag_leffler_integral(beta, s, cfg)
    }
}

fn term_log(beta: f64, s: f64, n: usize) -> f64 {
    n as f64 * s.ln() - ln_gamma(beta * n as f64 + 1.0)
}

fn series_is_safe(beta: f64, s: f64, cfg: &EvalConfig) -> bool {
    let limit = MAX_SERIES_PEAK_LOG10 * core::f64::consts::LN_10;
    let mut peak = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    for n in 0..=cfg.max_terms {
        let b = term_log(beta, s, n);
        if b > limit {
            return false;
        }
        peak = peak.max(b);
        // terms decay monotonically once they start falling
        if b < prev && b < cfg.series_tol.ln() + peak.min(0.0) {
            return n < cfg.max_terms;
        }
        prev = b;
    }
    false
}

/// Power-series route. Fails with an accuracy error if the terms have not
/// dropped below `series_tol` within `max_terms`.
pub fn mittag_leffler_series(beta: f64, s: f64, cfg: &EvalConfig) -> Result<f64> {
    check_args(beta, s)?;
    if s == 0.0 {
        return Ok(1.0);
    }
    let ln_s = s.ln();
    let mut sum = 0.0;
    let mut past_peak = false;
    let mut prev = f64::INFINITY;
    for n in 0..cfg.max_terms {
        let mag = (n as f64 * ln_s - ln_gamma(beta * n as f64 + 1.0)).exp();
        let term = if n % 2 == 0 { mag } else { -mag };
        sum += term;
        if mag < prev {
            past_peak = true;
        }
        prev = mag;
        if past_peak && n > 0 && mag <= cfg.series_tol * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy(format!(
        "Mittag-Leffler series for beta = {beta}, s = {s} did not converge in {} terms",
        cfg.max_terms
    )))
}

/// Integral route, valid for `0 < β < 1` and `s > 0`.
pub fn mittag_leffler_integral(beta: f64, s: f64, cfg: &EvalConfig) -> Result<f64> {
    check_args(beta, s)?;
    if beta == 1.0 {
        return Err(Error::param("beta", beta, "integral route needs beta < 1"));
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let t = s.powf(1.0 / beta);
    let inv_beta = 1.0 / beta;
    let cos_bp = (beta * PI).cos();
    let sin_bp = (beta * PI).sin();
    // t * upper^(1/β) = CUTOFF
    let upper = CUTOFF.powf(beta) / s;

    let mut breaks: Vec<f64> = Vec::new();
    breaks.push(0.0);
    breaks.push(upper);
    let mut x = upper;
    for _ in 0..40 {
        x *= 0.5;
        breaks.push(x);
    }
    let mut x = 1.0;
    while x < upper {
        breaks.push(x);
        x *= 2.0;
    }
    let centre = -cos_bp;
    if centre > 0.0 {
        breaks.push(centre);
        for k in -3..6 {
            let d = sin_bp * 2f64.powi(k);
            breaks.push(centre - d);
            breaks.push(centre + d);
        }
    }
    breaks.retain(|b| *b >= 0.0 && *b <= upper);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();

    let gl = GaussLegendre::new(cfg.quadrature_points);
    let integral = gl.integrate_panels(&breaks, |u| {
        let denom = u * u + 2.0 * u * cos_bp + 1.0;
        (-t * u.powf(inv_beta)).exp() / denom
    });
    let value = sin_bp / (beta * PI) * integral;
    if !value.is_finite() {
        return Err(Error::Accuracy(format!(
            "Mittag-Leffler integral for beta = {beta}, s = {s} is not finite"
        )));
    }
    Ok(value)
}
