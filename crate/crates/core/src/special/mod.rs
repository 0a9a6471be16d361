//! Special functions behind the ggBm laws.
//!
//! `E_β(−s)` is the characteristic function of a unit-variance ggBm
//! increment (up to the `θ²/2` scaling) and the Laplace transform of the
//! M-Wright density `M_β`; the Gamma-ratio moments give the critical
//! variation limits used by the estimators and the discriminator.

mod gamma;
mod mittag_leffler;
mod moments;
mod mwright;
pub mod quadrature;

pub use gamma::{gamma, gamma_ratio, ln_gamma, recip_gamma, sin_pi, GAMMA_ARGMIN, GAMMA_MIN};
pub use mittag_leffler::{mittag_leffler, mittag_leffler_integral, mittag_leffler_series, mittag_leffler_with};
pub use moments::{ggbm_abs_moment, mwright_moment, normal_abs_moment, theoretical_variation_limit};
pub use mwright::{kanter_weight, mwright_integral, mwright_pdf, mwright_pdf_with, mwright_series};

use crate::error::{Error, Result};

/// Accuracy controls for the series and quadrature routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Stop summing once a term falls below this magnitude (relative to the
    /// partial sum).
    pub series_tol: f64,
    /// Hard cap on series terms; hitting it is an accuracy error.
    pub max_terms: usize,
    /// Gauss–Legendre order used on every quadrature panel.
    pub quadrature_points: usize,
    /// Largest `s` at which `E_β(−s)` may use the power series.
    pub series_switch: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            series_tol: 1e-15,
            max_terms: 200,
            quadrature_points: 24,
            series_switch: 5.0,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_tol > 0.0) {
            return Err(Error::param("series_tol", self.series_tol, "must be positive"));
        }
        if self.max_terms < 1 {
            return Err(Error::param("max_terms", self.max_terms as f64, "must be at least 1"));
        }
        if self.quadrature_points < 16 {
            return Err(Error::param(
                "quadrature_points",
                self.quadrature_points as f64,
                "must be at least 16",
            ));
        }
        if !(self.series_switch >= 0.0) {
            return Err(Error::param("series_switch", self.series_switch, "must be nonnegative"));
        }
        Ok(())
    }
}

/// Largest log10 magnitude of an alternating-series term we accept before
/// switching to the integral route. Cancellation costs about this many
/// digits.
pub(crate) const MAX_SERIES_PEAK_LOG10: f64 = 2.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_invariants() {
        assert!(EvalConfig::default().validate().is_ok());
        let bad = EvalConfig {
            quadrature_points: 8,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = EvalConfig {
            series_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = EvalConfig {
            max_terms: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
