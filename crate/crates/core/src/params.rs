use crate::error::{Error, Result};

/// Parameters `(α, β)` of a generalized grey Brownian motion.
///
/// `0 < α < 2`, `0 < β ≤ 1`. The Gaussian factor of the process is an fBm
/// with Hurst index `H = α/2`; `β = 1` is plain fBm and `α = β = 1` is
/// Brownian motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreyParams {
    alpha: f64,
    beta: f64,
}

impl GreyParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_beta(beta)?;
        Ok(Self { alpha, beta })
    }

    /// Standard fBm with Hurst index `hurst` (β = 1).
    pub fn fbm(hurst: f64) -> Result<Self> {
        check_hurst(hurst)?;
        Self::new(2.0 * hurst, 1.0)
    }

    pub fn brownian() -> Self {
        Self { alpha: 1.0, beta: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn hurst(&self) -> f64 {
        self.alpha / 2.0
    }

    /// Critical exponent `p = 2/α` at which the dyadic variation has a finite,
    /// nonzero limit.
    pub fn critical_exponent(&self) -> f64 {
        2.0 / self.alpha
    }

    pub fn is_gaussian(&self) -> bool {
        self.beta == 1.0
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", alpha, "must lie in (0, 2)"))
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("beta", beta, "must lie in (0, 1]"))
    }
}

pub(crate) fn check_hurst(hurst: f64) -> Result<()> {
    if hurst.is_finite() && hurst > 0.0 && hurst < 1.0 {
        Ok(())
    } else {
        Err(Error::param("hurst", hurst, "must lie in (0, 1)"))
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, value, "must be finite and positive"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert!(GreyParams::new(1.0, 1.0).is_ok());
        assert!(GreyParams::new(1.999, 0.01).is_ok());
        assert!(GreyParams::new(0.0, 0.5).is_err());
        assert!(GreyParams::new(2.0, 0.5).is_err());
        assert!(GreyParams::new(1.0, 0.0).is_err());
        assert!(GreyParams::new(1.0, 1.0 + 1e-12).is_err());
        assert!(GreyParams::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn derived_quantities() {
        let p = GreyParams::new(1.2, 0.7).unwrap();
        assert_eq!(p.hurst(), 0.6);
        assert!((p.critical_exponent() - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(GreyParams::fbm(0.3).unwrap().alpha(), 0.6);
        assert!(GreyParams::brownian().is_gaussian());
    }
}
