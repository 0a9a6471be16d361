#[allow(unused_imports)]
use num_traits::Float;

use super::gamma::gamma_ratio;
use crate::error::{Error, Result};
use crate::params::GreyParams;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// `∫ τ^δ M_β(τ) dτ = Γ(δ+1)/Γ(βδ+1)`, i.e. `E[Y_β^δ]`.
pub fn mwright_moment(beta: f64, delta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::param("beta", beta, "must lie in (0, 1]"));
    }
    if !(delta > -1.0) || !delta.is_finite() {
        return Err(Error::param("delta", delta, "must be finite and greater than -1"));
    }
    Ok(gamma_ratio(delta + 1.0, beta * delta + 1.0))
}

/// `E|Z|^q` for a standard normal `Z`: `2^{q/2} Γ((q+1)/2) / √π`.
pub fn normal_abs_moment(q: f64) -> Result<f64> {
    if !(q > -1.0) || !q.is_finite() {
        return Err(Error::param("q", q, "must be finite and greater than -1"));
    }
    if q == q.floor() && q <= 40.0 {
        // (q−1)!! for even q, 2^k k! √(2/π) for q = 2k + 1
        let k = q as u32;
        return Ok(if k.is_multiple_of(2) {
            (1..k).step_by(2).map(|j| j as f64).product()
        } else {
            let half = k / 2;
            let fact: f64 = (1..=half).map(|j| j as f64).product();
            2f64.powi(half as i32) * fact * (2.0 * FRAC_1_SQRT_PI * FRAC_1_SQRT_PI).sqrt()
        });
    }
    Ok(2f64.powf(q / 2.0) * super::gamma((q + 1.0) / 2.0) * FRAC_1_SQRT_PI)
}

/// `E|B_{α,β}(1)|^p = E[Y_β^{p/2}] · E|Z|^p`. Does not depend on `α`.
pub fn ggbm_abs_moment(beta: f64, p: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::param("p", p, "must be finite and positive"));
    }
    let mixing = if beta == 1.0 {
        1.0
    } else {
        mwright_moment(beta, p / 2.0)?
    };
    Ok(mixing * normal_abs_moment(p)?)
}

/// Critical variation limit `μ_{α,β} = E|B_{α,β}(1)|^{2/α}`.
pub fn theoretical_variation_limit(params: &GreyParams) -> f64 {
    // parameters are validated by construction
    ggbm_abs_moment(params.beta(), params.critical_exponent()).expect("GreyParams guarantees admissible arguments")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    #[test]
    fn mwright_moment_values() {
        assert_eq!(mwright_moment(1.0, 3.0).unwrap(), 1.0);
        for &b in &[0.1, 0.5, 0.9, 1.0] {
            assert_eq!(mwright_moment(b, 0.0).unwrap(), 1.0);
        }
        let two_over_sqrt_pi = 2.0 / core::f64::consts::PI.sqrt();
        assert!((mwright_moment(0.5, 1.0).unwrap() - two_over_sqrt_pi).abs() < 1e-14);
        assert!((two_over_sqrt_pi - core::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-15);
        assert!((mwright_moment(0.7, 2.0).unwrap() - 2.0 / gamma(2.4)).abs() < 1e-14);
        assert!(mwright_moment(0.5, -1.0).is_err());
    }

    #[test]
    fn normal_moments() {
        assert!((normal_abs_moment(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((normal_abs_moment(4.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((normal_abs_moment(1.0).unwrap() - (2.0 / core::f64::consts::PI).sqrt()).abs() < 1e-15);
        assert!(normal_abs_moment(-1.0).is_err());
    }

    #[test]
    fn ggbm_moments() {
        assert!((ggbm_abs_moment(1.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ggbm_abs_moment(0.5, 2.0).unwrap() - mwright_moment(0.5, 1.0).unwrap()).abs() < 1e-15);
        assert!(ggbm_abs_moment(0.5, 0.0).is_err());
    }

    #[test]
    fn variation_limits() {
        let mu = |a, b| theoretical_variation_limit(&GreyParams::new(a, b).unwrap());
        assert!((mu(1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((mu(1.0, 0.5) - core::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-14);
        // β = 1 reduces exactly to the fBm constant
        for &a in &[0.3, 0.8, 1.2, 1.7] {
            assert_eq!(mu(a, 1.0), normal_abs_moment(2.0 / a).unwrap());
        }
        // E|Z|^{5/3} = 2^{5/6} Γ(4/3) / √π
        assert!((mu(1.2, 1.0) - 0.897_7).abs() < 1e-3);
    }
}
