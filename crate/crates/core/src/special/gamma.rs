//! Gamma function and friends.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Location of the minimum of Γ on `(0, ∞)`. Γ is strictly decreasing on
/// `(0, κ]` and strictly increasing on `[κ, ∞)`.
pub const GAMMA_ARGMIN: f64 = 1.461_632_144_968_362_3;

/// `Γ(κ)`, the global minimum of Γ on the positive axis.
pub const GAMMA_MIN: f64 = 0.885_603_194_410_888_7;

/// `sin(πx)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // reduce to r in [-1, 1], sin(πx) = ± sin(πr)
    let n = x.round();
    let r = x - n;
    if r == 0.0 {
        return 0.0;
    }
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Γ(x) for real `x`. Poles (non-positive integers) return NaN.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    libm::tgamma(x)
}

/// ln |Γ(x)|. Poles return +∞.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// `1/Γ(x)`, an entire function: zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1 - x) / π
        let s = sin_pi(x);
        if s == 0.0 {
            return 0.0;
        }
        let lg = ln_gamma(1.0 - x);
        return s.signum() * (s.abs().ln() + lg - PI.ln()).exp();
    }
    if x > 171.0 {
        return (-ln_gamma(x)).exp();
    }
    1.0 / gamma(x)
}

/// `Γ(a)/Γ(b)` for positive arguments, computed in log space when the
/// factors would overflow.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    if a == b {
        return 1.0;
    }
    if a < 150.0 && b < 150.0 {
        gamma(a) / gamma(b)
    } else {
        (ln_gamma(a) - ln_gamma(b)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn factorials() {
        let mut f = 1.0f64;
        for n in 1..=25u32 {
            f *= n as f64;
            let g = gamma(n as f64 + 1.0);
            assert!(rel(g, f) < 1e-13, "Γ({}) = {g} vs {f}", n + 1);
        }
    }

    #[test]
    fn half_integers() {
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        let sqrt_pi = PI.sqrt();
        let mut expected = sqrt_pi;
        for n in 0..29u32 {
            let x = n as f64 + 0.5;
            assert!(rel(gamma(x), expected) < 1e-13, "Γ({x})");
            expected *= x;
        }
    }

    #[test]
    fn small_and_negative_arguments() {
        // Γ(x)Γ(1-x) = π / sin(πx)
        for &x in &[0.013, 0.1, 0.25, 0.37, 0.49] {
            let lhs = gamma(x) * gamma(1.0 - x);
            assert!(rel(lhs, PI / (PI * x).sin()) < 1e-13);
        }
        assert!(rel(gamma(-0.5), -2.0 * PI.sqrt()) < 1e-13);
        assert!(gamma(-3.0).is_nan());
        assert_eq!(recip_gamma(-3.0), 0.0);
        assert_eq!(recip_gamma(0.0), 0.0);
        assert!(rel(recip_gamma(-0.5), -0.5 / PI.sqrt()) < 1e-13);
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.3, 1.7, 5.5, 19.9, 20.1, 29.5, 100.0] {
            assert!((ln_gamma(x) - gamma(x).ln()).abs() < 1e-12 * gamma(x).ln().abs().max(1.0));
        }
        // Stirling check at a large argument
        let x = 1000.0f64;
        let stirling = (x - 0.5) * x.ln() - x + LN_SQRT_2PI + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x * x);
        assert!((ln_gamma(x) - stirling).abs() < 1e-10);
    }

    #[test]
    fn minimum_location() {
        // golden-section search on Γ as an independent check of κ
        let (mut a, mut b) = (1.2f64, 1.8f64);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if gamma(c) < gamma(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let kappa = 0.5 * (a + b);
        assert!((kappa - GAMMA_ARGMIN).abs() < 1e-6);
        assert!(rel(gamma(GAMMA_ARGMIN), GAMMA_MIN) < 1e-14);
    }
}
