//! Parameter estimation and two-candidate discrimination from one path.
//!
//! Under `(α, β)` the dyadic variation at `p = 2/α` settles near
//! `μ_{α,β} = Γ(1/α+1)/Γ(β/α+1) · E|Z|^{2/α}` while every other exponent
//! drifts to 0 or ∞. The discriminator compares the observed critical sums
//! with each candidate's `μ`; the estimators read `α` off the log-scaling
//! of `V_{p,n}` in `n` and `β` off the level of the critical sum.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::{check_alpha, check_positive, GreyParams};
use crate::sampling::{GridSpec, SamplePath};
use crate::special::{gamma, normal_abs_moment, theoretical_variation_limit, GAMMA_ARGMIN, GAMMA_MIN};
use crate::stats::fit_line;
use crate::variation::{p_variation_sum, variation_sequence};

/// Relative tolerance when comparing `Γ(β/α+1)` values.
pub const GAMMA_EQ_TOL: f64 = 1e-10;

/// Default relative-distance threshold of the discriminator.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Coarsest level used by regressions and drift checks.
pub const DEFAULT_MIN_LEVEL: u32 = 8;

/// A hypothesised law together with its critical exponent and limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub params: GreyParams,
    pub mu: f64,
    pub p_crit: f64,
}

impl Candidate {
    pub fn new(params: GreyParams) -> Self {
        Self {
            params,
            mu: theoretical_variation_limit(&params),
            p_crit: params.critical_exponent(),
        }
    }
}

/// Which clause separates two candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// `α ≠ α′`: the critical exponents differ.
    DifferentAlpha,
    /// Same `α`, `Γ(β/α+1) ≠ Γ(β′/α+1)`: the critical limits differ.
    DifferentGamma,
    /// Same `α` and equal Γ values: not separable by this method.
    NotSeparable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distinguishability {
    pub distinguishable: bool,
    pub clause: Clause,
    /// Both `β/α+1` and `β′/α+1` lie on the same monotone branch of Γ
    /// (both `≤ κ` or both `≥ κ`), in which case `β ≠ β′` alone already
    /// guarantees different Γ values.
    pub common_monotone_region: bool,
    pub reason: String,
}

pub fn distinguishability_check(c1: &Candidate, c2: &Candidate) -> Distinguishability {
    let (a1, b1) = (c1.params.alpha(), c1.params.beta());
    let (a2, b2) = (c2.params.alpha(), c2.params.beta());
    let x1 = b1 / a1 + 1.0;
    let x2 = b2 / a2 + 1.0;
    let common = (x1 <= GAMMA_ARGMIN && x2 <= GAMMA_ARGMIN) || (x1 >= GAMMA_ARGMIN && x2 >= GAMMA_ARGMIN);
    if a1 != a2 {
        return Distinguishability {
            distinguishable: true,
            clause: Clause::DifferentAlpha,
            common_monotone_region: common,
            reason: format!("alpha differs ({a1} vs {a2}): critical exponents 2/alpha differ"),
        };
    }
    let g1 = gamma(x1);
    let g2 = gamma(x2);
    let differs = (g1 - g2).abs() > GAMMA_EQ_TOL * g1.abs().max(g2.abs());
    Distinguishability {
        distinguishable: differs,
        clause: if differs {
            Clause::DifferentGamma
        } else {
            Clause::NotSeparable
        },
        common_monotone_region: common,
        reason: if differs {
            format!("same alpha = {a1}; Gamma(beta/alpha + 1) differs ({g1} vs {g2})")
        } else {
            format!(
                "same alpha = {a1} and Gamma(beta/alpha + 1) agrees ({g1} vs {g2}); not distinguishable by this method"
            )
        },
    }
}

fn dyadic_level(path: &SamplePath, what: &str) -> Result<u32> {
    match path.grid() {
        GridSpec::Dyadic { level } => Ok(level),
        GridSpec::Uniform { .. } => Err(Error::Input(format!("{what} needs a dyadic path"))),
    }
}

/// Result of the log-regression estimator of `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimate {
    pub alpha: f64,
    pub std_error: f64,
    /// Least-squares slope of `log₂ V_{p,n}` against `n`.
    pub slope: f64,
    /// Set when the estimate falls outside `(0, 2)`; the value is reported
    /// as computed, not projected.
    pub boundary: bool,
    pub levels: (u32, u32),
}

/// `α̂ = 2(1 − slope)/p` from the slope of `log₂ V_{p,n}` over `levels`.
pub fn estimate_alpha(path: &SamplePath, p: f64, levels: RangeInclusive<u32>) -> Result<AlphaEstimate> {
    check_positive("p", p)?;
    let top = dyadic_level(path, "alpha estimation")?;
    let (lo, hi) = (*levels.start(), *levels.end());
    if hi > top {
        return Err(Error::Input(format!("level {hi} exceeds the path level {top}")));
    }
    if hi < lo + 3 {
        return Err(Error::Input(format!(
            "alpha regression needs at least four levels, got {lo}..={hi}"
        )));
    }
    let recs = variation_sequence(path, p, levels)?;
    if recs.iter().any(|r| !(r.value > 0.0)) {
        return Err(Error::Estimation(
            "variation sum vanishes; log-regression undefined".into(),
        ));
    }
    let xs: Vec<f64> = recs.iter().map(|r| r.level_or_n as f64).collect();
    let ys: Vec<f64> = recs.iter().map(|r| r.value.log2()).collect();
    let fit =
        fit_line(&xs, &ys).ok_or_else(|| Error::Estimation("degenerate regression over the level range".into()))?;
    let alpha = 2.0 * (1.0 - fit.slope) / p;
    Ok(AlphaEstimate {
        alpha,
        std_error: 2.0 * fit.slope_se / p,
        slope: fit.slope,
        boundary: !(alpha > 0.0 && alpha < 2.0),
        levels: (lo, hi),
    })
}

/// Monotone branch of Γ used to invert `Γ(β/α + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaRegion {
    /// `β/α + 1 ∈ (1, κ]`, i.e. `β ∈ (0, α(κ−1)]`; Γ decreasing.
    #[default]
    Low,
    /// `β/α + 1 ∈ [κ, 1/α + 1]`, i.e. `β ∈ [α(κ−1), 1]`; Γ increasing.
    High,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaEstimate {
    pub beta: f64,
    /// Set when the target Γ value lies outside the region's range and the
    /// estimate is the region endpoint.
    pub boundary: bool,
    pub target_gamma: f64,
    /// Observed critical variation `V̂ = V_{2/α}` at the path level.
    pub variation: f64,
    pub region: GammaRegion,
}

/// Solves `Γ(β̂/α + 1) = Γ(1/α + 1) · E|Z|^{2/α} / V̂` on the chosen branch.
pub fn estimate_beta(path: &SamplePath, alpha: f64, region: GammaRegion) -> Result<BetaEstimate> {
    check_alpha(alpha)?;
    dyadic_level(path, "beta estimation")?;
    let v = p_variation_sum(path, 2.0 / alpha)?.value;
    if !(v > 0.0) {
        return Err(Error::Input(
            "critical variation is zero; beta is not identifiable".into(),
        ));
    }
    let target = gamma(1.0 / alpha + 1.0) * normal_abs_moment(2.0 / alpha)? / v;
    let (beta, boundary) = invert_gamma(alpha, target, region)?;
    Ok(BetaEstimate {
        beta,
        boundary,
        target_gamma: target,
        variation: v,
        region,
    })
}

/// Maps a target `Γ(β/α + 1)` back to `β` on one branch.
pub(crate) fn invert_gamma(alpha: f64, target: f64, region: GammaRegion) -> Result<(f64, bool)> {
    if !(target >= GAMMA_MIN) {
        return Err(Error::Estimation(format!(
            "target Gamma value {target} is below the minimum {GAMMA_MIN} of Gamma; no solution"
        )));
    }
    let (lo, hi) = match region {
        GammaRegion::Low => (1.0, GAMMA_ARGMIN),
        GammaRegion::High => (GAMMA_ARGMIN, 1.0 / alpha + 1.0),
    };
    let (g_lo, g_hi) = (gamma(lo), gamma(hi));
    let to_beta = |x: f64| alpha * (x - 1.0);
    match region {
        GammaRegion::Low if target >= g_lo => return Ok((to_beta(lo), true)),
        GammaRegion::High if target >= g_hi => return Ok((to_beta(hi), true)),
        _ => {}
    }
    // Γ - target changes sign on [lo, hi]
    let decreasing = region == GammaRegion::Low;
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let above = gamma(m) > target;
        if above == decreasing {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-15 {
            break;
        }
    }
    Ok((to_beta(0.5 * (a + b)), false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionLabel {
    First,
    Second,
    Inconclusive,
}

impl DecisionLabel {
    pub fn mirrored(self) -> Self {
        match self {
            Self::First => Self::Second,
            Self::Second => Self::First,
            Self::Inconclusive => Self::Inconclusive,
        }
    }
}

/// Drift of the critical sums across levels, used when `α ≠ α′`.
///
/// Under the larger-`α` law the smaller-`α` candidate's critical sum must
/// fall towards 0; under the smaller-`α` law the larger-`α` candidate's
/// critical sum must grow without bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftCheck {
    /// Slope of `log₂ V` across levels at the first candidate's exponent.
    pub slope_first: f64,
    /// Same at the second candidate's exponent.
    pub slope_second: f64,
    pub levels: (u32, u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub label: DecisionLabel,
    pub v1: f64,
    pub v2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub d1: f64,
    pub d2: f64,
    pub threshold: f64,
    pub level: u32,
    pub drift: Option<DriftCheck>,
    /// Whether the drift check agreed with the winning candidate; `None`
    /// when it does not apply.
    pub drift_consistent: Option<bool>,
}

/// Nearest-limit rule: label the candidate whose `μ` is relatively closest
/// to its observed critical sum, provided that distance is under
/// `threshold`. For different `α`, the winner must also be backed by the
/// drift of the other candidate's critical sum.
pub fn discriminate(path: &SamplePath, c1: &Candidate, c2: &Candidate, threshold: f64) -> Result<Decision> {
    check_positive("threshold", threshold)?;
    let check = distinguishability_check(c1, c2);
    if !check.distinguishable {
        return Err(Error::Precondition(check.reason));
    }
    let level = dyadic_level(path, "discrimination")?;
    if level < DEFAULT_MIN_LEVEL {
        return Err(Error::Input(format!(
            "discrimination needs dyadic level >= {DEFAULT_MIN_LEVEL}, got {level}"
        )));
    }
    let v1 = p_variation_sum(path, c1.p_crit)?.value;
    let v2 = p_variation_sum(path, c2.p_crit)?.value;
    let d1 = (v1 - c1.mu).abs() / c1.mu;
    let d2 = (v2 - c2.mu).abs() / c2.mu;

    let mut label = if d1 < threshold && d1 < d2 {
        DecisionLabel::First
    } else if d2 < threshold && d2 < d1 {
        DecisionLabel::Second
    } else {
        DecisionLabel::Inconclusive
    };

    let (drift, drift_consistent) = if check.clause == Clause::DifferentAlpha {
        let levels = DEFAULT_MIN_LEVEL..=level;
        let slope = |p: f64| -> Result<f64> {
            let recs = variation_sequence(path, p, levels.clone())?;
            let xs: Vec<f64> = recs.iter().map(|r| r.level_or_n as f64).collect();
            let ys: Vec<f64> = recs.iter().map(|r| r.value.max(f64::MIN_POSITIVE).log2()).collect();
            Ok(fit_line(&xs, &ys).map(|f| f.slope).unwrap_or(0.0))
        };
        let drift = DriftCheck {
            slope_first: slope(c1.p_crit)?,
            slope_second: slope(c2.p_crit)?,
            levels: (DEFAULT_MIN_LEVEL, level),
        };
        let first_is_larger = c1.params.alpha() > c2.params.alpha();
        // slope of the loser's critical sum: negative if the winner has the
        // larger alpha, positive otherwise
        let consistent = match label {
            DecisionLabel::First => Some(if first_is_larger {
                drift.slope_second < 0.0
            } else {
                drift.slope_second > 0.0
            }),
            DecisionLabel::Second => Some(if first_is_larger {
                drift.slope_first > 0.0
            } else {
                drift.slope_first < 0.0
            }),
            DecisionLabel::Inconclusive => None,
        };
        if consistent == Some(false) {
            label = DecisionLabel::Inconclusive;
        }
        (Some(drift), consistent)
    } else {
        (None, None)
    };

    Ok(Decision {
        label,
        v1,
        v2,
        mu1: c1.mu,
        mu2: c2.mu,
        d1,
        d2,
        threshold,
        level,
        drift,
        drift_consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSpec;
    use crate::sampling::sample_ggbm;

    fn cand(a: f64, b: f64) -> Candidate {
        Candidate::new(GreyParams::new(a, b).unwrap())
    }

    #[test]
    fn candidate_fields() {
        let c = cand(1.0, 0.5);
        assert!((c.mu - core::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-14);
        assert_eq!(c.p_crit, 2.0);
    }

    #[test]
    fn distinguishability_examples() {
        let r = distinguishability_check(&cand(1.2, 0.7), &cand(1.6, 0.7));
        assert!(r.distinguishable);
        assert_eq!(r.clause, Clause::DifferentAlpha);

        let r = distinguishability_check(&cand(1.0, 0.5), &cand(1.0, 0.5));
        assert!(!r.distinguishable);
        assert_eq!(r.clause, Clause::NotSeparable);

        // Γ(1.3) = 0.897 47, Γ(1.9) = 0.961 77; 1.3 < κ < 1.9
        let r = distinguishability_check(&cand(1.0, 0.3), &cand(1.0, 0.9));
        assert!(r.distinguishable);
        assert_eq!(r.clause, Clause::DifferentGamma);
        assert!(!r.common_monotone_region);
        assert!(distinguishability_check(&cand(1.0, 0.1), &cand(1.0, 0.3)).common_monotone_region);
    }

    #[test]
    fn gamma_collision_is_not_separable() {
        // find β' > α(κ−1) with Γ(β'/α+1) = Γ(β/α+1) for β = 0.2, α = 1
        let target = gamma(1.2);
        let (b2, boundary) = invert_gamma(1.0, target, GammaRegion::High).unwrap();
        assert!(!boundary);
        let r = distinguishability_check(&cand(1.0, 0.2), &cand(1.0, b2));
        assert!(!r.distinguishable, "{}", r.reason);
    }

    #[test]
    fn alpha_from_linear_path() {
        let path = SamplePath::from_fn(GridSpec::dyadic(12), |t| t).unwrap();
        let est = estimate_alpha(&path, 2.0, 4..=12).unwrap();
        assert!((est.slope + 1.0).abs() < 1e-12);
        assert!((est.alpha - 2.0).abs() < 1e-12);
        assert!(est.boundary);
    }

    #[test]
    fn alpha_errors() {
        let flat = SamplePath::from_fn(GridSpec::dyadic(10), |_| 0.0).unwrap();
        assert!(matches!(estimate_alpha(&flat, 1.0, 4..=10), Err(Error::Estimation(_))));
        let path = SamplePath::from_fn(GridSpec::dyadic(10), |t| t).unwrap();
        assert!(estimate_alpha(&path, 1.0, 8..=10).is_err());
        assert!(estimate_alpha(&path, 1.0, 4..=11).is_err());
    }

    #[test]
    fn alpha_is_scale_invariant() {
        let p = GreyParams::new(1.3, 0.4).unwrap();
        let path = sample_ggbm(p, GridSpec::dyadic(12), RngSpec::new(9, 0)).unwrap();
        let a = estimate_alpha(&path, 1.0, 8..=12).unwrap().alpha;
        let b = estimate_alpha(&path.scaled(7.5).unwrap(), 1.0, 8..=12).unwrap().alpha;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn beta_inversion() {
        // exact critical sum ⇒ exact β
        for &(alpha, beta, region) in &[
            (1.0, 0.3, GammaRegion::Low),
            (1.4, 0.6, GammaRegion::Low),
            (1.0, 0.9, GammaRegion::High),
        ] {
            let target = gamma(beta / alpha + 1.0);
            let (b, boundary) = invert_gamma(alpha, target, region).unwrap();
            assert!(!boundary);
            assert!((b - beta).abs() < 1e-8, "{alpha} {beta}: {b}");
        }
        assert!(matches!(
            invert_gamma(1.0, 0.5, GammaRegion::Low),
            Err(Error::Estimation(_))
        ));
        assert_eq!(invert_gamma(1.0, 1.2, GammaRegion::Low).unwrap(), (0.0, true));
        assert_eq!(invert_gamma(1.0, 1.2, GammaRegion::High).unwrap(), (1.0, true));
    }

    #[test]
    fn beta_from_fbm_path_is_near_one() {
        let alpha = 1.2;
        let p = GreyParams::new(alpha, 1.0).unwrap();
        let path = sample_ggbm(p, GridSpec::dyadic(16), RngSpec::new(5, 5)).unwrap();
        let est = estimate_beta(&path, alpha, GammaRegion::High).unwrap();
        assert!((est.beta - 1.0).abs() < 0.1, "{est:?}");
    }

    #[test]
    fn discriminate_precondition_and_symmetry() {
        let path = sample_ggbm(GreyParams::brownian(), GridSpec::dyadic(12), RngSpec::new(1, 0)).unwrap();
        let c = cand(1.0, 1.0);
        assert!(matches!(discriminate(&path, &c, &c, 0.5), Err(Error::Precondition(_))));
        let other = cand(1.6, 1.0);
        let d12 = discriminate(&path, &c, &other, 0.5).unwrap();
        let d21 = discriminate(&path, &other, &c, 0.5).unwrap();
        assert_eq!(d12.label, DecisionLabel::First);
        assert_eq!(d21.label, d12.label.mirrored());
        assert_eq!((d12.v1, d12.v2, d12.d1, d12.d2), (d21.v2, d21.v1, d21.d2, d21.d1));
        assert_eq!(d12.drift_consistent, Some(true));
        let short = sample_ggbm(GreyParams::brownian(), GridSpec::dyadic(6), RngSpec::new(1, 0)).unwrap();
        assert!(discriminate(&short, &c, &other, 0.5).is_err());
    }
}
