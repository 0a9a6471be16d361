//! p-variation sums along a grid and the regime they converge to.
//!
//! For a ggBm with parameters `(α, β)` the dyadic sums
//! `V_{p,n} = Σ_j |x(j/2ⁿ) − x((j−1)/2ⁿ)|^p` go to 0 when `pα/2 > 1`,
//! blow up when `pα/2 < 1`, and settle at a finite positive level at the
//! critical exponent `p = 2/α`.

use alloc::format;
use alloc::vec::Vec;
use core::ops::RangeInclusive;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::{check_alpha, check_positive, GreyParams};
use crate::sampling::{GridSpec, SamplePath};
use crate::special::theoretical_variation_limit;

/// Tolerance on `pα/2 − 1` for calling an exponent critical.
pub const CRITICAL_TOL: f64 = 1e-12;

/// Default growth ratio between the coarsest and finest level that counts
/// as evidence of a vanishing or exploding sum.
pub const DEFAULT_GROWTH_RATIO: f64 = 4.0;

/// One variation sum: grid resolution (dyadic level or uniform `n`),
/// exponent and value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationRecord {
    pub level_or_n: u32,
    pub p: f64,
    pub value: f64,
}

/// Limit of `V_{p,n}` as the grid is refined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrichotomyLabel {
    Zero,
    Infinite,
    CriticalFinite(f64),
}

fn abs_pow_sum<I: Iterator<Item = f64>>(increments: I, p: f64) -> f64 {
    if p == 2.0 {
        increments.map(|d| d * d).sum()
    } else if p == 1.0 {
        increments.map(|d| d.abs()).sum()
    } else {
        increments.map(|d| d.abs().powf(p)).sum()
    }
}

/// `Σ |x(t_j) − x(t_{j−1})|^p` over consecutive grid points.
pub fn p_variation_sum(path: &SamplePath, p: f64) -> Result<VariationRecord> {
    check_positive("p", p)?;
    if path.len() < 2 {
        return Err(Error::Input("p-variation needs at least two grid points".into()));
    }
    Ok(VariationRecord {
        level_or_n: path.grid().resolution(),
        p,
        value: abs_pow_sum(path.increments(), p),
    })
}

/// `Z_{n,p} = n^{pα/2 − 1} V_{p,n}` on a uniform `n`-grid.
pub fn renormalized_statistic(path: &SamplePath, p: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let n = match path.grid() {
        GridSpec::Uniform { n } => n as f64,
        GridSpec::Dyadic { .. } => {
            return Err(Error::Input(
                "renormalized statistic is defined on uniform grids; got a dyadic path".into(),
            ))
        }
    };
    let v = p_variation_sum(path, p)?.value;
    let exponent = p * alpha / 2.0 - 1.0;
    let scale = if exponent.abs() <= CRITICAL_TOL {
        1.0
    } else {
        n.powf(exponent)
    };
    Ok(scale * v)
}

/// Limit regime of `V_{p,n}` for a ggBm with parameters `(α, β)`.
pub fn variation_trichotomy(alpha: f64, beta: f64, p: f64) -> Result<TrichotomyLabel> {
    let params = GreyParams::new(alpha, beta)?;
    check_positive("p", p)?;
    let excess = p * alpha / 2.0 - 1.0;
    Ok(if excess.abs() <= CRITICAL_TOL {
        TrichotomyLabel::CriticalFinite(theoretical_variation_limit(&params))
    } else if excess > 0.0 {
        TrichotomyLabel::Zero
    } else {
        TrichotomyLabel::Infinite
    })
}

/// Variation sums of a level-`N` dyadic path at each level in `levels`,
/// coarsening by keeping every `2^{N−n}`-th point so the partitions stay
/// nested.
pub fn variation_sequence(path: &SamplePath, p: f64, levels: RangeInclusive<u32>) -> Result<Vec<VariationRecord>> {
    check_positive("p", p)?;
    let top = match path.grid() {
        GridSpec::Dyadic { level } => level,
        GridSpec::Uniform { .. } => return Err(Error::Input("variation sequence needs a dyadic path".into())),
    };
    if *levels.start() < 1 || levels.is_empty() {
        return Err(Error::Input(format!(
            "levels {}..={} must be a nonempty range starting at 1 or above",
            levels.start(),
            levels.end()
        )));
    }
    if *levels.end() > top {
        return Err(Error::Input(format!(
            "level {} exceeds the path level {top}",
            levels.end()
        )));
    }
    let values = path.values();
    Ok(levels
        .map(|n| {
            let stride = 1usize << (top - n);
            let coarse = values.iter().step_by(stride).copied().collect::<Vec<_>>();
            let value = abs_pow_sum(coarse.windows(2).map(|w| w[1] - w[0]), p);
            VariationRecord {
                level_or_n: n,
                p,
                value,
            }
        })
        .collect())
}

/// The two factors of `Σ|Δ|^q ≤ (max|Δ|)^{q−p} · Σ|Δ|^p`.
pub fn hoelder_dominance_bound(path: &SamplePath, p: f64, q: f64) -> Result<(f64, f64)> {
    check_positive("p", p)?;
    if !(q > p) || !q.is_finite() {
        return Err(Error::param("q", q, "must exceed p"));
    }
    let max_inc = path.increments().fold(0.0f64, |m, d| m.max(d.abs()));
    let sup_factor = if max_inc == 0.0 { 0.0 } else { max_inc.powf(q - p) };
    Ok((sup_factor, p_variation_sum(path, p)?.value))
}

/// What a finite run of variation sums suggests about their limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeEvidence {
    Vanishing,
    Exploding,
    Stable,
}

/// Compares the finest against the coarsest record: a drop by more than
/// `ratio` is `Vanishing`, a rise by more than `ratio` is `Exploding`.
pub fn regime_evidence(records: &[VariationRecord], ratio: f64) -> Result<RegimeEvidence> {
    check_positive("ratio", ratio)?;
    let (first, last) = match (records.first(), records.last()) {
        (Some(f), Some(l)) if records.len() >= 2 => (f.value, l.value),
        _ => return Err(Error::Input("need at least two variation records".into())),
    };
    Ok(if last > ratio * first {
        RegimeEvidence::Exploding
    } else if last * ratio < first {
        RegimeEvidence::Vanishing
    } else {
        RegimeEvidence::Stable
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSpec;
    use crate::sampling::sample_ggbm;
    use proptest::prelude::*;

    fn linear(level: u32) -> SamplePath {
        SamplePath::from_fn(GridSpec::dyadic(level), |t| t).unwrap()
    }

    #[test]
    fn linear_path_sums() {
        for n in 0..12 {
            assert_eq!(p_variation_sum(&linear(n), 1.0).unwrap().value, 1.0);
            assert_eq!(p_variation_sum(&linear(n), 2.0).unwrap().value, 0.5f64.powi(n as i32));
        }
        let flat = SamplePath::from_fn(GridSpec::dyadic(5), |_| 0.0).unwrap();
        assert_eq!(p_variation_sum(&flat, 0.7).unwrap().value, 0.0);
        assert!(p_variation_sum(&flat, 0.0).is_err());
    }

    #[test]
    fn renormalized() {
        let path = SamplePath::from_fn(GridSpec::uniform(10), |t| t).unwrap();
        let z = renormalized_statistic(&path, 2.0, 1.0).unwrap();
        assert!((z - 0.1).abs() < 1e-15);
        let z = renormalized_statistic(&path, 2.0 / 1.3, 1.3).unwrap();
        let v = p_variation_sum(&path, 2.0 / 1.3).unwrap().value;
        assert_eq!(z, v);
        assert!(renormalized_statistic(&linear(3), 2.0, 1.0).is_err());
    }

    #[test]
    fn trichotomy() {
        assert_eq!(variation_trichotomy(1.0, 1.0, 3.0).unwrap(), TrichotomyLabel::Zero);
        assert_eq!(variation_trichotomy(1.0, 1.0, 1.0).unwrap(), TrichotomyLabel::Infinite);
        assert_eq!(
            variation_trichotomy(1.0, 1.0, 2.0).unwrap(),
            TrichotomyLabel::CriticalFinite(1.0)
        );
        for &a in &[0.3, 0.9, 1.2, 1.7] {
            for &b in &[0.2, 0.7, 1.0] {
                let p = 2.0 / a;
                assert!(matches!(
                    variation_trichotomy(a, b, p).unwrap(),
                    TrichotomyLabel::CriticalFinite(mu) if mu > 0.0
                ));
                assert_eq!(variation_trichotomy(a, b, p + 0.01).unwrap(), TrichotomyLabel::Zero);
                assert_eq!(variation_trichotomy(a, b, p - 0.01).unwrap(), TrichotomyLabel::Infinite);
            }
        }
        assert!(variation_trichotomy(2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn sequences() {
        let recs = variation_sequence(&linear(6), 2.0, 1..=4).unwrap();
        let vals: Vec<f64> = recs.iter().map(|r| r.value).collect();
        assert_eq!(vals, [0.5, 0.25, 0.125, 0.0625]);
        let path = sample_ggbm(
            GreyParams::new(1.3, 0.6).unwrap(),
            GridSpec::dyadic(9),
            RngSpec::new(2, 0),
        )
        .unwrap();
        let top = variation_sequence(&path, 1.4, 9..=9).unwrap()[0];
        assert_eq!(top.value, p_variation_sum(&path, 1.4).unwrap().value);
        assert!(variation_sequence(&path, 1.0, 3..=10).is_err());
        assert!(variation_sequence(&path, 1.0, 0..=3).is_err());
    }

    #[test]
    fn dominance_examples() {
        let n = 7;
        let (sup, var) = hoelder_dominance_bound(&linear(n), 1.0, 2.0).unwrap();
        assert_eq!(sup, 0.5f64.powi(n as i32));
        assert_eq!(var, 1.0);
        assert_eq!(sup * var, p_variation_sum(&linear(n), 2.0).unwrap().value);
        let flat = SamplePath::from_fn(GridSpec::dyadic(4), |_| 0.0).unwrap();
        assert_eq!(hoelder_dominance_bound(&flat, 1.0, 2.0).unwrap(), (0.0, 0.0));
        assert!(hoelder_dominance_bound(&flat, 2.0, 2.0).is_err());
    }

    #[test]
    fn evidence() {
        let rec = |v| VariationRecord {
            level_or_n: 0,
            p: 1.0,
            value: v,
        };
        assert_eq!(
            regime_evidence(&[rec(1.0), rec(5.0)], 4.0).unwrap(),
            RegimeEvidence::Exploding
        );
        assert_eq!(
            regime_evidence(&[rec(1.0), rec(0.2)], 4.0).unwrap(),
            RegimeEvidence::Vanishing
        );
        assert_eq!(
            regime_evidence(&[rec(1.0), rec(2.0)], 4.0).unwrap(),
            RegimeEvidence::Stable
        );
        assert!(regime_evidence(&[rec(1.0)], 4.0).is_err());
    }

    proptest! {
        #[test]
        fn dominance_inequality_holds(seed in any::<u64>(), alpha in 0.2f64..1.9, beta in 0.1f64..1.0,
                                      p in 0.3f64..3.0, dq in 0.01f64..3.0) {
            let params = GreyParams::new(alpha, beta).unwrap();
            let path = sample_ggbm(params, GridSpec::dyadic(7), RngSpec::new(seed, 0)).unwrap();
            let q = p + dq;
            let (sup, var) = hoelder_dominance_bound(&path, p, q).unwrap();
            let vq = p_variation_sum(&path, q).unwrap().value;
            prop_assert!(vq <= sup * var * (1.0 + 1e-12));
        }

        #[test]
        fn sum_is_nonnegative_and_scales(seed in any::<u64>(), p in 0.2f64..4.0, c in 0.1f64..10.0) {
            let path = sample_ggbm(GreyParams::new(1.1, 0.8).unwrap(), GridSpec::dyadic(6), RngSpec::new(seed, 1)).unwrap();
            let v = p_variation_sum(&path, p).unwrap().value;
            prop_assert!(v > 0.0);
            let vc = p_variation_sum(&path.scaled(c).unwrap(), p).unwrap().value;
            prop_assert!((vc - c.powf(p) * v).abs() <= 1e-10 * vc.max(1.0));
        }
    }
}
