//! Monte Carlo checks of the samplers and identity checks of the special
//! functions against independent test-side oracles.

use greyvar_core::sampling::{fbm_covariance, CholeskyFbm, GgbmSampler};
use greyvar_core::special::{gamma, mittag_leffler, mwright_pdf, normal_abs_moment};
use greyvar_core::stats::{ks_two_sample, Moments};
use greyvar_core::validation::{
    check_fbm_samplers_agree, check_mwright_sampler, check_stable_laplace, laplace_identity, moment_identity, Z_POLICY,
};
use greyvar_core::variation::renormalized_statistic;
use greyvar_core::{GreyParams, GridSpec, RngSpec, Sequential};
use rand_distr::{Distribution, StandardNormal};

fn z(m: &Moments, target: f64) -> f64 {
    (m.mean() - target) / m.std_error()
}

#[test]
fn stable_laplace_transform() {
    for (k, beta) in [0.3, 0.5, 0.8].into_iter().enumerate() {
        let rows =
            check_stable_laplace(beta, &[0.5, 1.0, 2.0], 200_000, RngSpec::new(11, k as u64), &Sequential).unwrap();
        for r in rows {
            assert_eq!(r.theory, (-r.s.powf(beta)).exp());
            assert!(r.pass, "beta {beta} s {}: z = {}", r.s, r.z);
        }
    }
}

#[test]
fn mwright_sampler_moments() {
    for (k, beta) in [0.3, 0.5, 0.8].into_iter().enumerate() {
        let rows =
            check_mwright_sampler(beta, &[0.5, 1.0, 2.0], 200_000, RngSpec::new(12, k as u64), &Sequential).unwrap();
        for r in rows {
            let oracle = libm::tgamma(r.delta + 1.0) / libm::tgamma(beta * r.delta + 1.0);
            assert!((r.theory - oracle).abs() < 1e-12 * oracle);
            assert!(r.pass, "beta {beta} delta {}: z = {}", r.delta, r.z);
        }
    }
}

#[test]
fn cholesky_covariance() {
    let grid = GridSpec::dyadic(6);
    let (i, j) = (grid.index_of(0.5).unwrap(), grid.index_of(1.0).unwrap());
    for (k, h) in [0.3, 0.5, 0.7].into_iter().enumerate() {
        let chol = CholeskyFbm::new(h, grid).unwrap();
        let base = RngSpec::new(13, k as u64);
        let m: Moments = (0..20_000u64)
            .map(|n| {
                let v = chol.draw(&mut base.offset(n).rng());
                v[i] * v[j]
            })
            .collect();
        let oracle = 0.5 * (0.5f64.powf(2.0 * h) + 1.0 - 0.5f64.powf(2.0 * h));
        assert!((fbm_covariance(h, 0.5, 1.0).unwrap() - oracle).abs() < 1e-15);
        assert!(z(&m, oracle).abs() < Z_POLICY, "H {h}: z = {}", z(&m, oracle));
    }
}

#[test]
fn circulant_matches_cholesky() {
    for (k, h) in [0.3, 0.7].into_iter().enumerate() {
        let r = check_fbm_samplers_agree(h, 6, 17, 5_000, RngSpec::new(14, k as u64), &Sequential).unwrap();
        assert!(r.p_value > 1e-3, "H {h}: D = {} p = {}", r.ks_statistic, r.p_value);
    }
}

#[test]
fn ggbm_covariance_grid() {
    let grid = GridSpec::dyadic(3);
    let pairs = [(0.25, 0.75), (0.5, 1.0), (1.0, 1.0)];
    let mut stream = 0;
    for alpha in [0.6, 1.0, 1.4] {
        for beta in [0.5, 1.0] {
            let sampler = GgbmSampler::new(GreyParams::new(alpha, beta).unwrap(), grid).unwrap();
            let base = RngSpec::new(15, stream);
            stream += 1;
            let paths: Vec<Vec<f64>> = (0..20_000u64)
                .map(|n| sampler.draw(&mut base.offset(n).rng()))
                .collect();
            for (s, t) in pairs {
                let (a, b) = (grid.index_of(s).unwrap(), grid.index_of(t).unwrap());
                let m: Moments = paths.iter().map(|v| v[a] * v[b]).collect();
                let oracle =
                    (s.powf(alpha) + t.powf(alpha) - (t - s).abs().powf(alpha)) / (2.0 * libm::tgamma(1.0 + beta));
                assert!(
                    z(&m, oracle).abs() < Z_POLICY,
                    "({alpha}, {beta}) at ({s}, {t}): {} vs {oracle}",
                    m.mean()
                );
            }
        }
    }
}

#[test]
fn self_similarity() {
    // B(t/2) has the law of 2^{−α/2} B(t)
    for (k, (alpha, beta)) in [(0.8, 0.6), (1.5, 0.9)].into_iter().enumerate() {
        let grid = GridSpec::dyadic(4);
        let sampler = GgbmSampler::new(GreyParams::new(alpha, beta).unwrap(), grid).unwrap();
        let half = grid.index_of(0.5).unwrap();
        let base = RngSpec::new(16, k as u64);
        let n = 4_000u64;
        let a: Vec<f64> = (0..n)
            .map(|i| sampler.draw(&mut base.offset(i).rng())[half] * 2f64.powf(alpha / 2.0))
            .collect();
        let b: Vec<f64> = (n..2 * n)
            .map(|i| sampler.draw(&mut base.offset(i).rng())[16])
            .collect();
        let (d, p) = ks_two_sample(&a, &b);
        assert!(p > 1e-3, "({alpha}, {beta}): D = {d} p = {p}");
    }
}

fn simpson<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn laplace_identity_independent_quadrature() {
    for beta in [0.3, 0.5, 0.7] {
        for s in [0.1, 1.0, 5.0] {
            let simp = simpson(0.0, 80.0, 16_000, |tau| {
                (-s * tau).exp() * mwright_pdf(beta, tau).unwrap()
            });
            let target = mittag_leffler(beta, s).unwrap();
            assert!((simp - target).abs() < 1e-6, "beta {beta} s {s}: {simp} vs {target}");
            let (quad, ml) = laplace_identity(beta, s).unwrap();
            assert_eq!(ml, target);
            assert!((quad - ml).abs() < 1e-6);
        }
    }
}

#[test]
fn moment_identity_independent_quadrature() {
    for beta in [0.3, 0.5, 0.7] {
        for delta in [0.5, 1.0, 2.0] {
            // τ = u² removes the τ^{1/2} kink at the origin
            let simp = simpson(0.0, 80f64.sqrt(), 16_000, |u| {
                2.0 * u.powf(2.0 * delta + 1.0) * mwright_pdf(beta, u * u).unwrap()
            });
            let target = gamma(delta + 1.0) / gamma(beta * delta + 1.0);
            assert!(
                (simp - target).abs() < 1e-5 * target,
                "beta {beta} delta {delta}: {simp}"
            );
            let (quad, closed) = moment_identity(beta, delta).unwrap();
            assert!((quad - closed).abs() < 1e-6 * closed);
        }
    }
}

#[test]
fn normal_abs_moment_by_sampling() {
    let mut rng = RngSpec::new(17, 0).rng();
    let xs: Vec<f64> = (0..1_000_000).map(|_| StandardNormal.sample(&mut rng)).collect();
    for q in [0.5, 1.0, 5.0 / 3.0, 2.0, 3.0] {
        let m: Moments = xs.iter().map(|x: &f64| x.abs().powf(q)).collect();
        let target = normal_abs_moment(q).unwrap();
        assert!(z(&m, target).abs() < Z_POLICY, "q {q}: {} vs {target}", m.mean());
    }
    assert!((normal_abs_moment(5.0 / 3.0).unwrap() - 0.897_7).abs() < 1e-4);
}

#[test]
fn renormalized_statistic_brownian() {
    // Z_{n,2} for Bm is the quadratic variation with mean 1 and variance 2/n
    let n = 1_000u32;
    let grid = GridSpec::uniform(n);
    let sampler = GgbmSampler::new(GreyParams::brownian(), grid).unwrap();
    let base = RngSpec::new(18, 0);
    let m: Moments = (0..400u64)
        .map(|i| renormalized_statistic(&sampler.sample(base.offset(i)), 2.0, 1.0).unwrap())
        .collect();
    assert!(z(&m, 1.0).abs() < Z_POLICY);
    assert!((m.variance() - 2.0 / n as f64).abs() < 0.3 * 2.0 / n as f64);

    // at p = 1 the scale n^{−1/2} turns V_{1,n} into a sum with mean √(2/π)
    let m: Moments = (0..400u64)
        .map(|i| renormalized_statistic(&sampler.sample(base.offset(1000 + i)), 1.0, 1.0).unwrap())
        .collect();
    assert!(z(&m, (2.0 / std::f64::consts::PI).sqrt()).abs() < Z_POLICY);
}
