use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{GridSpec, SamplePath};
use crate::error::{Error, Result};
use crate::params::check_hurst;
use crate::rng::RngSpec;

/// Largest grid (points including 0) accepted by the Cholesky sampler.
pub const MAX_CHOLESKY_POINTS: usize = (1 << 12) + 1;

const JITTER: f64 = 1e-12;

/// Covariance of standard fBm, `(s^{2H} + t^{2H} − |t−s|^{2H}) / 2`.
pub fn fbm_covariance(hurst: f64, s: f64, t: f64) -> Result<f64> {
    check_hurst(hurst)?;
    for (name, v) in [("s", s), ("t", t)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::param(name, v, "must lie in [0, 1]"));
        }
    }
    Ok(cov(hurst, s, t))
}

fn cov(hurst: f64, s: f64, t: f64) -> f64 {
    let h2 = 2.0 * hurst;
    0.5 * (s.powf(h2) + t.powf(h2) - (t - s).abs().powf(h2))
}

/// fBm sampler backed by the Cholesky factor of the covariance on the
/// nonzero grid points. Building it costs `O(m³)`; each draw `O(m²)`.
#[derive(Debug, Clone)]
pub struct CholeskyFbm {
    hurst: f64,
    grid: GridSpec,
    // packed lower triangle, row-major
    factor: Vec<f64>,
    m: usize,
}

impl CholeskyFbm {
    pub fn new(hurst: f64, grid: GridSpec) -> Result<Self> {
        check_hurst(hurst)?;
        grid.validate()?;
        if grid.len() > MAX_CHOLESKY_POINTS {
            return Err(Error::Capacity {
                what: "Cholesky grid points",
                requested: grid.len(),
                limit: MAX_CHOLESKY_POINTS,
            });
        }
        let m = grid.intervals();
        let times: Vec<f64> = (1..=m).map(|j| grid.time(j)).collect();
        let mut a = vec![0.0; m * (m + 1) / 2];
        for i in 0..m {
            for j in 0..=i {
                a[i * (i + 1) / 2 + j] = cov(hurst, times[i], times[j]);
            }
        }
        let factor = match cholesky_packed(&a, m, 0.0) {
            Ok(l) => l,
            Err(_) => {
                let max_diag = (0..m).map(|i| a[i * (i + 1) / 2 + i]).fold(0.0, f64::max);
                cholesky_packed(&a, m, JITTER * max_diag).map_err(|pivot| {
                    Error::Numerical(format!(
                        "fBm covariance (H = {hurst}, {m} points) is not positive definite at pivot {pivot} even after jitter"
                    ))
                })?
            }
        };
        Ok(Self { hurst, grid, factor, m })
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// One path (including the leading 0) from `rng`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.m).map(|_| rng.sample(StandardNormal)).collect();
        let mut out = Vec::with_capacity(self.m + 1);
        out.push(0.0);
        for i in 0..self.m {
            let row = &self.factor[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
            out.push(row.iter().zip(&z).map(|(l, z)| l * z).sum());
        }
        out
    }

    pub fn sample(&self, spec: RngSpec) -> SamplePath {
        let values = self.draw(&mut spec.rng());
        SamplePath::new(self.grid, values)
            .expect("sampler output matches its grid")
            .with_provenance(None, Some(spec))
    }
}

/// In-place style Cholesky on a packed lower triangle with `shift` added to
/// the diagonal. Returns the failing pivot index on breakdown.
fn cholesky_packed(a: &[f64], m: usize, shift: f64) -> core::result::Result<Vec<f64>, usize> {
    let mut l = vec![0.0; a.len()];
    for i in 0..m {
        let ri = i * (i + 1) / 2;
        for j in 0..=i {
            let rj = j * (j + 1) / 2;
            let mut s = a[ri + j];
            if i == j {
                s += shift;
            }
            for k in 0..j {
                s -= l[ri + k] * l[rj + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return Err(i);
                }
                l[ri + i] = s.sqrt();
            } else {
                l[ri + j] = s / l[rj + j];
            }
        }
    }
    Ok(l)
}

/// One exact fBm path on `grid` via Cholesky.
pub fn sample_fbm_cholesky(hurst: f64, grid: GridSpec, rng: RngSpec) -> Result<SamplePath> {
    Ok(CholeskyFbm::new(hurst, grid)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covariance_values() {
        assert!((fbm_covariance(0.5, 0.5, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((fbm_covariance(0.75, 0.5, 1.0).unwrap() - 0.5).abs() < 1e-15);
        for &h in &[0.1, 0.4, 0.9] {
            let t = 0.37f64;
            assert!((fbm_covariance(h, t, t).unwrap() - t.powf(2.0 * h)).abs() < 1e-15);
            assert_eq!(
                fbm_covariance(h, 0.2, 0.9).unwrap(),
                fbm_covariance(h, 0.9, 0.2).unwrap()
            );
        }
        assert!(fbm_covariance(1.0, 0.5, 0.5).is_err());
        assert!(fbm_covariance(0.5, 1.5, 0.5).is_err());
    }

    #[test]
    fn factor_reproduces_covariance() {
        let grid = GridSpec::dyadic(3);
        let s = CholeskyFbm::new(0.3, grid).unwrap();
        for i in 0..s.m {
            for j in 0..=i {
                let mut acc = 0.0;
                for k in 0..=j {
                    acc += s.factor[i * (i + 1) / 2 + k] * s.factor[j * (j + 1) / 2 + k];
                }
                let expect = cov(0.3, grid.time(i + 1), grid.time(j + 1));
                assert!((acc - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn deterministic_and_capped() {
        let a = sample_fbm_cholesky(0.7, GridSpec::dyadic(5), RngSpec::new(1, 2)).unwrap();
        let b = sample_fbm_cholesky(0.7, GridSpec::dyadic(5), RngSpec::new(1, 2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.values()[0], 0.0);
        assert!(matches!(
            CholeskyFbm::new(0.5, GridSpec::dyadic(13)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn near_one_hurst_factors() {
        // rounding pushes the covariance towards singular as H -> 1
        assert!(CholeskyFbm::new(0.999, GridSpec::dyadic(6)).is_ok());
    }
}
