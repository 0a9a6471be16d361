use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{GridSpec, SamplePath};
use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::params::check_hurst;
use crate::rng::RngSpec;

pub const MAX_CIRCULANT_LEVEL: u32 = 24;

/// Eigenvalues in `(−CLIP_TOL, 0)` are rounding noise and are set to zero.
const CLIP_TOL: f64 = 1e-9;

/// Autocovariance of unit-step fractional Gaussian noise at lag `k`.
pub(crate) fn fgn_autocov(hurst: f64, k: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Exact fBm sampler on `m = 2^level` equal steps by circulant embedding
/// (Davies–Harte) of the fGn autocovariance in a circulant of size `2m`.
#[derive(Debug, Clone)]
pub struct CirculantFbm {
    hurst: f64,
    grid: GridSpec,
    m: usize,
    sqrt_eig: Vec<f64>,
    plan: FftPlan,
    step_scale: f64,
}

impl CirculantFbm {
    /// Sampler on the dyadic grid of the given level.
    pub fn new(hurst: f64, level: u32) -> Result<Self> {
        Self::on_grid(hurst, GridSpec::dyadic(level))
    }

    /// Sampler on any grid whose number of intervals is a power of two.
    pub fn on_grid(hurst: f64, grid: GridSpec) -> Result<Self> {
        check_hurst(hurst)?;
        grid.validate()?;
        let m = grid.intervals();
        if !m.is_power_of_two() {
            return Err(Error::Input(format!(
                "circulant embedding needs a power-of-two number of steps, got {m}"
            )));
        }
        let level = m.trailing_zeros();
        if level > MAX_CIRCULANT_LEVEL {
            return Err(Error::Capacity {
                what: "circulant level",
                requested: level as usize,
                limit: MAX_CIRCULANT_LEVEL as usize,
            });
        }
        let size = 2 * m;
        let mut re = vec![0.0; size];
        let mut im = vec![0.0; size];
        for (k, r) in re.iter_mut().enumerate().take(m + 1) {
            *r = fgn_autocov(hurst, k);
        }
        for k in 1..m {
            re[size - k] = re[k];
        }
        let plan = FftPlan::new(size);
        plan.forward(&mut re, &mut im);
        let min_eig = re.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig <= -CLIP_TOL {
            return Err(Error::Numerical(format!(
                "circulant embedding for H = {hurst}, level {level} has eigenvalue {min_eig:e}"
            )));
        }
        let sqrt_eig = re.iter().map(|&l| (l.max(0.0) / size as f64).sqrt()).collect();
        Ok(Self {
            hurst,
            grid,
            m,
            sqrt_eig,
            plan,
            step_scale: (1.0 / m as f64).powf(hurst),
        })
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// One path (including the leading 0) from `rng`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let size = 2 * self.m;
        let mut re = Vec::with_capacity(size);
        let mut im = Vec::with_capacity(size);
        for &s in &self.sqrt_eig {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            re.push(s * a);
            im.push(s * b);
        }
        self.plan.forward(&mut re, &mut im);
        let mut out = Vec::with_capacity(self.m + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for x in &re[..self.m] {
            acc += x * self.step_scale;
            out.push(acc);
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

/// One exact fBm path on the dyadic grid of `level` via circulant embedding.
pub fn sample_fbm_circulant(hurst: f64, level: u32, rng: RngSpec) -> Result<SamplePath> {
    Ok(CirculantFbm::new(hurst, level)?.sample(rng))
}
