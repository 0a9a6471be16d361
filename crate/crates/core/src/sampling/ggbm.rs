use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use super::subordinator::draw_mwright;
use super::{CholeskyFbm, CirculantFbm, GridSpec, SamplePath};
use crate::error::Result;
use crate::params::GreyParams;
use crate::rng::RngSpec;

/// Which exact fBm method backs a sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FbmMethod {
    /// Circulant embedding when the grid has a power-of-two number of
    /// steps, Cholesky otherwise.
    #[default]
    Auto,
    Cholesky,
    Circulant,
}

/// A prepared exact fBm sampler for one `(H, grid)`.
#[derive(Debug, Clone)]
pub enum FbmEngine {
    Cholesky(CholeskyFbm),
    Circulant(CirculantFbm),
}

impl FbmEngine {
    pub fn new(hurst: f64, grid: GridSpec, method: FbmMethod) -> Result<Self> {
        match method {
            FbmMethod::Cholesky => Ok(Self::Cholesky(CholeskyFbm::new(hurst, grid)?)),
            FbmMethod::Circulant => Ok(Self::Circulant(CirculantFbm::on_grid(hurst, grid)?)),
            FbmMethod::Auto => {
                if grid.intervals().is_power_of_two() {
                    Ok(Self::Circulant(CirculantFbm::on_grid(hurst, grid)?))
                } else {
                    Ok(Self::Cholesky(CholeskyFbm::new(hurst, grid)?))
                }
            }
        }
    }

    pub fn grid(&self) -> GridSpec {
        match self {
            Self::Cholesky(s) => s.grid(),
            Self::Circulant(s) => s.grid(),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            Self::Cholesky(s) => s.draw(rng),
            Self::Circulant(s) => s.draw(rng),
        }
    }
}

/// ggBm sampler `√Y_β · B_{α/2}` with one `Y_β` per path, drawn before the
/// Gaussian part from the same stream.
#[derive(Debug, Clone)]
pub struct GgbmSampler {
    params: GreyParams,
    engine: FbmEngine,
}

impl GgbmSampler {
    pub fn new(params: GreyParams, grid: GridSpec) -> Result<Self> {
        Self::with_method(params, grid, FbmMethod::Auto)
    }

    pub fn with_method(params: GreyParams, grid: GridSpec, method: FbmMethod) -> Result<Self> {
        Ok(Self {
            params,
            engine: FbmEngine::new(params.hurst(), grid, method)?,
        })
    }

    pub fn params(&self) -> GreyParams {
        self.params
    }

    pub fn grid(&self) -> GridSpec {
        self.engine.grid()
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let y = draw_mwright(self.params.beta(), rng).expect("validated beta");
        let scale = y.sqrt();
        let mut values = self.engine.draw(rng);
        if scale != 1.0 {
            values.iter_mut().for_each(|v| *v *= scale);
        }
        values
    }

    pub fn sample(&self, spec: RngSpec) -> SamplePath {
        let values = self.draw(&mut spec.rng());
        SamplePath::new(self.grid(), values)
            .expect("sampler output matches its grid")
            .with_provenance(Some(self.params), Some(spec))
    }
}

/// One ggBm path on `grid`.
pub fn sample_ggbm(params: GreyParams, grid: GridSpec, rng: RngSpec) -> Result<SamplePath> {
    Ok(GgbmSampler::new(params, grid)?.sample(rng))
}
