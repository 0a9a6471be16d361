//! Exact path samplers.
//!
//! fBm is drawn exactly on a grid, either by a Cholesky factor of the full
//! covariance (reference method, small grids) or by circulant embedding of
//! the increment autocovariance (dyadic grids, `O(m log m)`). A ggBm path is
//! `√Y · B_H` with one M-Wright draw `Y` per path and `H = α/2`.

mod cholesky;
mod circulant;
mod ggbm;
mod subordinator;

pub use cholesky::{fbm_covariance, sample_fbm_cholesky, CholeskyFbm, MAX_CHOLESKY_POINTS};
pub use circulant::{sample_fbm_circulant, CirculantFbm, MAX_CIRCULANT_LEVEL};
pub use ggbm::{sample_ggbm, FbmEngine, FbmMethod, GgbmSampler};
pub use subordinator::{draw_mwright, draw_one_sided_stable, sample_mwright, sample_one_sided_stable};

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::GreyParams;
use crate::rng::RngSpec;

/// Time grid on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridSpec {
    /// Points `j / 2^level`, `j = 0..=2^level`.
    Dyadic { level: u32 },
    /// Points `j / n`, `j = 0..=n`.
    Uniform { n: u32 },
}

impl GridSpec {
    pub fn dyadic(level: u32) -> Self {
        GridSpec::Dyadic { level }
    }

    pub fn uniform(n: u32) -> Self {
        GridSpec::Uniform { n }
    }

    /// Number of increments.
    pub fn intervals(&self) -> usize {
        match *self {
            GridSpec::Dyadic { level } => 1usize << level,
            GridSpec::Uniform { n } => n as usize,
        }
    }

    /// Number of points including `t = 0`.
    pub fn len(&self) -> usize {
        self.intervals() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 / self.intervals() as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.time(j)).collect()
    }

    /// Index of `t` on this grid, if `t` is a grid point.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let m = self.intervals() as f64;
        let j = (t * m).round();
        if (0.0..=m).contains(&j) && (j / m - t).abs() <= 1e-12 {
            Some(j as usize)
        } else {
            None
        }
    }

    pub fn is_dyadic(&self) -> bool {
        matches!(self, GridSpec::Dyadic { .. })
    }

    /// The resolution parameter: level for dyadic grids, `n` for uniform ones.
    pub fn resolution(&self) -> u32 {
        match *self {
            GridSpec::Dyadic { level } => level,
            GridSpec::Uniform { n } => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GridSpec::Dyadic { level } if level > 30 => Err(Error::Capacity {
                what: "dyadic level",
                requested: level as usize,
                limit: 30,
            }),
            GridSpec::Uniform { n: 0 } => Err(Error::Input("uniform grid needs n >= 1".into())),
            _ => Ok(()),
        }
    }
}

/// Values of a process on a grid over `[0, 1]`, starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: GridSpec,
    values: Vec<f64>,
    params: Option<GreyParams>,
    seed: Option<RngSpec>,
}

impl SamplePath {
    /// Wraps raw values. Fails unless there is one finite value per grid
    /// point and the first one is exactly 0.
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::Input(format!(
                "path has {} values but the grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::Input(format!("path must start at 0, got {}", values[0])));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!("path value {j} is not finite")));
        }
        Ok(Self {
            grid,
            values,
            params: None,
            seed: None,
        })
    }

    /// Evaluates `f` on the grid.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: GridSpec, f: F) -> Result<Self> {
        let values = (0..grid.len()).map(|j| f(grid.time(j))).collect();
        Self::new(grid, values)
    }

    pub fn with_provenance(mut self, params: Option<GreyParams>, seed: Option<RngSpec>) -> Self {
        self.params = params;
        self.seed = seed;
        self
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn params(&self) -> Option<GreyParams> {
        self.params
    }

    pub fn seed(&self) -> Option<RngSpec> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at time `t`, if `t` is on the grid.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.grid.index_of(t).map(|j| self.values[j])
    }

    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    /// Multiplies every value by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| v * c).collect();
        Ok(Self::new(self.grid, values)?.with_provenance(self.params, self.seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    #[test]
    fn grid_geometry() {
        let g = GridSpec::dyadic(3);
        assert_eq!(g.len(), 9);
        assert_eq!(g.time(4), 0.5);
        assert_eq!(g.index_of(0.625), Some(5));
        assert_eq!(g.index_of(0.3), None);
        let u = GridSpec::uniform(10);
        assert_eq!(u.len(), 11);
        assert_eq!(u.index_of(0.3), Some(3));
        assert!(GridSpec::uniform(0).validate().is_err());
    }

    #[test]
    fn path_invariants() {
        let g = GridSpec::dyadic(1);
        assert!(SamplePath::new(g, vec![0.0, 1.0, 2.0]).is_ok());
        assert!(SamplePath::new(g, vec![1.0, 1.0, 2.0]).is_err());
        assert!(SamplePath::new(g, vec![0.0, 1.0]).is_err());
        assert!(SamplePath::new(g, vec![0.0, f64::NAN, 2.0]).is_err());
        let p = SamplePath::from_fn(g, |t| t).unwrap();
        assert_eq!(p.increments().collect::<Vec<_>>(), vec![0.5, 0.5]);
        assert_eq!(p.value_at(0.5), Some(0.5));
    }
}
