use alloc::vec::Vec;

/// Runs an indexed map over a batch and returns results in index order.
///
/// Implementations may evaluate the closure on any thread in any order, but
/// must return `out[i] = f(i)`. All batch reductions in this crate consume
/// the returned vector sequentially, so results never depend on scheduling.
pub trait Executor: Sync {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Single-threaded executor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

use crate::rng::RngSpec;
use crate::sampling::{GgbmSampler, SamplePath};

/// Draws `n` paths from `sampler`, path `i` on substream `base.offset(i)`,
/// and maps each through `f` without keeping the paths around.
pub fn map_paths<E, T, F>(exec: &E, sampler: &GgbmSampler, base: RngSpec, n: usize, f: F) -> Vec<T>
where
    E: Executor + ?Sized,
    T: Send,
    F: Fn(&SamplePath) -> T + Sync + Send,
{
    exec.map(n, |i| f(&sampler.sample(base.offset(i as u64))))
}
