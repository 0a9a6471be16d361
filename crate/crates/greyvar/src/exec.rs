//! Thread-pool executor for batch Monte Carlo work.

use greyvar_core::Executor;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{CliError, Result};

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "GREYVAR_THREADS";

/// Runs batch maps on a private rayon pool. Results come back in index
/// order, so output does not depend on the thread count.
pub struct Pool {
    pool: ThreadPool,
}

impl Pool {
    /// `threads = None` uses rayon's default (one worker per logical CPU).
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            if n == 0 {
                return Err(CliError::usage("--threads must be at least 1"));
            }
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::usage(format!("cannot start thread pool: {e}")))?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Pool {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}

/// The flag value if given, else `GREYVAR_THREADS`, else `None`.
pub fn resolve_threads(flag: Option<usize>, env: Option<&str>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match env.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => s
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use greyvar_core::Sequential;

    #[test]
    fn order_matches_sequential() {
        let pool = Pool::new(Some(4)).unwrap();
        assert_eq!(pool.threads(), 4);
        let f = |i: usize| (i as f64).sqrt() * 3.0;
        assert_eq!(pool.map(1000, f), Sequential.map(1000, f));
    }

    #[test]
    fn thread_resolution() {
        assert_eq!(resolve_threads(Some(3), Some("8")).unwrap(), Some(3));
        assert_eq!(resolve_threads(None, Some("8")).unwrap(), Some(8));
        assert_eq!(resolve_threads(None, None).unwrap(), None);
        assert_eq!(resolve_threads(None, Some(" ")).unwrap(), None);
        assert_eq!(resolve_threads(None, Some("0")).unwrap_err().exit_code(), 2);
        assert_eq!(resolve_threads(None, Some("many")).unwrap_err().exit_code(), 2);
        assert!(Pool::new(Some(0)).is_err());
    }
}
