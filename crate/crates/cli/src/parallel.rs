use mimo_capacity_core::estimate::TrialRunner;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// Runs trials on a dedicated rayon pool. Outputs come back in trial order,
/// so results match [`mimo_capacity_core::estimate::Sequential`] exactly.
#[derive(Debug)]
pub struct RayonRunner {
    pool: ThreadPool,
}

impl RayonRunner {
    /// `None` sizes the pool to the machine's available parallelism.
    pub fn new(workers: Option<usize>) -> Result<Self, ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new().num_threads(workers.unwrap_or(0)).build()?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl TrialRunner for RayonRunner {
    fn run<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync,
    {
        self.pool.install(|| (0..trials).into_par_iter().map(&f).collect())
    }
}
