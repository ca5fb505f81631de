use qrnoise_core::sim::BlockRunner;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Runs blocks on a dedicated rayon pool. Results come back in block order, so
/// output does not depend on the worker count.
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    /// `workers = 0` uses the available parallelism.
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new().num_threads(workers).build()?;
        Ok(Parallel { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl BlockRunner for Parallel {
    fn run_blocks<T, F>(&self, blocks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        self.pool.install(|| (0..blocks).into_par_iter().map(&job).collect())
    }
}
