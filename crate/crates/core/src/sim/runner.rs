use alloc::vec::Vec;

/// Trials handled by one block (and one random stream).
pub const BLOCK_SIZE: usize = 1024;

/// Executes independent blocks and returns their results in block order.
///
/// Implementations may run blocks concurrently; because every block owns its
/// stream and results are returned in order, the reduction is identical for
/// any worker count.
pub trait BlockRunner: Sync {
    fn run_blocks<T, F>(&self, blocks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Runs blocks one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl BlockRunner for Sequential {
    fn run_blocks<T, F>(&self, blocks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..blocks).map(job).collect()
    }
}

/// Number of blocks needed for `trials`.
pub fn block_count(trials: u64) -> usize {
    trials.div_ceil(BLOCK_SIZE as u64) as usize
}

/// Trial range `[start, end)` of block `b`.
pub fn block_range(trials: u64, b: usize) -> (u64, u64) {
    let start = b as u64 * BLOCK_SIZE as u64;
    (start, (start + BLOCK_SIZE as u64).min(trials))
}
