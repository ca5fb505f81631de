use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::DenseMatrix;

/// Generator used for every random draw.
pub type StreamRng = ChaCha8Rng;

/// Streams at the top of the range hold shared objects (random bases, input
/// matrices); trial blocks count up from zero.
pub const SHARED_STREAM_BASE: u64 = u64::MAX - 255;

/// Independent ChaCha stream `stream` of the key derived from `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream for block `block` of grid point `grid`.
pub fn block_stream(grid: usize, block: usize) -> u64 {
    ((grid as u64) << 32) | block as u64
}

/// Overwrites `out` with i.i.d. `N(0, σ²)` draws.
pub fn fill_gaussian<R: Rng + ?Sized>(rng: &mut R, sigma: f64, out: &mut [f64]) {
    for x in out {
        let z: f64 = rng.sample(StandardNormal);
        *x = sigma * z;
    }
}

/// `m` i.i.d. `N(0, σ²)` draws.
pub fn gaussian_vector<R: Rng + ?Sized>(m: usize, sigma: f64, rng: &mut R) -> Vec<f64> {
    let mut v = alloc::vec![0.0; m];
    fill_gaussian(rng, sigma, &mut v);
    v
}

/// Matrix with i.i.d. standard normal entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> DenseMatrix {
    DenseMatrix::new(m, n, gaussian_vector(m * n, 1.0, rng)).expect("finite Gaussian draws")
}
