//! Seeded random streams.
//!
//! Every stochastic routine in the crate draws from [`ChaCha8Rng`] seeded with
//! [`ChaCha8Rng::seed_from_u64`]. Independent streams for the same master seed
//! are selected with ChaCha's 64-bit stream counter, so a stream is a fixed
//! function of `(seed, stream)` on every platform.
//!
//! Stream assignment:
//! - stream [`SHARED_STREAM`] carries the hidden-state sample shared by all
//!   angles of a sweep;
//! - stream `k + 1` carries the fresh sample for grid angle `k` when a sweep
//!   asks for independent columns.

use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

pub const SHARED_STREAM: u64 = 0;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream used for the `index`-th angle of a sweep with fresh samples.
pub fn angle_stream(seed: u64, index: usize) -> ChaCha8Rng {
    stream(seed, index as u64 + 1)
}

/// Uniform draw on `[0, 1)` with 53 bits of precision.
#[inline]
pub fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}
