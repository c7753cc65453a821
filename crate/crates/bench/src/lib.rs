//! Fixed instance sets shared by the benchmarks.

use lwae_core::random::random_pcm;
use lwae_core::{Pcm, RngStream};

/// `count` random matrices, identical for identical arguments.
pub fn instances(n: usize, a_max: u32, count: usize, seed: u64) -> Vec<Pcm> {
    let mut rng = RngStream::new(seed);
    (0..count).map(|_| random_pcm(n, a_max, &mut rng)).collect()
}
