//! Seeded random streams.
//!
//! Every consumer of randomness draws from its own named stream derived from
//! one user seed, so adding draws in one component never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::sparse::DenseMatrix;
use crate::C64;

/// Stream names used by the library.
pub mod streams {
    pub const CONTOUR_Y: &str = "contour-y";
    pub const EIG_MIX: &str = "eig-mix";
    pub const BICG_SHADOW: &str = "bicg-shadow";
    pub const SYNTHETIC: &str = "synthetic";
}

fn fnv1a(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Independent generator for `(seed, name)`.
pub fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(name));
    rng
}

/// Real matrix with independent standard normal entries.
pub fn gaussian_matrix(rng: &mut ChaCha8Rng, nrows: usize, ncols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(nrows, ncols, |_, _| C64::new(StandardNormal.sample(rng), 0.0))
}

/// Complex vector with independent standard normal real and imaginary parts.
pub fn gaussian_complex_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect()
}
