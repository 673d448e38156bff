//! Seeded fixtures shared by the benchmarks.

use bunchlab_core::multi::{gram_matrix, ComplexMatrix};
use bunchlab_core::states::PureState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Gram matrix of `q` random states in `dim` dimensions.
pub fn random_gram(q: usize, dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<PureState> = (0..q)
        .map(|_| PureState::random(dim, &mut rng).expect("dim > 0"))
        .collect();
    gram_matrix(&states)
        .expect("at least two states")
        .matrix()
        .clone()
}
