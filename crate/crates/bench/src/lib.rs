//! Shared inputs for the criterion benchmarks.

use logos_core::haar::{random_mixed_state, rng_from_seed};
use logos_core::DensityOperator;

/// Seeded random mixed state on `d ⊗ d` built from `components` Haar pure states.
pub fn random_bipartite(d: usize, components: usize, seed: u64) -> DensityOperator {
    let mut rng = rng_from_seed(seed);
    random_mixed_state(&[d, d], components, &mut rng)
}
