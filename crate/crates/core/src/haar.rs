//! Seeded Haar-random unitaries, bases and states.
//!
//! All sampling goes through [`ChaCha20Rng`], so identical seeds give
//! identical output on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, ComplexMatrix};
use crate::state::{convex_mix, DensityOperator, PureState};

pub type SeededRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn ginibre_column<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect()
}

/// Columns of a Haar-distributed unitary: Gram–Schmidt on a complex Ginibre
/// matrix, which leaves the triangular factor with a positive diagonal.
pub fn haar_columns<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = ginibre_column(dim, rng);
        for _ in 0..2 {
            for q in &cols {
                let proj = linalg::inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let n = linalg::norm(&v);
        // a degenerate draw has probability zero; resample if it happens
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    cols
}

pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let cols = haar_columns(dim, rng);
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

/// Haar-random orthonormal basis; deterministic for a fixed seed.
pub fn random_haar_basis(dim: usize, seed: u64) -> Vec<PureState> {
    assert!(dim >= 1, "basis dimension must be positive");
    let mut rng = rng_from_seed(seed);
    haar_basis_from(dim, &mut rng)
}

pub fn haar_basis_from<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<PureState> {
    haar_columns(dim, rng)
        .into_iter()
        .map(|c| PureState::normalized(c).expect("Haar column has unit norm"))
        .collect()
}

pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    PureState::normalized(ginibre_column(dim, rng)).expect("Ginibre vector is non-zero")
}

/// Convex mixture of `components` Haar pure states with uniformly drawn
/// weights, tagged with `factor_dims`.
pub fn random_mixed_state<R: Rng + ?Sized>(factor_dims: &[usize], components: usize, rng: &mut R) -> DensityOperator {
    let dim: usize = factor_dims.iter().product();
    let raw: Vec<f64> = (0..components.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let parts: Vec<(f64, DensityOperator)> = raw
        .iter()
        .map(|w| {
            let psi = random_pure_state(dim, rng);
            (w / total, DensityOperator::from_ket(&psi))
        })
        .collect();
    convex_mix(&parts)
        .expect("mixture of valid states is valid")
        .with_factors(factor_dims.to_vec())
        .expect("dims agree")
}
