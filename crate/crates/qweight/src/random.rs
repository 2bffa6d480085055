//! Seedable random states for property tests and Monte-Carlo checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::tensor::{Operator, StateVector};

/// Matrix with independent standard complex Gaussian entries.
pub fn random_operator<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unit vector (normalized complex Gaussian).
pub fn random_state_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let v = DVector::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// Random rank-`rank` density matrix `G G^dag / Tr(G G^dag)` with Gaussian `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Operator {
    let rank = rank.clamp(1, dim);
    let g = DMatrix::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    m / Complex64::new(tr, 0.0)
}

/// Random pure density matrix `|psi><psi|`.
pub fn random_pure_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let v = random_state_vector(dim, rng);
    &v * v.adjoint()
}
