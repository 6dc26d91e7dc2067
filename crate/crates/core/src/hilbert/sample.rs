//! Seeded random operators: Gaussian-based unit vectors, isometries,
//! unitaries, projections, and density operators.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{orthonormalize, CMatrix, C64};
use super::operators::{DensityOperator, Projection, StateVector};

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_vector(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    (0..dim).map(|_| gaussian(rng)).collect()
}

/// Orthonormal columns drawn from Gaussian vectors.
fn orthonormal_columns(rng: &mut impl Rng, dim: usize, count: usize) -> Vec<Vec<C64>> {
    loop {
        let raw: Vec<Vec<C64>> = (0..count).map(|_| gaussian_vector(rng, dim)).collect();
        let basis = orthonormalize(&raw, 1e-8);
        if basis.len() == count {
            return basis;
        }
    }
}

/// Uniformly distributed unit vector.
pub fn random_state_vector(rng: &mut impl Rng, dim: usize) -> StateVector {
    StateVector::normalized(gaussian_vector(rng, dim)).expect("Gaussian vector is nonzero")
}

/// `rows x cols` matrix with orthonormal columns (`rows >= cols`).
pub fn random_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let columns = orthonormal_columns(rng, rows, cols);
    CMatrix::from_fn(rows, cols, |i, j| columns[j][i])
}

pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> CMatrix {
    random_isometry(rng, dim, dim)
}

/// Random projection of the given rank.
pub fn random_projection(rng: &mut impl Rng, dim: usize, rank: usize) -> Projection {
    Projection::onto_orthonormal(dim, &orthonormal_columns(rng, dim, rank))
}

/// `G G† / Tr(G G†)` for a Gaussian `dim x rank` matrix `G`.
pub fn random_density(rng: &mut impl Rng, dim: usize, rank: usize) -> DensityOperator {
    let g = CMatrix::from_fn(dim, rank, |_, _| gaussian(rng));
    let m = g.mul(&g.adjoint());
    let t = m.trace().re;
    DensityOperator::from_trusted(m.scale(C64::new(1.0 / t, 0.0)))
}
