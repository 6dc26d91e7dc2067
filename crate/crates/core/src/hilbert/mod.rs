//! Finite-dimensional complex Hilbert-space machinery.
//!
//! Composite spaces use the left-major index convention: basis index
//! `a * d_b + b` for factor indices `a` (left) and `b` (right).

mod eigen;
mod matrix;
mod operators;
pub mod sample;

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::Tolerances;

pub use eigen::{fix_phase, hermitian_eigen, svd, HermitianEigen, Svd};
pub use matrix::{inner, norm, orthonormalize, phase_overlap, CMatrix, C64};
pub use operators::{DensityOperator, Projection, StateVector};

use matrix::ZERO;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("invalid matrix shape {rows}x{cols} with {entries} entries")]
    InvalidShape {
        rows: usize,
        cols: usize,
        entries: usize,
    },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector norm {norm} is not 1")]
    NormViolation { norm: f64 },
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("trace {trace} is not 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not an orthogonal projection")]
    NotProjection,
    #[error("matrix is not unitary within tolerance")]
    NotUnitary,
    #[error("{parts} parts requested but the operator has rank {rank}")]
    PartsBelowRank { parts: usize, rank: usize },
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    A,
    B,
}

/// `A ⊗ B`, left factor major.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

fn check_split(dim: usize, d_a: usize, d_b: usize) -> Result<(), HilbertError> {
    if d_a == 0 || d_b == 0 || d_a * d_b != dim {
        return Err(HilbertError::DimensionMismatch {
            expected: d_a * d_b,
            found: dim,
        });
    }
    Ok(())
}

/// Partial trace of an arbitrary square matrix on `C^{d_a} ⊗ C^{d_b}`.
pub fn partial_trace_matrix(
    m: &CMatrix,
    d_a: usize,
    d_b: usize,
    keep: Factor,
) -> Result<CMatrix, HilbertError> {
    if !m.is_square() {
        return Err(HilbertError::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    check_split(m.rows(), d_a, d_b)?;
    Ok(match keep {
        Factor::A => CMatrix::from_fn(d_a, d_a, |i, j| {
            (0..d_b).map(|b| m[(i * d_b + b, j * d_b + b)]).sum()
        }),
        Factor::B => CMatrix::from_fn(d_b, d_b, |i, j| {
            (0..d_a).map(|a| m[(a * d_b + i, a * d_b + j)]).sum()
        }),
    })
}

/// Reduced density operator on the kept factor.
pub fn partial_trace(
    w: &DensityOperator,
    d_a: usize,
    d_b: usize,
    keep: Factor,
) -> Result<DensityOperator, HilbertError> {
    partial_trace_matrix(w.matrix(), d_a, d_b, keep).map(DensityOperator::from_trusted)
}

/// Biorthogonal decomposition `ψ = Σ_i c_i |left_i> ⊗ |right_i>`.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    /// Descending, strictly above the tolerance used to build the form.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<C64>>,
    pub right_basis: Vec<Vec<C64>>,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Squared coefficients, i.e. the weights `p_i`.
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c * c).collect()
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let d_a = self.left_basis.first().map_or(0, Vec::len);
        let d_b = self.right_basis.first().map_or(0, Vec::len);
        let mut psi = alloc::vec![ZERO; d_a * d_b];
        for ((c, u), v) in self
            .coefficients
            .iter()
            .zip(&self.left_basis)
            .zip(&self.right_basis)
        {
            for a in 0..d_a {
                for b in 0..d_b {
                    psi[a * d_b + b] += u[a] * v[b] * *c;
                }
            }
        }
        psi
    }
}

/// Schmidt decomposition through the singular values of the `d_a x d_b`
/// amplitude matrix. Terms with coefficient at or below `tol.eps` are dropped.
pub fn schmidt(
    psi: &StateVector,
    d_a: usize,
    d_b: usize,
    tol: &Tolerances,
) -> Result<SchmidtForm, HilbertError> {
    check_split(psi.dim(), d_a, d_b)?;
    let n = psi.norm();
    if (n - 1.0).abs() > tol.eps {
        return Err(HilbertError::NormViolation { norm: n });
    }
    let amplitudes = psi.amplitudes();
    let m = CMatrix::from_fn(d_a, d_b, |a, b| amplitudes[a * d_b + b]);
    let s = svd(&m);
    let mut form = SchmidtForm {
        coefficients: Vec::new(),
        left_basis: Vec::new(),
        right_basis: Vec::new(),
    };
    for ((sigma, u), v) in s.singular_values.into_iter().zip(s.left).zip(s.right) {
        if sigma > tol.eps {
            form.coefficients.push(sigma);
            form.left_basis.push(u);
            form.right_basis.push(v.iter().map(|z| z.conj()).collect());
        }
    }
    Ok(form)
}

/// Schmidt rank above one.
pub fn is_entangled(
    psi: &StateVector,
    d_a: usize,
    d_b: usize,
    tol: &Tolerances,
) -> Result<bool, HilbertError> {
    Ok(schmidt(psi, d_a, d_b, tol)?.rank() > 1)
}

/// Spectral decomposition `W = Σ p_i |ψ_i><ψ_i|` with weights above `tol.eps`, descending.
pub fn eigendecomposition(w: &DensityOperator, tol: &Tolerances) -> Vec<(f64, Vec<C64>)> {
    let e = hermitian_eigen(w.matrix(), tol.eps);
    e.values
        .into_iter()
        .zip(e.vectors)
        .filter(|(p, _)| *p > tol.eps)
        .collect()
}

/// One convex decomposition `W = Σ_j q_j |v_j><v_j|`.
#[derive(Debug, Clone)]
pub struct ConvexDecomposition {
    pub terms: Vec<(f64, Vec<C64>)>,
}

impl ConvexDecomposition {
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.terms.first().map_or(0, |t| t.1.len());
        self.terms.iter().fold(CMatrix::zeros(d, d), |acc, (q, v)| {
            acc.add(&CMatrix::outer(v, v).scale(C64::new(*q, 0.0)))
        })
    }
}

/// Seeded convex decompositions into `parts` pure terms. Each sample applies a
/// random `parts x rank` isometry to the eigenvectors scaled by `sqrt(p_i)`.
pub fn decompositions_sample(
    w: &DensityOperator,
    parts: usize,
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<ConvexDecomposition>, HilbertError> {
    let spectrum = eigendecomposition(w, tol);
    let rank = spectrum.len();
    if parts < rank || parts == 0 {
        return Err(HilbertError::PartsBelowRank { parts, rank });
    }
    let dim = w.dim();
    let scaled: Vec<Vec<C64>> = spectrum
        .iter()
        .map(|(p, v)| {
            let s = libm::sqrt(*p);
            v.iter().map(|z| z * s).collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(count);
    while samples.len() < count {
        let iso = sample::random_isometry(&mut rng, parts, rank);
        let mut terms = Vec::with_capacity(parts);
        for j in 0..parts {
            let mut u = alloc::vec![ZERO; dim];
            for (i, s) in scaled.iter().enumerate() {
                let coeff = iso[(j, i)];
                for (ui, si) in u.iter_mut().zip(s) {
                    *ui += coeff * si;
                }
            }
            let weight = u.iter().map(|z| z.norm_sqr()).sum::<f64>();
            terms.push((weight, u));
        }
        // A vanishing weight would break positivity; draw again.
        if terms.iter().any(|(q, _)| *q <= tol.eps) {
            continue;
        }
        let terms = terms
            .into_iter()
            .map(|(q, u)| {
                let n = libm::sqrt(q);
                (q, u.iter().map(|z| z / n).collect())
            })
            .collect();
        samples.push(ConvexDecomposition { terms });
    }
    Ok(samples)
}

/// `Tr(W P)`, clamped into `[0, 1]`.
pub fn born(w: &DensityOperator, p: &Projection) -> Result<f64, HilbertError> {
    if w.dim() != p.dim() {
        return Err(HilbertError::DimensionMismatch {
            expected: w.dim(),
            found: p.dim(),
        });
    }
    Ok(trace_product(w.matrix(), p.matrix()).clamp(0.0, 1.0))
}

/// `Re Tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.rows();
    let mut t = ZERO;
    for i in 0..n {
        for k in 0..n {
            t += a[(i, k)] * b[(k, i)];
        }
    }
    t.re
}

/// Projection onto the span of eigenvectors with eigenvalue above `eps`.
pub fn support_projection(w: &DensityOperator, eps: f64) -> Projection {
    let e = hermitian_eigen(w.matrix(), eps);
    let vectors: Vec<Vec<C64>> = e
        .values
        .iter()
        .zip(e.vectors)
        .filter(|(v, _)| **v > eps)
        .map(|(_, u)| u)
        .collect();
    Projection::onto_orthonormal(w.dim(), &vectors)
}

/// `range(W1) ⊆ range(W2)`, decided as `Q2 W1 Q2 = W1` with `Q2` the support of `W2`.
pub fn range_preorder(
    w1: &DensityOperator,
    w2: &DensityOperator,
    tol: &Tolerances,
) -> Result<bool, HilbertError> {
    if w1.dim() != w2.dim() {
        return Err(HilbertError::DimensionMismatch {
            expected: w1.dim(),
            found: w2.dim(),
        });
    }
    let q = support_projection(w2, tol.eps);
    let sandwiched = q.matrix().mul(w1.matrix()).mul(q.matrix());
    Ok(sandwiched.max_abs_diff(w1.matrix()) <= tol.eps)
}

/// Purity of the reduced state on factor A before and after a global unitary step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityChange {
    pub before: f64,
    pub after: f64,
}

pub fn reduced_evolution(
    psi0: &StateVector,
    u: &CMatrix,
    d_a: usize,
    d_b: usize,
    tol: &Tolerances,
) -> Result<PurityChange, HilbertError> {
    check_split(psi0.dim(), d_a, d_b)?;
    if !u.is_square() || u.rows() != psi0.dim() {
        return Err(HilbertError::DimensionMismatch {
            expected: psi0.dim(),
            found: u.rows(),
        });
    }
    if !u.is_unitary(tol.eps) {
        return Err(HilbertError::NotUnitary);
    }
    let n = psi0.norm();
    if (n - 1.0).abs() > tol.eps {
        return Err(HilbertError::NormViolation { norm: n });
    }
    let psi1 = u.mul_vec(psi0.amplitudes());
    let reduced_purity = |amps: &[C64]| -> Result<f64, HilbertError> {
        let w = CMatrix::outer(amps, amps);
        Ok(purity_of(&partial_trace_matrix(&w, d_a, d_b, Factor::A)?))
    };
    Ok(PurityChange {
        before: reduced_purity(psi0.amplitudes())?,
        after: reduced_purity(&psi1)?,
    })
}

/// `Tr(W²)` for Hermitian `W`.
pub(crate) fn purity_of(m: &CMatrix) -> f64 {
    m.data().iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests;
