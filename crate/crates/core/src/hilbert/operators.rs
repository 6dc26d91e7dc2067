use alloc::vec::Vec;

use super::eigen::hermitian_eigen;
use super::matrix::{norm, orthonormalize, CMatrix, C64, ONE, ZERO};
use super::{purity_of, HilbertError};
use crate::Tolerances;

/// Unit vector, optionally tagged with a bipartite factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    factor_dims: Option<(usize, usize)>,
}

impl StateVector {
    /// Accepts `amplitudes` whose norm is within `tol.eps` of one.
    pub fn new(amplitudes: Vec<C64>, tol: &Tolerances) -> Result<Self, HilbertError> {
        if amplitudes.is_empty() {
            return Err(HilbertError::InvalidShape {
                rows: 0,
                cols: 1,
                entries: 0,
            });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(HilbertError::NonFinite);
        }
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > tol.eps {
            return Err(HilbertError::NormViolation { norm: n });
        }
        Ok(StateVector {
            amplitudes,
            factor_dims: None,
        })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self, HilbertError> {
        let n = norm(&amplitudes);
        if amplitudes.is_empty() || !n.is_finite() || n == 0.0 {
            return Err(HilbertError::NormViolation { norm: n });
        }
        Ok(StateVector {
            amplitudes: amplitudes.iter().map(|z| z / n).collect(),
            factor_dims: None,
        })
    }

    /// Real amplitudes, rescaled to unit norm.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self, HilbertError> {
        Self::normalized(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = alloc::vec![ZERO; dim];
        amplitudes[index] = ONE;
        StateVector {
            amplitudes,
            factor_dims: None,
        }
    }

    /// `|a> ⊗ |b>`, tagged with the factor dimensions.
    pub fn product(a: &StateVector, b: &StateVector) -> Self {
        let mut amplitudes = Vec::with_capacity(a.dim() * b.dim());
        for x in &a.amplitudes {
            for y in &b.amplitudes {
                amplitudes.push(x * y);
            }
        }
        StateVector {
            amplitudes,
            factor_dims: Some((a.dim(), b.dim())),
        }
    }

    pub fn with_factors(mut self, d_a: usize, d_b: usize) -> Result<Self, HilbertError> {
        if d_a * d_b != self.dim() {
            return Err(HilbertError::DimensionMismatch {
                expected: d_a * d_b,
                found: self.dim(),
            });
        }
        self.factor_dims = Some((d_a, d_b));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn factor_dims(&self) -> Option<(usize, usize)> {
        self.factor_dims
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_trusted(CMatrix::outer(&self.amplitudes, &self.amplitudes))
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self, HilbertError> {
        if !matrix.is_square() {
            return Err(HilbertError::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if !matrix.is_hermitian(tol.eps) {
            return Err(HilbertError::NotHermitian);
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol.eps {
            return Err(HilbertError::TraceNotOne { trace });
        }
        let e = hermitian_eigen(&matrix, tol.eps);
        let min = e.values.last().copied().unwrap_or(0.0);
        if min < -tol.eps {
            return Err(HilbertError::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(DensityOperator {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Wraps a matrix known to be a density operator up to rounding.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        DensityOperator {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            matrix: CMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    /// `Σ p_i |v_i><v_i|` for unit vectors `v_i` and weights summing to one.
    pub fn mixture(terms: &[(f64, &StateVector)], tol: &Tolerances) -> Result<Self, HilbertError> {
        let dim = terms.first().map_or(0, |t| t.1.dim());
        let m = terms
            .iter()
            .try_fold(CMatrix::zeros(dim, dim), |acc, (p, v)| {
                if v.dim() != dim {
                    return Err(HilbertError::DimensionMismatch {
                        expected: dim,
                        found: v.dim(),
                    });
                }
                Ok(acc
                    .add(&CMatrix::outer(v.amplitudes(), v.amplitudes()).scale(C64::new(*p, 0.0))))
            })?;
        Self::new(m, tol)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Tr(W²)`.
    pub fn purity(&self) -> f64 {
        purity_of(&self.matrix)
    }

    pub fn is_pure(&self, eps: f64) -> bool {
        self.purity() >= 1.0 - eps
    }

    pub fn approx_eq(&self, other: &DensityOperator, eps: f64) -> bool {
        self.dim() == other.dim() && self.matrix.max_abs_diff(&other.matrix) <= eps
    }

    /// `W ⊗ V`.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            matrix: self.matrix.kron(&other.matrix),
        }
    }
}

/// Orthogonal projection `P = P² = P†`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: CMatrix,
    rank: usize,
}

impl Projection {
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self, HilbertError> {
        if !matrix.is_square() {
            return Err(HilbertError::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if !matrix.is_hermitian(tol.eps) || matrix.mul(&matrix).max_abs_diff(&matrix) > tol.eps {
            return Err(HilbertError::NotProjection);
        }
        let trace = matrix.trace().re;
        let rank = libm::round(trace);
        if (trace - rank).abs() > tol.eps || rank < 0.0 {
            return Err(HilbertError::NotProjection);
        }
        Ok(Projection {
            matrix: matrix.hermitian_part(),
            rank: rank as usize,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Projection {
            matrix: CMatrix::zeros(dim, dim),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projection {
            matrix: CMatrix::identity(dim),
            rank: dim,
        }
    }

    /// `|ψ><ψ|`.
    pub fn onto(v: &StateVector) -> Self {
        Projection {
            matrix: CMatrix::outer(v.amplitudes(), v.amplitudes()),
            rank: 1,
        }
    }

    /// Projection onto the span of arbitrary vectors.
    pub fn onto_span(dim: usize, vectors: &[Vec<C64>]) -> Self {
        Self::onto_orthonormal(dim, &orthonormalize(vectors, 1e-10))
    }

    pub(crate) fn onto_orthonormal(dim: usize, basis: &[Vec<C64>]) -> Self {
        let matrix = basis.iter().fold(CMatrix::zeros(dim, dim), |acc, u| {
            acc.add(&CMatrix::outer(u, u))
        });
        Projection {
            matrix,
            rank: basis.len(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn approx_eq(&self, other: &Projection, eps: f64) -> bool {
        self.dim() == other.dim() && self.matrix.max_abs_diff(&other.matrix) <= eps
    }

    /// `range(self) ⊆ range(other)`, tested as `other · self = self`.
    pub fn range_within(&self, other: &Projection, eps: f64) -> bool {
        self.dim() == other.dim()
            && other.matrix.mul(&self.matrix).max_abs_diff(&self.matrix) <= eps
    }

    /// Projection onto `range(self) ∩ range(other)`: the null space of
    /// `(I - P) + (I - Q)`.
    pub fn meet(&self, other: &Projection, eps: f64) -> Projection {
        let n = self.dim();
        let id = CMatrix::identity(n);
        let complement_sum = id.sub(&self.matrix).add(&id.sub(&other.matrix));
        let e = hermitian_eigen(&complement_sum, eps);
        let null: Vec<Vec<C64>> = e
            .values
            .iter()
            .zip(e.vectors)
            .filter(|(v, _)| v.abs() <= eps)
            .map(|(_, u)| u)
            .collect();
        Projection::onto_orthonormal(n, &null)
    }

    /// `I - P`.
    pub fn complement(&self) -> Projection {
        Projection {
            matrix: CMatrix::identity(self.dim()).sub(&self.matrix),
            rank: self.dim() - self.rank,
        }
    }

    /// `P ⊗ I_{d_b}`.
    pub fn tensor_identity(&self, d_b: usize) -> Projection {
        Projection {
            matrix: self.matrix.kron(&CMatrix::identity(d_b)),
            rank: self.rank * d_b,
        }
    }

    /// `I_{d_a} ⊗ P`.
    pub fn identity_tensor(&self, d_a: usize) -> Projection {
        Projection {
            matrix: CMatrix::identity(d_a).kron(&self.matrix),
            rank: self.rank * d_a,
        }
    }
}
